#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "linlab/analysis.hpp"
#include "linlab/data.hpp"
#include "linlab/model.hpp"
#include "linlab/optim.hpp"

namespace linlab {

enum class OptimizerKind { Sgd, Momentum, Gamma };

std::string to_string(OptimizerKind k);

struct DataSource {
  enum class Kind { Synthetic, Cifar };
  Kind kind = Kind::Synthetic;
  // Cifar: a directory or a single .bin file; extra files may be listed too.
  std::vector<std::filesystem::path> cifar_paths;
  Index dim = 256;
  Index n_per_class = 1024;
  double separation = 1.0;
};

/// Everything needed to reproduce one experiment.
struct TrainConfig {
  // Preset or explicit widths (hidden ... output, input width comes from the data).
  ArchPreset preset = ArchPreset::B;
  std::vector<Index> custom_widths;
  ClassPair classes = kCatDog;
  DataSource data;
  Index batch = 30;
  double learning_rate = 1e-2;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  double beta = 0.9;
  std::size_t steps = 50;
  std::uint64_t seed = 0;
  bool shuffle = true;

  ArchSpec arch_for(Index input_dim) const;
  std::string arch_name() const;
};

/// The synthetic dataset (seeded by cfg.seed) or the CIFAR class pair.
BinaryDataset load_dataset(const TrainConfig& cfg);

enum class Bound { AtMost, AtLeast };

struct Threshold {
  std::string metric;
  Bound bound = Bound::AtMost;
  double limit = 0.0;
};

/// Measured statistics against named bounds. pass holds exactly when every
/// threshold's metric exists, is not NaN and satisfies its bound.
struct ClaimVerdict {
  std::string claim_id;  // C1, C2, C3, COR1, C4, MOM, REDUCTION
  std::vector<std::pair<std::string, double>> measured;
  std::vector<Threshold> thresholds;
  std::vector<std::string> notes;
  bool pass = false;

  void set(const std::string& metric, double value);
  std::optional<double> get(const std::string& metric) const;
  void require(const std::string& metric, Bound bound, double limit);
  /// Recomputes `pass` from measured and thresholds.
  void evaluate();
};

struct LayerRecord {
  AngleStats grad_angles;
  double sigma_ratio = std::numeric_limits<double>::quiet_NaN();
  double oracle_residual = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;
  // Momentum runs only.
  std::optional<AngleStats> velocity_angles;
  double velocity_sigma_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// One optimisation step: minibatch loss at θ^t, training accuracy after the
/// update, and per-layer structure of ∂θ^t.
struct StepRecord {
  std::size_t step = 0;
  double loss = std::numeric_limits<double>::quiet_NaN();
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  std::vector<LayerRecord> layers;
};

struct AnalysisOptions {
  bool angles = true;         // pairwise angle stats per layer
  bool rank = true;           // σ2/σ1 and oracle residual per layer
  bool keep_gradients = false;
};

struct TrainingRun {
  std::vector<StepRecord> records;
  ClaimVerdict verdict;  // C4
  bool diverged = false;
  LinearNet initial_net;
  LinearNet final_net;
  std::vector<GradientSet> gradients;  // filled when keep_gradients
};

// Acceptance bounds.
inline constexpr double kClaim1MeanDeg = 0.01;
inline constexpr double kClaim1StdDeg = 0.005;
inline constexpr double kClaim2Residual = 3.62e-8;
inline constexpr double kClaim3MeanDeg = 0.001;
inline constexpr double kCorollaryResidual = 1e-10;
inline constexpr double kClaim4MeanDeg = 0.5;
inline constexpr double kRank1Ratio = 1e-10;
inline constexpr double kRank1Oracle = 1e-10;
inline constexpr double kMomentumResidual = 1e-12;
inline constexpr double kGammaClosedForm = 1e-15;
inline constexpr double kScalingAngleShift = 1e-9;
inline constexpr double kReductionAccuracy = 0.99;

struct Claim1Protocol {
  int initializations = 10;
  Index samples = 100;
};

struct Claim2Protocol {
  int initializations = 10;
};

/// Single-sample single-layer steps: angle between ∂θ_1[0] and x.
ClaimVerdict verify_claim1(const TrainConfig& cfg, const BinaryDataset& ds, const Claim1Protocol& p = {});

/// Batch gradient row 0 against (1/b) Σ α_i x_i at shared initial weights.
ClaimVerdict verify_claim2(const TrainConfig& cfg, const BinaryDataset& ds, const Claim2Protocol& p = {});

/// Row angles of ∂θ_1 in a deep net (C3) and the pairwise ratio identity (COR1).
std::vector<ClaimVerdict> verify_claim3_corollary1(const TrainConfig& cfg, const BinaryDataset& ds);

/// Trains for cfg.steps recording StepRecords; C4 bounds the per-step
/// per-layer mean angle, σ2/σ1 and the oracle residual of every ∂θ_l^t.
TrainingRun run_training_analysis(const TrainConfig& cfg, const BinaryDataset& ds, const AnalysisOptions& opts = {});

struct ReductionReport {
  std::vector<double> deep_accuracy;
  std::vector<double> single_accuracy;
  std::vector<double> deep_max_sigma_ratio;     // max over layers, per step
  std::vector<double> deep_max_oracle_residual; // max over layers, per step
  double deep_final = 0.0;
  double single_final = 0.0;
  ClaimVerdict verdict;  // REDUCTION
};

/// Trains cfg's deep architecture and a single layer on the same batch
/// stream. Asserts only that both reach kReductionAccuracy.
ReductionReport compare_reduction(const TrainConfig& cfg, const BinaryDataset& ds);

/// Momentum-run identity, random-sequence identity, closed-form γ check and
/// scaling invariance of row angles.
ClaimVerdict verify_momentum_equivalence(const TrainConfig& cfg, const BinaryDataset& ds);

/// Largest relative gap over random gradient sequences (layer shapes drawn
/// from the seed) for the given β.
double random_sequence_identity_residual(double beta, std::size_t n, std::uint64_t seed);

/// Settings of the figure presets 1 and 3-7.
struct FigurePreset {
  int id;
  ArchPreset arch;
  Index batch;
  double learning_rate;
  std::size_t steps;
  ClassPair classes;
};

const std::vector<FigurePreset>& figure_presets();
std::optional<FigurePreset> find_figure(int id);
TrainConfig figure_config(const FigurePreset& f, const DataSource& data, std::uint64_t seed);

}  // namespace linlab
