#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linlab/data.hpp"
#include "linlab/numerics.hpp"

namespace linlab {

struct LayerDims {
  Index in;   // n_l
  Index out;  // k_l
  friend bool operator==(const LayerDims&, const LayerDims&) = default;
};

enum class ArchPreset { A, B, C, Single };

/// Layer widths of a bias-free linear network. Widths must chain and the last
/// layer must have exactly two outputs.
struct ArchSpec {
  std::vector<LayerDims> layers;
  std::string name;

  Index depth() const noexcept { return static_cast<Index>(layers.size()); }
  Index input_dim() const { return layers.front().in; }

  /// Throws ContractViolation when widths do not chain or the head is not 2-wide.
  void validate() const;

  /// Widths w0 -> w1 -> ... -> 2.
  static ArchSpec from_widths(const std::vector<Index>& widths, std::string name = "custom");
  /// Named presets. `input_dim` replaces the 3072-wide image input, which is
  /// how the synthetic scale-downs reuse the preset hidden widths.
  static ArchSpec preset(ArchPreset p, Index input_dim = 3072);
  static ArchSpec single(Index input_dim) { return preset(ArchPreset::Single, input_dim); }

  friend bool operator==(const ArchSpec& a, const ArchSpec& b) { return a.layers == b.layers; }
};

/// θ_1..θ_L with θ_l of shape k_l x n_l.
struct LinearNet {
  ArchSpec arch;
  std::vector<Mat64> layers;
  std::uint64_t seed = 0;

  Index depth() const noexcept { return static_cast<Index>(layers.size()); }
  /// End-to-end map θ_L···θ_1 (2 x n_1).
  Mat64 product() const;
};

/// a_0 = inputs (b x n_1), a_l = a_{l-1} θ_lᵀ.
struct ForwardTrace {
  std::vector<Mat64> activations;
  const Mat64& logits() const { return activations.back(); }
  Index batch() const { return activations.front().rows(); }
};

/// Per-sample gradient of the loss w.r.t. the logits: g_i = softmax(z_i) - e_{y_i}.
/// For two classes every row is c_i·(1, -1).
struct OutputGrad {
  Mat64 g;
  Vec64 c;
};

struct GradientSet {
  std::vector<Mat64> grads;
  std::size_t step = 0;
};

struct LossAndGrad {
  double loss = 0.0;
  OutputGrad og;
};

/// Entries uniform on [-1/sqrt(n_l), 1/sqrt(n_l)] from one seeded stream.
LinearNet init_network(const ArchSpec& arch, std::uint64_t seed);

ForwardTrace forward(const LinearNet& net, const Mat64& inputs);

/// Mean log-softmax NLL over the batch and the per-sample output gradients.
LossAndGrad nll_loss_and_grad(const ForwardTrace& trace, std::span<const int> labels);

/// ∂θ_l = (1/b) Σ_i δ_{l,i} a_{l-1,i}ᵀ with δ_L = g and δ_{l-1} = θ_lᵀ δ_l.
GradientSet backward(const LinearNet& net, const ForwardTrace& trace, const OutputGrad& og);

/// forward + loss + backward on one batch. `loss_out` receives the batch loss.
GradientSet compute_gradients(const LinearNet& net, const Mat64& inputs, std::span<const int> labels,
                              double* loss_out = nullptr);

double nll_loss(const LinearNet& net, const Mat64& inputs, std::span<const int> labels);

/// Central differences of the mean NLL, one entry at a time, with the loss
/// evaluated in long double. eps in [1e-7, 1e-3].
GradientSet finite_difference_grads(const LinearNet& net, const Mat64& inputs, std::span<const int> labels,
                                    double eps);

/// Fraction of samples whose larger logit matches the label; ties pick class 0.
double evaluate_accuracy(const LinearNet& net, const BinaryDataset& ds);

}  // namespace linlab
