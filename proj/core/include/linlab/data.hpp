#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "linlab/numerics.hpp"

namespace linlab {

inline constexpr std::size_t kCifarRecordBytes = 3073;
inline constexpr std::size_t kCifarPixels = 3072;
inline constexpr int kCifarClasses = 10;

/// Samples as rows of `inputs` (features in [0,1]) with 10-way labels.
struct LabeledDataset {
  Mat64 inputs;
  std::vector<int> labels;

  Index size() const noexcept { return inputs.rows(); }
  Index dim() const noexcept { return inputs.cols(); }
};

/// Two-class subset with labels remapped to {0, 1}.
struct BinaryDataset {
  Mat64 inputs;
  std::vector<int> labels;
  std::pair<int, int> class_names{0, 1};

  Index size() const noexcept { return inputs.rows(); }
  Index dim() const noexcept { return inputs.cols(); }
};

struct Batch {
  std::vector<Index> indices;
  Index size() const noexcept { return static_cast<Index>(indices.size()); }
};

struct ClassPair {
  int a;
  int b;
  std::string name;
};

inline const ClassPair kCatDog{3, 5, "cat-dog"};
inline const ClassPair kShipTruck{8, 9, "ship-truck"};
inline const ClassPair kAirplaneAutomobile{0, 1, "airplane-automobile"};

/// Parses CIFAR-10 binary batch files in the given order.
/// Throws IoError on unreadable files, FormatError on bad length or label.
LabeledDataset load_cifar10(const std::vector<std::filesystem::path>& paths);

/// The training batches (data_batch_*.bin) in `dir`, or every *.bin file if
/// none are named that way. Sorted by filename.
std::vector<std::filesystem::path> cifar_training_files(const std::filesystem::path& dir);

/// Keeps samples of class_a (-> label 0) and class_b (-> label 1) in order.
BinaryDataset select_binary(const LabeledDataset& ds, int class_a, int class_b);

/// Two spherical unit-variance Gaussians at ±separation·u for a fixed unit
/// direction u orthogonal to the all-ones vector, then one global affine map
/// of all features into [0,1]. Samples alternate 0,1,0,1,...
BinaryDataset make_synthetic(Index dim, Index n_per_class, double separation, std::uint64_t seed);

/// Full batches of one epoch; the trailing partial batch is dropped.
/// With shuffle, the order is a permutation seeded by (seed, epoch).
std::vector<Batch> epoch_batches(Index n, Index b, std::uint64_t seed, bool shuffle, std::uint64_t epoch);

/// Endless deterministic batch sequence across epochs.
class BatchStream {
 public:
  BatchStream(Index n, Index b, std::uint64_t seed, bool shuffle);

  Batch next();
  std::uint64_t epoch() const noexcept { return epoch_; }
  Index batches_per_epoch() const noexcept { return n_ / b_; }

 private:
  Index n_;
  Index b_;
  std::uint64_t seed_;
  bool shuffle_;
  std::uint64_t epoch_ = 0;
  std::size_t cursor_ = 0;
  std::vector<Batch> current_;
};

/// Rows of `ds` at the batch indices, plus their labels.
std::pair<Mat64, std::vector<int>> gather(const BinaryDataset& ds, const Batch& batch);

}  // namespace linlab
