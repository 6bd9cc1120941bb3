#include "linlab/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "linlab/errors.hpp"

namespace linlab {

namespace fs = std::filesystem;

LabeledDataset load_cifar10(const std::vector<fs::path>& paths) {
  LINLAB_REQUIRE(!paths.empty(), "load_cifar10: no files given");
  std::vector<std::vector<unsigned char>> blobs;
  std::size_t records = 0;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open CIFAR-10 file " + p.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + p.string());
    if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
      throw FormatError(p.string() + ": length " + std::to_string(bytes.size()) +
                        " is not a positive multiple of 3073");
    }
    records += bytes.size() / kCifarRecordBytes;
    blobs.push_back(std::move(bytes));
  }

  LabeledDataset ds{Mat64(static_cast<Index>(records), static_cast<Index>(kCifarPixels)), {}};
  ds.labels.reserve(records);
  Index r = 0;
  for (std::size_t f = 0; f < blobs.size(); ++f) {
    const auto& bytes = blobs[f];
    for (std::size_t off = 0; off < bytes.size(); off += kCifarRecordBytes, ++r) {
      const int label = bytes[off];
      if (label >= kCifarClasses) {
        throw FormatError(paths[f].string() + ": label byte " + std::to_string(label) + " at record " +
                          std::to_string(off / kCifarRecordBytes));
      }
      ds.labels.push_back(label);
      auto row = ds.inputs.row(r);
      for (std::size_t k = 0; k < kCifarPixels; ++k) row[k] = bytes[off + 1 + k] / 255.0;
    }
  }
  return ds;
}

std::vector<fs::path> cifar_training_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> named, any;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".bin") continue;
    any.push_back(entry.path());
    if (entry.path().filename().string().starts_with("data_batch_")) named.push_back(entry.path());
  }
  auto& out = named.empty() ? any : named;
  if (out.empty()) throw IoError("no *.bin files in " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

BinaryDataset select_binary(const LabeledDataset& ds, int class_a, int class_b) {
  LINLAB_REQUIRE(class_a != class_b, "select_binary: classes must differ");
  LINLAB_REQUIRE(class_a >= 0 && class_a < kCifarClasses && class_b >= 0 && class_b < kCifarClasses,
                 "select_binary: classes must be in [0,9]");
  std::vector<Index> keep;
  Index count_a = 0, count_b = 0;
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    if (ds.labels[i] == class_a) ++count_a;
    else if (ds.labels[i] == class_b) ++count_b;
    else continue;
    keep.push_back(static_cast<Index>(i));
  }
  if (count_a == 0 || count_b == 0) {
    throw EmptyClassError("select_binary: class " + std::to_string(count_a == 0 ? class_a : class_b) +
                          " has no samples");
  }
  BinaryDataset out{Mat64(static_cast<Index>(keep.size()), ds.dim()), {}, {class_a, class_b}};
  out.labels.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.inputs.eigen().row(static_cast<Index>(i)) = ds.inputs.eigen().row(keep[i]);
    out.labels.push_back(ds.labels[keep[i]] == class_a ? 0 : 1);
  }
  return out;
}

BinaryDataset make_synthetic(Index dim, Index n_per_class, double separation, std::uint64_t seed) {
  LINLAB_REQUIRE(dim >= 2, "make_synthetic: dim must be >= 2");
  LINLAB_REQUIRE(n_per_class >= 1, "make_synthetic: n_per_class must be >= 1");
  LINLAB_REQUIRE(separation >= 0.0 && std::isfinite(separation), "make_synthetic: separation must be >= 0");

  // Alternating ±1 on an even prefix: unit length after scaling and orthogonal
  // to the all-ones vector, so the global shift below cannot align with it.
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  const Index even = dim - dim % 2;
  for (Index k = 0; k < even; ++k) u[k] = (k % 2 == 0) ? 1.0 : -1.0;
  u /= std::sqrt(static_cast<double>(even));

  const Index n = 2 * n_per_class;
  BinaryDataset out{Mat64(n, dim), std::vector<int>(static_cast<std::size_t>(n)), {0, 1}};
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto& x = out.inputs.eigen();
  for (Index i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    out.labels[static_cast<std::size_t>(i)] = label;
    const double sign = label == 0 ? 1.0 : -1.0;
    for (Index k = 0; k < dim; ++k) x(i, k) = sign * separation * u[k] + normal(gen);
  }
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  x = (x.array() - lo) / span;
  x = x.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

std::vector<Batch> epoch_batches(Index n, Index b, std::uint64_t seed, bool shuffle, std::uint64_t epoch) {
  LINLAB_REQUIRE(b >= 1, "batches: batch size must be >= 1");
  LINLAB_REQUIRE(b <= n, "batches: batch size " + std::to_string(b) + " exceeds dataset size " + std::to_string(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  if (shuffle) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32)};
    std::mt19937_64 gen(seq);
    std::shuffle(order.begin(), order.end(), gen);
  }
  std::vector<Batch> out;
  out.reserve(static_cast<std::size_t>(n / b));
  for (Index start = 0; start + b <= n; start += b) {
    out.push_back(Batch{{order.begin() + start, order.begin() + start + b}});
  }
  return out;
}

BatchStream::BatchStream(Index n, Index b, std::uint64_t seed, bool shuffle)
    : n_(n), b_(b), seed_(seed), shuffle_(shuffle) {
  current_ = epoch_batches(n_, b_, seed_, shuffle_, epoch_);
}

Batch BatchStream::next() {
  if (cursor_ == current_.size()) {
    ++epoch_;
    cursor_ = 0;
    current_ = epoch_batches(n_, b_, seed_, shuffle_, epoch_);
  }
  return current_[cursor_++];
}

std::pair<Mat64, std::vector<int>> gather(const BinaryDataset& ds, const Batch& batch) {
  LINLAB_REQUIRE(batch.size() >= 1, "gather: empty batch");
  Mat64 x(batch.size(), ds.dim());
  std::vector<int> y;
  y.reserve(batch.indices.size());
  for (std::size_t i = 0; i < batch.indices.size(); ++i) {
    const Index idx = batch.indices[i];
    LINLAB_REQUIRE(idx >= 0 && idx < ds.size(), "gather: index out of range");
    x.eigen().row(static_cast<Index>(i)) = ds.inputs.eigen().row(idx);
    y.push_back(ds.labels[static_cast<std::size_t>(idx)]);
  }
  return {std::move(x), std::move(y)};
}

}  // namespace linlab
