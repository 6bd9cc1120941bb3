#include "linlab/model.hpp"

#include <cmath>
#include <random>

#include "linlab/errors.hpp"

namespace linlab {

void ArchSpec::validate() const {
  LINLAB_REQUIRE(!layers.empty(), "ArchSpec: no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    LINLAB_REQUIRE(layers[l].in >= 1 && layers[l].out >= 1, "ArchSpec: widths must be positive");
    if (l > 0) {
      LINLAB_REQUIRE(layers[l - 1].out == layers[l].in,
                     "ArchSpec: layer " + std::to_string(l) + " input width does not chain");
    }
  }
  LINLAB_REQUIRE(layers.back().out == 2, "ArchSpec: final layer must have 2 outputs");
}

ArchSpec ArchSpec::from_widths(const std::vector<Index>& widths, std::string name) {
  LINLAB_REQUIRE(widths.size() >= 2, "ArchSpec::from_widths: need at least input and output width");
  ArchSpec a{{}, std::move(name)};
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) a.layers.push_back({widths[i], widths[i + 1]});
  a.validate();
  return a;
}

ArchSpec ArchSpec::preset(ArchPreset p, Index input_dim) {
  switch (p) {
    case ArchPreset::A:
      return from_widths({input_dim, 128, 2}, "A");
    case ArchPreset::B:
      return from_widths({input_dim, 2048, 1024, 128, 2}, "B");
    case ArchPreset::C:
      return from_widths({input_dim, 2500, 1500, 1024, 512, 256, 64, 16, 2}, "C");
    case ArchPreset::Single:
      return from_widths({input_dim, 2}, "single");
  }
  throw ContractViolation("ArchSpec::preset: unknown preset");
}

Mat64 LinearNet::product() const {
  LINLAB_REQUIRE(!layers.empty(), "LinearNet::product: empty network");
  RowMajorMatrix p = layers.back().eigen();
  for (auto l = depth() - 2; l >= 0; --l) {
    RowMajorMatrix next(p.rows(), layers[static_cast<std::size_t>(l)].cols());
    next.noalias() = p * layers[static_cast<std::size_t>(l)].eigen();
    p = std::move(next);
  }
  return Mat64(std::move(p));
}

LinearNet init_network(const ArchSpec& arch, std::uint64_t seed) {
  arch.validate();
  LinearNet net{arch, {}, seed};
  std::mt19937_64 gen(seed);
  for (const auto& d : arch.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(d.in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Mat64 w(d.out, d.in);
    for (double& x : w.data()) x = dist(gen);
    net.layers.push_back(std::move(w));
  }
  return net;
}

ForwardTrace forward(const LinearNet& net, const Mat64& inputs) {
  LINLAB_REQUIRE(net.depth() >= 1, "forward: empty network");
  LINLAB_REQUIRE(inputs.cols() == net.layers.front().cols(),
                 "forward: input width " + std::to_string(inputs.cols()) + " does not match n_1 = " +
                     std::to_string(net.layers.front().cols()));
  ForwardTrace t;
  t.activations.reserve(net.layers.size() + 1);
  t.activations.push_back(inputs);
  for (const auto& w : net.layers) {
    RowMajorMatrix a(inputs.rows(), w.rows());
    a.noalias() = t.activations.back().eigen() * w.eigen().transpose();
    t.activations.emplace_back(std::move(a));
  }
  return t;
}

LossAndGrad nll_loss_and_grad(const ForwardTrace& trace, std::span<const int> labels) {
  const Mat64& z = trace.logits();
  LINLAB_REQUIRE(z.cols() == 2, "nll_loss_and_grad: expected 2 logits");
  LINLAB_REQUIRE(static_cast<Index>(labels.size()) == z.rows(), "nll_loss_and_grad: label count mismatch");
  const Index b = z.rows();
  LossAndGrad out{0.0, {Mat64(b, 2), Vec64(static_cast<std::size_t>(b))}};
  double total = 0.0;
  for (Index i = 0; i < b; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    LINLAB_REQUIRE(y == 0 || y == 1, "nll_loss_and_grad: labels must be 0 or 1");
    const double z0 = z(i, 0);
    const double z1 = z(i, 1);
    const double m = std::max(z0, z1);
    const double e0 = std::exp(z0 - m);
    const double e1 = std::exp(z1 - m);
    const double s = e0 + e1;
    total += m + std::log(s) - (y == 0 ? z0 : z1);
    // g_0 = p_0 - [y=0]; for y = 0 write it as -p_1 to avoid cancellation.
    const double c = y == 0 ? -(e1 / s) : e0 / s;
    out.og.c[static_cast<std::size_t>(i)] = c;
    out.og.g(i, 0) = c;
    out.og.g(i, 1) = -c;
  }
  out.loss = total / static_cast<double>(b);
  return out;
}

GradientSet backward(const LinearNet& net, const ForwardTrace& trace, const OutputGrad& og) {
  const auto depth = static_cast<std::size_t>(net.depth());
  LINLAB_REQUIRE(trace.activations.size() == depth + 1, "backward: trace depth mismatch");
  LINLAB_REQUIRE(og.g.rows() == trace.batch() && og.g.cols() == 2, "backward: output gradient shape mismatch");
  const double inv_b = 1.0 / static_cast<double>(trace.batch());

  GradientSet gs;
  gs.grads.resize(depth);
  RowMajorMatrix delta = og.g.eigen();
  for (std::size_t l = depth; l-- > 0;) {
    const auto& a_prev = trace.activations[l].eigen();
    const auto& w = net.layers[l].eigen();
    LINLAB_REQUIRE(delta.cols() == w.rows() && a_prev.cols() == w.cols(), "backward: layer shape mismatch");
    RowMajorMatrix grad(w.rows(), w.cols());
    grad.noalias() = delta.transpose() * a_prev;
    grad *= inv_b;
    gs.grads[l] = Mat64(std::move(grad));
    if (l > 0) {
      RowMajorMatrix next(delta.rows(), w.cols());
      next.noalias() = delta * w;
      delta = std::move(next);
    }
  }
  return gs;
}

GradientSet compute_gradients(const LinearNet& net, const Mat64& inputs, std::span<const int> labels,
                              double* loss_out) {
  const auto trace = forward(net, inputs);
  const auto lg = nll_loss_and_grad(trace, labels);
  if (loss_out != nullptr) *loss_out = lg.loss;
  return backward(net, trace, lg.og);
}

double nll_loss(const LinearNet& net, const Mat64& inputs, std::span<const int> labels) {
  return nll_loss_and_grad(forward(net, inputs), labels).loss;
}

namespace {

using ExtMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Mean NLL in extended precision.
long double extended_loss(const std::vector<ExtMatrix>& layers, const ExtMatrix& inputs, std::span<const int> labels) {
  ExtMatrix a = inputs;
  for (const auto& w : layers) {
    ExtMatrix next = a * w.transpose();
    a = std::move(next);
  }
  long double total = 0.0L;
  for (Index i = 0; i < a.rows(); ++i) {
    const long double z0 = a(i, 0), z1 = a(i, 1);
    const long double m = std::max(z0, z1);
    total += m + std::log(std::exp(z0 - m) + std::exp(z1 - m)) - (labels[static_cast<std::size_t>(i)] == 0 ? z0 : z1);
  }
  return total / static_cast<long double>(a.rows());
}

}  // namespace

GradientSet finite_difference_grads(const LinearNet& net, const Mat64& inputs, std::span<const int> labels,
                                    double eps) {
  LINLAB_REQUIRE(eps >= 1e-7 && eps <= 1e-3, "finite_difference_grads: eps must lie in [1e-7, 1e-3]");
  LINLAB_REQUIRE(inputs.cols() == net.layers.front().cols(), "finite_difference_grads: input width mismatch");
  LINLAB_REQUIRE(static_cast<Index>(labels.size()) == inputs.rows(), "finite_difference_grads: label count mismatch");
  for (int y : labels) LINLAB_REQUIRE(y == 0 || y == 1, "finite_difference_grads: labels must be 0 or 1");

  std::vector<ExtMatrix> probe;
  for (const auto& w : net.layers) probe.push_back(w.eigen().cast<long double>());
  const ExtMatrix x = inputs.eigen().cast<long double>();
  const long double h = eps;
  GradientSet gs;
  for (std::size_t l = 0; l < probe.size(); ++l) {
    Mat64 g(probe[l].rows(), probe[l].cols());
    long double* w = probe[l].data();
    for (Index k = 0; k < probe[l].size(); ++k) {
      const long double orig = w[k];
      w[k] = orig + h;
      const long double up = extended_loss(probe, x, labels);
      w[k] = orig - h;
      const long double down = extended_loss(probe, x, labels);
      w[k] = orig;
      g.data()[static_cast<std::size_t>(k)] = static_cast<double>((up - down) / (2.0L * h));
    }
    gs.grads.push_back(std::move(g));
  }
  return gs;
}

double evaluate_accuracy(const LinearNet& net, const BinaryDataset& ds) {
  LINLAB_REQUIRE(ds.size() >= 1, "evaluate_accuracy: empty dataset");
  LINLAB_REQUIRE(ds.dim() == net.layers.front().cols(), "evaluate_accuracy: input width mismatch");
  // The network is linear, so classify with the collapsed 2 x n_1 map.
  const Mat64 p = net.product();
  RowMajorMatrix logits(ds.size(), 2);
  logits.noalias() = ds.inputs.eigen() * p.eigen().transpose();
  Index correct = 0;
  for (Index i = 0; i < ds.size(); ++i) {
    const int pred = logits(i, 0) >= logits(i, 1) ? 0 : 1;
    if (pred == ds.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

}  // namespace linlab
