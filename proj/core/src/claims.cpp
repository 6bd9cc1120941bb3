#include "linlab/claims.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "linlab/errors.hpp"

namespace linlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

// First `count` entries of a seeded permutation of 0..n-1.
std::vector<Index> pick_indices(Index n, Index count, std::uint64_t seed, std::uint64_t salt) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto gen = stream_for(seed, salt);
  std::shuffle(order.begin(), order.end(), gen);
  order.resize(static_cast<std::size_t>(std::min(n, count)));
  return order;
}

Mat64 rows_of(const Mat64& m, const std::vector<Index>& idx) {
  Mat64 out(static_cast<Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.eigen().row(static_cast<Index>(i)) = m.eigen().row(idx[i]);
  return out;
}

std::vector<int> labels_of(const BinaryDataset& ds, const std::vector<Index>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(ds.labels[static_cast<std::size_t>(i)]);
  return out;
}

// ∂θ_1 of a single-sample step, one row per sample.
Mat64 per_sample_first_rows(const LinearNet& net, const Mat64& inputs, const std::vector<int>& labels) {
  Mat64 out(inputs.rows(), inputs.cols());
  for (Index i = 0; i < inputs.rows(); ++i) {
    Mat64 x(1, inputs.cols());
    x.eigen().row(0) = inputs.eigen().row(i);
    const int y = labels[static_cast<std::size_t>(i)];
    const auto g = compute_gradients(net, x, std::span<const int>(&y, 1));
    out.eigen().row(i) = g.grads.front().eigen().row(0);
  }
  return out;
}

bool all_finite(const GradientSet& gs) {
  return std::all_of(gs.grads.begin(), gs.grads.end(), [](const Mat64& m) { return m.all_finite(); });
}

void require_steps(const TrainConfig& cfg) {
  LINLAB_REQUIRE(cfg.steps >= 1, "steps must be >= 1");
  LINLAB_REQUIRE(cfg.batch >= 1, "batch size must be >= 1");
  LINLAB_REQUIRE(cfg.learning_rate > 0.0, "learning rate must be positive");
}

}  // namespace

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::Momentum: return "momentum";
    case OptimizerKind::Gamma: return "gamma";
  }
  return "unknown";
}

ArchSpec TrainConfig::arch_for(Index input_dim) const {
  if (!custom_widths.empty()) {
    std::vector<Index> w{input_dim};
    w.insert(w.end(), custom_widths.begin(), custom_widths.end());
    return ArchSpec::from_widths(w, "custom");
  }
  return ArchSpec::preset(preset, input_dim);
}

std::string TrainConfig::arch_name() const {
  if (!custom_widths.empty()) {
    std::string s = "dims=";
    for (std::size_t i = 0; i < custom_widths.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(custom_widths[i]);
    }
    return s;
  }
  return ArchSpec::preset(preset, 2).name;
}

BinaryDataset load_dataset(const TrainConfig& cfg) {
  const auto& d = cfg.data;
  if (d.kind == DataSource::Kind::Synthetic) return make_synthetic(d.dim, d.n_per_class, d.separation, cfg.seed);
  if (d.cifar_paths.empty()) throw IoError("no CIFAR-10 path given");
  std::vector<std::filesystem::path> files;
  for (const auto& p : d.cifar_paths) {
    if (std::filesystem::is_directory(p)) {
      const auto in_dir = cifar_training_files(p);
      files.insert(files.end(), in_dir.begin(), in_dir.end());
    } else {
      files.push_back(p);
    }
  }
  return select_binary(load_cifar10(files), cfg.classes.a, cfg.classes.b);
}

// --- ClaimVerdict ----------------------------------------------------------

void ClaimVerdict::set(const std::string& metric, double value) {
  for (auto& [k, v] : measured) {
    if (k == metric) {
      v = value;
      return;
    }
  }
  measured.emplace_back(metric, value);
}

std::optional<double> ClaimVerdict::get(const std::string& metric) const {
  for (const auto& [k, v] : measured) {
    if (k == metric) return v;
  }
  return std::nullopt;
}

void ClaimVerdict::require(const std::string& metric, Bound bound, double limit) {
  thresholds.push_back({metric, bound, limit});
}

void ClaimVerdict::evaluate() {
  pass = !thresholds.empty();
  for (const auto& t : thresholds) {
    const auto v = get(t.metric);
    if (!v || std::isnan(*v)) {
      pass = false;
      continue;
    }
    const bool ok = t.bound == Bound::AtMost ? *v <= t.limit : *v >= t.limit;
    pass = pass && ok;
  }
}

// --- Claim 1 ---------------------------------------------------------------

ClaimVerdict verify_claim1(const TrainConfig& cfg, const BinaryDataset& ds, const Claim1Protocol& p) {
  LINLAB_REQUIRE(ds.size() >= 1, "verify_claim1: empty dataset");
  ClaimVerdict v{"C1", {}, {}, {}, false};
  const auto arch = ArchSpec::single(ds.dim());
  std::vector<double> angles;
  std::size_t skipped = 0;
  for (int k = 0; k < p.initializations; ++k) {
    const auto seed = cfg.seed + static_cast<std::uint64_t>(k);
    const auto net = init_network(arch, seed);
    for (Index idx : pick_indices(ds.size(), p.samples, seed, 0xC1)) {
      Mat64 x(1, ds.dim());
      x.eigen().row(0) = ds.inputs.eigen().row(idx);
      const int y = ds.labels[static_cast<std::size_t>(idx)];
      const auto g = compute_gradients(net, x, std::span<const int>(&y, 1));
      const auto a = folded_angle_degrees(g.grads.front().row(0), x.row(0));
      if (a) angles.push_back(*a);
      else ++skipped;
    }
  }
  double mean = kNaN, sd = kNaN, mx = kNaN;
  if (!angles.empty()) {
    mean = std::accumulate(angles.begin(), angles.end(), 0.0) / static_cast<double>(angles.size());
    double ss = 0.0;
    for (double a : angles) ss += (a - mean) * (a - mean);
    sd = std::sqrt(ss / static_cast<double>(angles.size()));
    mx = *std::max_element(angles.begin(), angles.end());
  }
  v.set("mean_angle_deg", mean);
  v.set("std_angle_deg", sd);
  v.set("max_angle_deg", mx);
  v.set("trials", static_cast<double>(angles.size()));
  v.set("skipped_trials", static_cast<double>(skipped));
  v.require("mean_angle_deg", Bound::AtMost, kClaim1MeanDeg);
  v.require("std_angle_deg", Bound::AtMost, kClaim1StdDeg);
  v.notes.push_back("single layer, " + std::to_string(p.initializations) + " initializations x " +
                    std::to_string(p.samples) + " single-sample steps; angle between d(theta_1[0]) and x");
  v.evaluate();
  return v;
}

// --- Claim 2 ---------------------------------------------------------------

ClaimVerdict verify_claim2(const TrainConfig& cfg, const BinaryDataset& ds, const Claim2Protocol& p) {
  LINLAB_REQUIRE(cfg.batch >= 1 && cfg.batch <= ds.size(), "verify_claim2: batch size out of range");
  ClaimVerdict v{"C2", {}, {}, {}, false};
  const auto arch = ArchSpec::single(ds.dim());
  double sum_abs = 0.0, sum_rel = 0.0, max_abs = 0.0;
  std::size_t skipped = 0;
  for (int k = 0; k < p.initializations; ++k) {
    const auto seed = cfg.seed + static_cast<std::uint64_t>(k);
    const auto net = init_network(arch, seed);
    const auto idx = pick_indices(ds.size(), cfg.batch, seed, 0xC2);
    const Mat64 x = rows_of(ds.inputs, idx);
    const auto y = labels_of(ds, idx);
    const Mat64 per_sample = per_sample_first_rows(net, x, y);
    const auto batch = compute_gradients(net, x, y);
    const auto rep = extract_proportionality(per_sample, batch.grads.front(), x);
    skipped += rep.skipped_samples;
    sum_abs += rep.abs_residual;
    sum_rel += rep.residual;
    max_abs = std::max(max_abs, rep.abs_residual);
  }
  const double n = static_cast<double>(p.initializations);
  v.set("mean_abs_residual", sum_abs / n);
  v.set("mean_rel_residual", sum_rel / n);
  v.set("max_abs_residual", max_abs);
  v.set("batch_size", static_cast<double>(cfg.batch));
  v.set("skipped_samples", static_cast<double>(skipped));
  v.require("mean_abs_residual", Bound::AtMost, kClaim2Residual);
  v.notes.push_back("residual |d(theta_1[0]) - (1/b) sum alpha_i x_i| averaged over " +
                    std::to_string(p.initializations) + " initializations; alpha_i from single-sample steps at the same weights");
  v.evaluate();
  return v;
}

// --- Claim 3 / Corollary 1 -------------------------------------------------

std::vector<ClaimVerdict> verify_claim3_corollary1(const TrainConfig& cfg, const BinaryDataset& ds) {
  LINLAB_REQUIRE(cfg.batch >= 1 && cfg.batch <= ds.size(), "verify_claim3: batch size out of range");
  ClaimVerdict c3{"C3", {}, {}, {}, false};
  ClaimVerdict cor{"COR1", {}, {}, {}, false};
  const auto arch = cfg.arch_for(ds.dim());
  const auto net = init_network(arch, cfg.seed);
  const auto idx = pick_indices(ds.size(), cfg.batch, cfg.seed, 0xC3);
  const Mat64 x = rows_of(ds.inputs, idx);
  const auto y = labels_of(ds, idx);
  const auto batch = compute_gradients(net, x, y);
  const Mat64& g1 = batch.grads.front();

  const auto stats = pairwise_row_angle_stats(g1);
  c3.set("mean_folded_angle_deg", stats.mean_deg);
  c3.set("max_folded_angle_deg", stats.max_deg);
  c3.set("pair_count", static_cast<double>(stats.pair_count));
  c3.set("skipped_rows", static_cast<double>(stats.skipped_rows));
  c3.require("mean_folded_angle_deg", Bound::AtMost, kClaim3MeanDeg);
  c3.notes.push_back("architecture " + arch.name + ", batch " + std::to_string(cfg.batch) +
                     ", all row pairs of d(theta_1) after one step");

  const Mat64 per_sample = per_sample_first_rows(net, x, y);
  const auto rep = extract_proportionality(per_sample, g1, x);
  c3.set("row0_rel_residual", rep.residual);
  if (!stats.defined()) c3.notes.push_back("degenerate: fewer than two usable gradient rows");

  if (rep.defined) {
    cor.set("cross_identity_residual", cross_proportionality_residual(g1, rep.ratios));
  } else {
    cor.set("cross_identity_residual", kNaN);
    cor.notes.push_back("degenerate: reference vector (1/b) sum alpha_i x_i vanished");
  }
  cor.set("rows", static_cast<double>(g1.rows()));
  cor.set("skipped_samples", static_cast<double>(rep.skipped_samples));
  cor.require("cross_identity_residual", Bound::AtMost, kCorollaryResidual);
  cor.notes.push_back("max over row pairs of |r_j2 g[j1] - r_j1 g[j2]| / max side norm; r_j by least-squares projection");

  c3.evaluate();
  cor.evaluate();
  return {c3, cor};
}

// --- Claim 4: training analysis -------------------------------------------

TrainingRun run_training_analysis(const TrainConfig& cfg, const BinaryDataset& ds, const AnalysisOptions& opts) {
  require_steps(cfg);
  LINLAB_REQUIRE(cfg.batch <= ds.size(), "batch size exceeds dataset size");
  TrainingRun run;
  run.verdict.claim_id = "C4";
  const auto arch = cfg.arch_for(ds.dim());
  LinearNet net = init_network(arch, cfg.seed);
  run.initial_net = net;

  BatchStream stream(ds.size(), cfg.batch, cfg.seed, cfg.shuffle);
  MomentumState momentum;
  if (cfg.optimizer == OptimizerKind::Momentum) momentum = MomentumState::zeros_like(net, cfg.beta);
  std::optional<GammaSchedule> gammas;
  if (cfg.optimizer == OptimizerKind::Gamma) gammas = gamma_schedule(cfg.beta, cfg.steps);

  double worst_angle = 0.0, worst_ratio = 0.0, worst_oracle = 0.0;
  std::size_t undefined_layers = 0;
  for (std::size_t t = 1; t <= cfg.steps; ++t) {
    const auto [x, y] = gather(ds, stream.next());
    StepRecord rec;
    rec.step = t;
    double loss = kNaN;
    GradientSet grads = compute_gradients(net, x, y, &loss);
    grads.step = t;
    rec.loss = loss;
    if (!std::isfinite(loss) || !all_finite(grads)) {
      run.diverged = true;
      run.records.push_back(std::move(rec));
      run.verdict.notes.push_back("diverged at step " + std::to_string(t) + ": non-finite loss or gradient");
      break;
    }

    rec.layers.resize(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      auto& lr = rec.layers[l];
      if (opts.angles && grads.grads[l].rows() >= 2) {
        lr.grad_angles = pairwise_row_angle_stats(grads.grads[l]);
        if (lr.grad_angles.defined()) worst_angle = std::max(worst_angle, lr.grad_angles.mean_deg);
        else ++undefined_layers;
      }
      if (opts.rank) {
        const auto r1 = rank1_report(grads, net, static_cast<Index>(l));
        lr.degenerate = r1.degenerate;
        if (!r1.degenerate) {
          lr.sigma_ratio = r1.ratio;
          lr.oracle_residual = r1.oracle_residual;
          worst_ratio = std::max(worst_ratio, r1.ratio);
          worst_oracle = std::max(worst_oracle, r1.oracle_residual);
        }
      }
    }

    switch (cfg.optimizer) {
      case OptimizerKind::Sgd:
        sgd_step(net, grads, cfg.learning_rate);
        break;
      case OptimizerKind::Momentum:
        momentum_step(net, momentum, grads, cfg.learning_rate);
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
          const auto& vel = momentum.velocities[l];
          if (opts.angles && vel.rows() >= 2) rec.layers[l].velocity_angles = pairwise_row_angle_stats(vel);
          if (opts.rank && vel.frobenius_norm() >= kDegenerateNorm) rec.layers[l].velocity_sigma_ratio = singular_ratio(vel);
        }
        break;
      case OptimizerKind::Gamma:
        gamma_variant_step(net, grads, cfg.learning_rate, gammas->at(t));
        break;
    }
    rec.accuracy = evaluate_accuracy(net, ds);
    if (opts.keep_gradients) run.gradients.push_back(std::move(grads));
    run.records.push_back(std::move(rec));
  }
  run.final_net = net;

  auto& v = run.verdict;
  v.set("steps_completed", static_cast<double>(run.diverged ? run.records.size() - 1 : run.records.size()));
  v.set("diverged", run.diverged ? 1.0 : 0.0);
  v.require("diverged", Bound::AtMost, 0.0);
  if (opts.angles) {
    v.set("max_mean_angle_deg", worst_angle);
    v.set("undefined_layer_steps", static_cast<double>(undefined_layers));
    v.require("max_mean_angle_deg", Bound::AtMost, kClaim4MeanDeg);
  }
  if (opts.rank) {
    v.set("max_sigma_ratio", worst_ratio);
    v.set("max_oracle_residual", worst_oracle);
    v.require("max_sigma_ratio", Bound::AtMost, kRank1Ratio);
    v.require("max_oracle_residual", Bound::AtMost, kRank1Oracle);
  }
  if (!run.records.empty() && !run.diverged) v.set("final_accuracy", run.records.back().accuracy);
  v.notes.push_back("architecture " + arch.name + ", optimizer " + to_string(cfg.optimizer) + ", batch " +
                    std::to_string(cfg.batch) + ", " + std::to_string(cfg.steps) + " steps");
  if (cfg.optimizer == OptimizerKind::Momentum) {
    v.notes.push_back("velocity angles and sigma ratios are recorded without a threshold");
  }
  v.evaluate();
  return run;
}

// --- Reduction comparison ---------------------------------------------------

ReductionReport compare_reduction(const TrainConfig& cfg, const BinaryDataset& ds) {
  require_steps(cfg);
  LINLAB_REQUIRE(cfg.batch <= ds.size(), "batch size exceeds dataset size");
  ReductionReport rep;
  const auto deep_arch = cfg.arch_for(ds.dim());
  LinearNet deep = init_network(deep_arch, cfg.seed);
  LinearNet single = init_network(ArchSpec::single(ds.dim()), cfg.seed);

  // Both learners see the identical batch sequence.
  BatchStream stream(ds.size(), cfg.batch, cfg.seed, cfg.shuffle);
  bool diverged = false;
  for (std::size_t t = 1; t <= cfg.steps && !diverged; ++t) {
    const auto [x, y] = gather(ds, stream.next());
    double deep_loss = kNaN, single_loss = kNaN;
    const auto gd = compute_gradients(deep, x, y, &deep_loss);
    const auto gs = compute_gradients(single, x, y, &single_loss);
    if (!std::isfinite(deep_loss) || !std::isfinite(single_loss) || !all_finite(gd) || !all_finite(gs)) {
      diverged = true;
      rep.verdict.notes.push_back("diverged at step " + std::to_string(t));
      break;
    }
    double worst_ratio = 0.0, worst_oracle = 0.0;
    for (Index l = 0; l < deep.depth(); ++l) {
      const auto r1 = rank1_report(gd, deep, l);
      if (r1.degenerate) continue;
      worst_ratio = std::max(worst_ratio, r1.ratio);
      worst_oracle = std::max(worst_oracle, r1.oracle_residual);
    }
    rep.deep_max_sigma_ratio.push_back(worst_ratio);
    rep.deep_max_oracle_residual.push_back(worst_oracle);
    sgd_step(deep, gd, cfg.learning_rate);
    sgd_step(single, gs, cfg.learning_rate);
    rep.deep_accuracy.push_back(evaluate_accuracy(deep, ds));
    rep.single_accuracy.push_back(evaluate_accuracy(single, ds));
  }

  auto& v = rep.verdict;
  v.claim_id = "REDUCTION";
  auto peak = [](const std::vector<double>& c) { return c.empty() ? kNaN : *std::max_element(c.begin(), c.end()); };
  rep.deep_final = rep.deep_accuracy.empty() ? kNaN : rep.deep_accuracy.back();
  rep.single_final = rep.single_accuracy.empty() ? kNaN : rep.single_accuracy.back();
  v.set("deep_peak_accuracy", peak(rep.deep_accuracy));
  v.set("single_peak_accuracy", peak(rep.single_accuracy));
  v.set("deep_final_accuracy", rep.deep_final);
  v.set("single_final_accuracy", rep.single_final);
  v.set("deep_max_sigma_ratio", peak(rep.deep_max_sigma_ratio));
  v.set("deep_max_oracle_residual", peak(rep.deep_max_oracle_residual));
  v.set("diverged", diverged ? 1.0 : 0.0);
  v.require("deep_peak_accuracy", Bound::AtLeast, kReductionAccuracy);
  v.require("single_peak_accuracy", Bound::AtLeast, kReductionAccuracy);
  v.require("deep_max_sigma_ratio", Bound::AtMost, kRank1Ratio);
  v.require("deep_max_oracle_residual", Bound::AtMost, kRank1Oracle);
  v.require("diverged", Bound::AtMost, 0.0);
  v.notes.push_back("deep architecture " + deep_arch.name + " vs single layer on one batch stream; curve closeness is reported, not asserted");
  v.evaluate();
  return rep;
}

// --- Momentum equivalence ---------------------------------------------------

double random_sequence_identity_residual(double beta, std::size_t n, std::uint64_t seed) {
  auto gen = stream_for(seed, 0x5EC);
  std::uniform_int_distribution<Index> width(1, 12);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t layers = 3;
  std::vector<std::pair<Index, Index>> shapes;
  for (std::size_t l = 0; l < layers; ++l) shapes.emplace_back(width(gen), width(gen));
  std::vector<GradientSet> seq(n);
  for (std::size_t s = 0; s < n; ++s) {
    seq[s].step = s + 1;
    for (const auto& [r, c] : shapes) {
      Mat64 m(r, c);
      for (double& e : m.data()) e = normal(gen);
      seq[s].grads.push_back(std::move(m));
    }
  }
  return momentum_identity_residual(seq, beta);
}

ClaimVerdict verify_momentum_equivalence(const TrainConfig& cfg, const BinaryDataset& ds) {
  require_steps(cfg);
  ClaimVerdict v{"MOM", {}, {}, {}, false};

  // (a) identity on a recorded momentum run, plus the end state it implies.
  TrainConfig mcfg = cfg;
  mcfg.optimizer = OptimizerKind::Momentum;
  AnalysisOptions opts;
  opts.angles = false;
  opts.rank = false;
  opts.keep_gradients = true;
  const auto run = run_training_analysis(mcfg, ds, opts);
  if (run.diverged) {
    v.set("run_identity_residual", kNaN);
    v.notes.push_back("momentum run diverged");
  } else {
    v.set("run_identity_residual", momentum_identity_residual(run.gradients, cfg.beta));
    const auto sched = gamma_schedule(cfg.beta, run.gradients.size());
    LinearNet replay = run.initial_net;
    for (std::size_t s = 0; s < run.gradients.size(); ++s) {
      gamma_variant_step(replay, run.gradients[s], cfg.learning_rate, sched.gammas[s]);
    }
    double state_gap = 0.0;
    for (std::size_t l = 0; l < replay.layers.size(); ++l) {
      const auto& a = run.final_net.layers[l].eigen();
      state_gap = std::max(state_gap, (a - replay.layers[l].eigen()).norm() / std::max(a.norm(), 1e-300));
    }
    v.set("state_residual", state_gap);
    v.require("state_residual", Bound::AtMost, kMomentumResidual);
  }
  v.require("run_identity_residual", Bound::AtMost, kMomentumResidual);

  // (b) the identity is pure algebra: random sequences.
  double worst_random = 0.0;
  double worst_closed = 0.0;
  for (double beta : {0.0, 0.5, 0.9, 0.99}) {
    worst_random = std::max(worst_random, random_sequence_identity_residual(beta, 50, cfg.seed));
    const auto sched = gamma_schedule(beta, 50);
    for (std::size_t t = 1; t <= 50; ++t) {
      worst_closed = std::max(worst_closed, std::abs(sched.at(t) - (1.0 - std::pow(beta, static_cast<double>(50 - t + 1)))));
    }
  }
  v.set("random_identity_residual", worst_random);
  v.set("gamma_closed_form_gap", worst_closed);
  v.require("random_identity_residual", Bound::AtMost, kMomentumResidual);
  v.require("gamma_closed_form_gap", Bound::AtMost, kGammaClosedForm);

  // (c) scaling by γ_t leaves row angles unchanged.
  double shift = 0.0;
  if (!run.gradients.empty()) {
    const auto sched = gamma_schedule(cfg.beta, run.gradients.size());
    const auto& g = run.gradients.front();
    for (std::size_t l = 0; l < g.grads.size(); ++l) {
      if (g.grads[l].rows() < 2) continue;
      const auto base = pairwise_row_angle_stats(g.grads[l]);
      if (!base.defined()) continue;
      for (double gamma : sched.gammas) {
        const auto scaled = pairwise_row_angle_stats(gamma * g.grads[l]);
        shift = std::max({shift, std::abs(scaled.mean_deg - base.mean_deg), std::abs(scaled.max_deg - base.max_deg)});
      }
    }
  }
  v.set("gamma_scaling_angle_shift", shift);
  v.require("gamma_scaling_angle_shift", Bound::AtMost, kScalingAngleShift);
  v.set("beta", cfg.beta);
  v.set("horizon", static_cast<double>(cfg.steps));
  v.notes.push_back("sum_s V^s against sum_s gamma_s d(theta^s); V^0 = 0 and V^t uses the gradient at theta^t");
  v.evaluate();
  return v;
}

// --- Figure presets --------------------------------------------------------

const std::vector<FigurePreset>& figure_presets() {
  static const std::vector<FigurePreset> presets{
      {1, ArchPreset::B, 128, 1e-2, 50, kCatDog},
      {3, ArchPreset::B, 128, 1e-2, 500, kCatDog},
      {4, ArchPreset::A, 256, 1e-4, 50, kShipTruck},
      {5, ArchPreset::A, 256, 1e-4, 500, kShipTruck},
      {6, ArchPreset::C, 64, 1e-1, 50, kAirplaneAutomobile},
      {7, ArchPreset::C, 64, 1e-1, 500, kAirplaneAutomobile},
  };
  return presets;
}

std::optional<FigurePreset> find_figure(int id) {
  for (const auto& f : figure_presets()) {
    if (f.id == id) return f;
  }
  return std::nullopt;
}

TrainConfig figure_config(const FigurePreset& f, const DataSource& data, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.preset = f.arch;
  cfg.classes = f.classes;
  cfg.data = data;
  cfg.batch = f.batch;
  cfg.learning_rate = f.learning_rate;
  cfg.optimizer = OptimizerKind::Sgd;
  cfg.steps = f.steps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace linlab
