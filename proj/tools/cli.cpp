#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "linlab/errors.hpp"

namespace linlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw OutputError("write failed for " + path.string());
}

json verdict_to_json(const ClaimVerdict& v) {
  json measured = json::object();
  for (const auto& [k, val] : v.measured) measured[k] = val;
  json thresholds = json::array();
  for (const auto& t : v.thresholds) {
    thresholds.push_back({{"metric", t.metric}, {"op", t.bound == Bound::AtMost ? "<=" : ">="}, {"limit", t.limit}});
  }
  return {{"claim_id", v.claim_id}, {"measured", measured}, {"thresholds", thresholds}, {"pass", v.pass},
          {"notes", v.notes}};
}

}  // namespace

void write_metrics_csv(std::span<const StepRecord> records, const fs::path& path) {
  LINLAB_REQUIRE(!records.empty(), "write_metrics_csv: no records");
  auto out = open_for_write(path);
  out << "step,layer,mean_angle_deg,max_angle_deg,skipped_rows,sigma_ratio,oracle_residual,loss,accuracy\n";
  for (const auto& r : records) {
    for (std::size_t l = 0; l < r.layers.size(); ++l) {
      const auto& L = r.layers[l];
      out << r.step << ',' << (l + 1) << ',' << format_double(L.grad_angles.mean_deg) << ','
          << format_double(L.grad_angles.max_deg) << ',' << L.grad_angles.skipped_rows << ','
          << format_double(L.sigma_ratio) << ',' << format_double(L.oracle_residual) << ','
          << format_double(r.loss) << ',' << format_double(r.accuracy) << '\n';
    }
  }
  finish(out, path);
}

void write_velocity_csv(std::span<const StepRecord> records, const fs::path& path) {
  LINLAB_REQUIRE(!records.empty(), "write_velocity_csv: no records");
  auto out = open_for_write(path);
  out << "step,layer,mean_angle_deg,max_angle_deg,skipped_rows,sigma_ratio\n";
  for (const auto& r : records) {
    for (std::size_t l = 0; l < r.layers.size(); ++l) {
      const auto& L = r.layers[l];
      const AngleStats a = L.velocity_angles.value_or(AngleStats{});
      out << r.step << ',' << (l + 1) << ',' << format_double(a.mean_deg) << ',' << format_double(a.max_deg) << ','
          << a.skipped_rows << ',' << format_double(L.velocity_sigma_ratio) << '\n';
    }
  }
  finish(out, path);
}

void write_reduction_csv(const ReductionReport& rep, const fs::path& path) {
  LINLAB_REQUIRE(!rep.deep_accuracy.empty(), "write_reduction_csv: empty curves");
  auto out = open_for_write(path);
  out << "step,deep_accuracy,single_accuracy,deep_max_sigma_ratio,deep_max_oracle_residual\n";
  for (std::size_t i = 0; i < rep.deep_accuracy.size(); ++i) {
    out << (i + 1) << ',' << format_double(rep.deep_accuracy[i]) << ',' << format_double(rep.single_accuracy[i])
        << ',' << format_double(rep.deep_max_sigma_ratio[i]) << ',' << format_double(rep.deep_max_oracle_residual[i])
        << '\n';
  }
  finish(out, path);
}

void write_verdicts_json(std::span<const ClaimVerdict> verdicts, const RunManifest& manifest, const fs::path& path) {
  json m = {{"artifact", "linlab"},
            {"version", LINLAB_VERSION},
            {"command", manifest.command},
            {"config", manifest.config},
            {"seed", manifest.seed},
            {"outputs", manifest.outputs}};
  m["timestamp"] = manifest.timestamp ? json(*manifest.timestamp) : json(nullptr);
  json doc = {{"manifest", m}, {"verdicts", json::array()}};
  bool all_pass = true;
  for (const auto& v : verdicts) {
    doc["verdicts"].push_back(verdict_to_json(v));
    all_pass = all_pass && v.pass;
  }
  doc["all_pass"] = all_pass;
  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

std::map<std::string, std::string> describe(const TrainConfig& cfg) {
  std::map<std::string, std::string> m;
  m["arch"] = cfg.arch_name();
  m["classes"] = std::to_string(cfg.classes.a) + "," + std::to_string(cfg.classes.b);
  if (cfg.data.kind == DataSource::Kind::Synthetic) {
    m["data"] = "synthetic";
    m["dim"] = std::to_string(cfg.data.dim);
    m["n_per_class"] = std::to_string(cfg.data.n_per_class);
    m["separation"] = format_double(cfg.data.separation);
  } else {
    std::string p;
    for (const auto& f : cfg.data.cifar_paths) p += (p.empty() ? "" : ",") + f.string();
    m["data"] = "cifar:" + p;
  }
  m["batch"] = std::to_string(cfg.batch);
  m["lr"] = format_double(cfg.learning_rate);
  m["optimizer"] = to_string(cfg.optimizer);
  m["beta"] = format_double(cfg.beta);
  m["steps"] = std::to_string(cfg.steps);
  m["seed"] = std::to_string(cfg.seed);
  m["shuffle"] = cfg.shuffle ? "seeded permutation per epoch, drop last partial batch" : "off";
  m["accuracy"] = "training set, after each update";
  return m;
}

// --- command line -----------------------------------------------------------

namespace {

struct Flags {
  std::string arch;
  std::string classes;
  std::string data = "synthetic";
  Index dim = 256;
  Index n_per_class = 1024;
  double separation = 1.0;
  Index batch = 0;
  double lr = 0.0;
  std::string optimizer = "sgd";
  double beta = 0.9;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::string out = "out";
  int jobs = 1;
  bool no_timestamp = false;
  std::vector<std::string> figures;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ClassPair parse_classes(const std::string& s) {
  for (const auto& p : {kCatDog, kShipTruck, kAirplaneAutomobile}) {
    if (s == p.name) return p;
  }
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("--classes expects a,b or a preset name: " + s);
  try {
    const int a = std::stoi(s.substr(0, comma));
    const int b = std::stoi(s.substr(comma + 1));
    if (a < 0 || a > 9 || b < 0 || b > 9 || a == b) throw UsageError("--classes: need two distinct ids in 0..9");
    return {a, b, std::to_string(a) + "-" + std::to_string(b)};
  } catch (const std::logic_error&) {
    throw UsageError("--classes: cannot parse " + s);
  }
}

void apply_arch(const std::string& s, TrainConfig& cfg) {
  if (s == "A") cfg.preset = ArchPreset::A;
  else if (s == "B") cfg.preset = ArchPreset::B;
  else if (s == "C") cfg.preset = ArchPreset::C;
  else if (s == "single") cfg.preset = ArchPreset::Single;
  else if (s.starts_with("dims=")) {
    std::vector<Index> widths;
    std::stringstream ss(s.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        widths.push_back(std::stol(tok));
      } catch (const std::logic_error&) {
        throw UsageError("--arch dims: cannot parse width '" + tok + "'");
      }
    }
    if (widths.empty() || widths.back() != 2) throw UsageError("--arch dims must end with 2 outputs");
    for (Index w : widths) {
      if (w < 1) throw UsageError("--arch dims: widths must be positive");
    }
    cfg.custom_widths = widths;
    return;
  } else {
    throw UsageError("--arch expects A, B, C, single or dims=w1,...,2");
  }
  cfg.custom_widths.clear();
}

void apply_data(const std::string& s, TrainConfig& cfg) {
  if (s == "synthetic") {
    cfg.data.kind = DataSource::Kind::Synthetic;
    return;
  }
  if (!s.starts_with("cifar:") || s.size() == 6) throw UsageError("--data expects synthetic or cifar:<dir>");
  cfg.data.kind = DataSource::Kind::Cifar;
  cfg.data.cifar_paths.clear();
  std::stringstream ss(s.substr(6));
  std::string tok;
  while (std::getline(ss, tok, ',')) cfg.data.cifar_paths.emplace_back(tok);
}

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "momentum") return OptimizerKind::Momentum;
  if (s == "gamma") return OptimizerKind::Gamma;
  throw UsageError("--optimizer expects sgd, momentum or gamma");
}

// Explicitly given flags (or config-file keys) override `cfg`.
void overlay(const CLI::App& app, const Flags& f, TrainConfig& cfg) {
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--arch")) apply_arch(f.arch, cfg);
  if (given("--classes")) cfg.classes = parse_classes(f.classes);
  if (given("--data")) apply_data(f.data, cfg);
  if (given("--dim")) cfg.data.dim = f.dim;
  if (given("--n-per-class")) cfg.data.n_per_class = f.n_per_class;
  if (given("--separation")) cfg.data.separation = f.separation;
  if (given("--batch")) cfg.batch = f.batch;
  if (given("--lr")) cfg.learning_rate = f.lr;
  if (given("--optimizer")) cfg.optimizer = parse_optimizer(f.optimizer);
  if (given("--beta")) cfg.beta = f.beta;
  if (given("--steps")) cfg.steps = f.steps;
  if (given("--seed")) cfg.seed = f.seed;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest make_manifest(const std::string& command, const TrainConfig& cfg, const Flags& f) {
  RunManifest m;
  m.command = command;
  m.config = describe(cfg);
  m.seed = cfg.seed;
  if (!f.no_timestamp) m.timestamp = utc_now();
  return m;
}

bool all_pass(const std::vector<ClaimVerdict>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const ClaimVerdict& v) { return v.pass; });
}

void print_verdicts(const std::vector<ClaimVerdict>& vs, std::ostream& out) {
  for (const auto& v : vs) {
    out << v.claim_id << ' ' << (v.pass ? "PASS" : "FAIL");
    for (const auto& t : v.thresholds) {
      const auto m = v.get(t.metric);
      out << ' ' << t.metric << '=' << format_double(m.value_or(std::nan(""))) << (t.bound == Bound::AtMost ? "<=" : ">=")
          << format_double(t.limit);
    }
    out << '\n';
  }
}

int finish_run(const std::vector<ClaimVerdict>& vs, RunManifest manifest, const fs::path& dir,
               std::vector<std::string> data_files, std::ostream& out) {
  manifest.outputs = std::move(data_files);
  manifest.outputs.push_back("verdicts.json");
  write_verdicts_json(vs, manifest, dir / "verdicts.json");
  print_verdicts(vs, out);
  return all_pass(vs) ? kExitPass : kExitVerdictFailed;
}

int cmd_verify_claims(const CLI::App& app, const Flags& f, std::ostream& out) {
  TrainConfig cfg;
  cfg.preset = ArchPreset::B;
  cfg.batch = 30;
  cfg.data.dim = f.dim;
  overlay(app, f, cfg);
  const auto ds = load_dataset(cfg);
  std::vector<ClaimVerdict> vs;
  vs.push_back(verify_claim1(cfg, ds));
  vs.push_back(verify_claim2(cfg, ds));
  for (auto& v : verify_claim3_corollary1(cfg, ds)) vs.push_back(std::move(v));
  return finish_run(vs, make_manifest("verify-claims", cfg, f), f.out, {}, out);
}

int train_and_write(const std::string& command, const TrainConfig& cfg, const Flags& f, const fs::path& dir,
                    std::ostream& out) {
  const auto ds = load_dataset(cfg);
  const auto run = run_training_analysis(cfg, ds);
  std::vector<std::string> files{"metrics.csv"};
  write_metrics_csv(run.records, dir / "metrics.csv");
  if (cfg.optimizer == OptimizerKind::Momentum) {
    write_velocity_csv(run.records, dir / "velocity.csv");
    files.push_back("velocity.csv");
  }
  return finish_run({run.verdict}, make_manifest(command, cfg, f), dir, files, out);
}

int cmd_train_analyze(const CLI::App& app, const Flags& f, std::ostream& out) {
  TrainConfig cfg;
  cfg.preset = ArchPreset::B;
  cfg.batch = 128;
  cfg.learning_rate = 1e-2;
  cfg.steps = 50;
  overlay(app, f, cfg);
  return train_and_write("train-analyze", cfg, f, f.out, out);
}

int cmd_reduce_compare(const CLI::App& app, const Flags& f, std::ostream& out) {
  TrainConfig cfg;
  cfg.preset = ArchPreset::B;
  cfg.data.dim = 64;
  cfg.data.separation = 3.0;
  cfg.data.n_per_class = 256;
  cfg.batch = 32;
  cfg.learning_rate = 0.05;
  cfg.steps = 500;
  overlay(app, f, cfg);
  const auto ds = load_dataset(cfg);
  const auto rep = compare_reduction(cfg, ds);
  write_reduction_csv(rep, fs::path(f.out) / "reduction.csv");
  return finish_run({rep.verdict}, make_manifest("reduce-compare", cfg, f), f.out, {"reduction.csv"}, out);
}

int cmd_momentum_check(const CLI::App& app, const Flags& f, std::ostream& out) {
  TrainConfig cfg;
  cfg.preset = ArchPreset::A;
  cfg.batch = 128;
  cfg.learning_rate = 1e-2;
  cfg.steps = 50;
  cfg.beta = 0.9;
  overlay(app, f, cfg);
  cfg.optimizer = OptimizerKind::Momentum;
  const auto ds = load_dataset(cfg);
  return finish_run({verify_momentum_equivalence(cfg, ds)}, make_manifest("momentum-check", cfg, f), f.out, {}, out);
}

int cmd_figure(const CLI::App& app, const Flags& f, std::ostream& out) {
  std::vector<FigurePreset> todo;
  for (const auto& id : f.figures) {
    if (id == "all") {
      todo = figure_presets();
      break;
    }
    int n = 0;
    const auto res = std::from_chars(id.data(), id.data() + id.size(), n);
    const auto fig = res.ec == std::errc() && res.ptr == id.data() + id.size() ? find_figure(n) : std::nullopt;
    if (!fig) throw UsageError("figure: unknown figure '" + id + "' (expected 1, 3, 4, 5, 6, 7 or all)");
    todo.push_back(*fig);
  }

  auto run_one = [&](const FigurePreset& fig, std::ostream& sink) {
    TrainConfig cfg = figure_config(fig, DataSource{}, 0);
    cfg.data.dim = 256;
    overlay(app, f, cfg);
    const fs::path dir = fs::path(f.out) / ("fig" + std::to_string(fig.id));
    return train_and_write("figure " + std::to_string(fig.id), cfg, f, dir, sink);
  };

  int worst = kExitPass;
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, f.jobs));
  for (std::size_t start = 0; start < todo.size(); start += jobs) {
    std::vector<std::future<std::pair<int, std::string>>> futs;
    for (std::size_t i = start; i < std::min(todo.size(), start + jobs); ++i) {
      futs.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, [&, i] {
        std::ostringstream sink;
        sink << "figure " << todo[i].id << ": ";
        const int code = run_one(todo[i], sink);
        return std::make_pair(code, sink.str());
      }));
    }
    for (auto& fu : futs) {
      auto [code, text] = fu.get();
      out << text;
      worst = std::max(worst, code);
    }
  }
  return worst;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deep linear network gradient-structure laboratory", "linlab"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mirroring the long flags; flags on the command line win");
  Flags f;
  app.add_option("--arch", f.arch, "A | B | C | single | dims=w1,...,2")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--classes", f.classes, "a,b class ids or cat-dog | ship-truck | airplane-automobile")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--data", f.data, "synthetic | cifar:<dir or file list>")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--dim", f.dim, "synthetic input dimension")->check(CLI::Range(Index{2}, Index{1} << 20));
  app.add_option("--n-per-class", f.n_per_class, "synthetic samples per class")->check(CLI::Range(Index{1}, Index{1} << 24));
  app.add_option("--separation", f.separation, "synthetic class separation")->check(CLI::Range(0.0, 1e6));
  app.add_option("--batch", f.batch, "batch size")->check(CLI::Range(Index{1}, Index{1} << 24));
  app.add_option("--lr", f.lr, "learning rate")->check(CLI::PositiveNumber);
  app.add_option("--optimizer", f.optimizer, "sgd | momentum | gamma")->check(CLI::IsMember({"sgd", "momentum", "gamma"}));
  app.add_option("--beta", f.beta, "momentum factor in [0,1)")->check(CLI::Range(0.0, 0.999999999));
  app.add_option("--steps", f.steps, "training steps")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--jobs", f.jobs, "figures to run in parallel")->check(CLI::Range(1, 256));
  app.add_flag("--no-timestamp", f.no_timestamp, "omit the manifest timestamp");

  auto* verify = app.add_subcommand("verify-claims", "one-step checks of claims 1-3 and corollary 1");
  auto* train = app.add_subcommand("train-analyze", "per-step gradient structure over a training run");
  auto* reduce = app.add_subcommand("reduce-compare", "deep network vs single layer on one batch stream");
  auto* momentum = app.add_subcommand("momentum-check", "momentum vs gamma-schedule summation identity");
  auto* figure = app.add_subcommand("figure", "run the settings behind a figure (1, 3-7 or all)");
  figure->add_option("ids", f.figures, "figure numbers")->required();
  for (auto* sub : {verify, train, reduce, momentum, figure}) sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("linlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    fs::create_directories(f.out);
    if (verify->parsed()) return cmd_verify_claims(app, f, out);
    if (train->parsed()) return cmd_train_analyze(app, f, out);
    if (reduce->parsed()) return cmd_reduce_compare(app, f, out);
    if (momentum->parsed()) return cmd_momentum_check(app, f, out);
    if (figure->parsed()) return cmd_figure(app, f, out);
    err << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerdictFailed;
  }
}

}  // namespace linlab::cli
