#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/brute_oracle.hpp"
#include "qwalk/error.hpp"
#include "qwalk/limit_laws.hpp"
#include "qwalk/mc_sampler.hpp"
#include "qwalk/reproduce.hpp"
#include "qwalk/shuffle_engine.hpp"
#include "qwalk/stats_compare.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qwalk;

constexpr const char* kVersion = "qwalk 0.1.0";

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;

struct RunConfig {
  std::string walk;
  int n = -1;
  std::string ns;
  std::string cond = "none";
  std::string parity;
  std::string mode = "exact";
  std::string backend = "auto";
  int rational_bound = EngineConfig{}.rational_bound;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  std::string method = "rejection";
  bool force = false;
  double tail = 1e-12;
  std::string scale = "default";
  std::string theorem;
  std::string out;
  std::string format = "csv";
};

// Output goes to --out (with a .json sidecar for CSV) or to stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    }
  }

  std::ostream& stream() { return path_.empty() ? std::cout : file_; }

  void sidecar(const json& meta) {
    if (path_.empty()) return;
    std::ofstream side(path_ + ".json");
    side << meta.dump(2) << "\n";
  }

 private:
  std::string path_;
  std::ofstream file_;
};

json provenance(const std::string& command, const RunConfig& c) {
  json config;
  config["walk"] = c.walk;
  if (c.n >= 0) config["n"] = c.n;
  if (!c.ns.empty()) config["ns"] = c.ns;
  config["cond"] = c.cond;
  if (!c.parity.empty()) config["parity"] = c.parity;
  config["mode"] = c.mode;
  config["backend"] = c.backend;
  config["rational_bound"] = c.rational_bound;
  json out{{"command", command}, {"engine", kVersion}, {"config", config}};
  if (!c.walk.empty()) {
    const auto walk = StepDistribution::parse(c.walk);
    out["drift"] = {to_string(walk.drift(1)), to_string(walk.drift(2))};
  }
  return out;
}

EngineConfig engine_config(const RunConfig& c) {
  EngineConfig config;
  config.rational_bound = c.rational_bound;
  config.threads = c.threads;
  return config;
}

JointLawOptions engine_options(const RunConfig& c) {
  JointLawOptions options;
  options.config = engine_config(c);
  if (c.mode == "windowed") {
    options.mode = ConvolutionMode::Windowed;
  } else if (c.mode != "exact") {
    fail(ErrorCode::ParseError, "mode must be exact or windowed");
  }
  if (c.backend == "exact") {
    options.backend = Backend::Exact;
  } else if (c.backend == "float") {
    options.backend = Backend::Float;
  } else if (c.backend != "auto") {
    fail(ErrorCode::ParseError, "backend must be auto, exact or float");
  }
  return options;
}

StepDistribution require_walk(const RunConfig& c) {
  if (c.walk.empty()) fail(ErrorCode::InvalidArgument, "--walk is required");
  return StepDistribution::parse(c.walk);
}

int require_n(const RunConfig& c) {
  if (c.n < 0) fail(ErrorCode::InvalidArgument, "--n is required");
  return c.n;
}

std::vector<int> parse_lengths(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad length '" + item + "'");
    }
  }
  return out;
}

void write_law_csv(std::ostream& out, const JointReturnLaw& law) {
  out << "r1,r2,mass\n";
  for (int i = 0; i < law.rows(); ++i) {
    for (int j = 0; j < law.cols(); ++j) {
      if (law.is_exact()) {
        const Rational m = law.exact_conditional(i, j);
        if (sgn(m) != 0) out << i << ',' << j << ',' << format_rational(m) << '\n';
      } else {
        const double m = law.conditional(i, j);
        if (m != 0.0) out << i << ',' << j << ',' << format_double(m) << '\n';
      }
    }
  }
}

json law_meta(const JointReturnLaw& law) {
  json meta;
  meta["backend"] = to_string(law.backend());
  if (law.is_exact()) {
    meta["event_probability"] = format_rational(law.exact_event_probability());
  } else {
    meta["event_probability"] = format_double(law.event_probability());
    meta["log_event_probability"] = format_double(law.log_event_probability());
  }
  meta["remainder_bound"] = format_double(law.truncation_remainder());
  meta["conditional_remainder_bound"] = format_double(law.conditional_remainder());
  return meta;
}

json law_cells(const JointReturnLaw& law) {
  json cells = json::array();
  for (int i = 0; i < law.rows(); ++i) {
    for (int j = 0; j < law.cols(); ++j) {
      const std::string m = law.is_exact() ? format_rational(law.exact_conditional(i, j))
                                           : format_double(law.conditional(i, j));
      if (m != "0") cells.push_back({i, j, m});
    }
  }
  return cells;
}

void emit_law(const std::string& command, const RunConfig& c, const JointReturnLaw& law) {
  json meta = provenance(command, c);
  meta["result"] = law_meta(law);
  Sink sink(c.out);
  if (c.format == "json") {
    meta["cells"] = law_cells(law);
    sink.stream() << meta.dump(2) << "\n";
  } else {
    write_law_csv(sink.stream(), law);
    sink.sidecar(meta);
  }
}

int cmd_exact(const RunConfig& c) {
  const auto walk = require_walk(c);
  const int n = require_n(c);
  emit_law("exact", c, joint_law(n, walk, parse_conditioning(c.cond), engine_options(c)));
  return 0;
}

int cmd_oracle(const RunConfig& c, bool check) {
  const auto walk = require_walk(c);
  const int n = require_n(c);
  const Conditioning cond = parse_conditioning(c.cond);
  const JointReturnLaw law = enumerate_joint(n, walk, cond);
  emit_law("oracle", c, law);
  if (!check) return 0;
  JointLawOptions options = engine_options(c);
  options.backend = Backend::Exact;
  const JointReturnLaw engine = joint_law(n, walk, cond, options);
  long mismatches = 0;
  const int rows = std::max(law.rows(), engine.rows());
  const int cols = std::max(law.cols(), engine.cols());
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const Rational a = i < law.rows() && j < law.cols() ? law.exact_joint(i, j) : Rational(0);
      const Rational b = i < engine.rows() && j < engine.cols() ? engine.exact_joint(i, j) : Rational(0);
      if (a != b) ++mismatches;
    }
  }
  std::cerr << "oracle check: " << mismatches << " mismatching cells\n";
  return mismatches == 0 ? 0 : 1;
}

int cmd_limit(const RunConfig& c) {
  const auto walk = require_walk(c);
  const Conditioning cond = parse_conditioning(c.cond);
  const Parity parity = c.parity.empty() ? (c.n >= 0 ? parity_of(c.n) : Parity::Even) : parse_parity(c.parity);
  const LimitLaw law = limit_joint(walk, cond, parity);
  json meta = provenance("limit", c);
  meta["law"] = law.describe();
  Sink sink(c.out);
  std::ostream& out = sink.stream();
  if (law.discrete()) {
    const auto table = law.tabulate(c.tail);
    meta["tail_bound"] = format_double(table.tail_bound);
    out << "r1,r2,mass\n";
    for (int i = 0; i < table.mass.rows(); ++i)
      for (int j = 0; j < table.mass.cols(); ++j)
        out << i << ',' << j << ',' << format_double(table.mass(i, j)) << '\n';
  } else {
    // Continuous marginals: cdf on a fixed grid of the rescaled count.
    out << "axis,x,cdf\n";
    for (int axis : {1, 2}) {
      const Marginal& m = law.marginal(axis);
      for (int step = 0; step <= 120; ++step) {
        const double x = 0.05 * step;
        out << axis << ',' << format_double(x) << ',' << format_double(marginal_cdf(m, x)) << '\n';
      }
    }
  }
  sink.sidecar(meta);
  return 0;
}

int cmd_sample(const RunConfig& c, bool seed_given) {
  if (!seed_given) fail(ErrorCode::InvalidArgument, "--seed is required for sample");
  const auto walk = require_walk(c);
  const int n = require_n(c);
  const Conditioning cond = parse_conditioning(c.cond);
  check_length(cond, n);
  const SampleMethod method = parse_sample_method(c.method);
  const double forecast = acceptance_forecast(n, walk, cond);
  if (method == SampleMethod::Rejection && forecast < kRefusalThreshold && !c.force) {
    fail(ErrorCode::CapacityExceeded, "forecast acceptance " + format_double(forecast) +
                                          " is below " + format_double(kRefusalThreshold) +
                                          "; use the exact engine or pass --force");
  }
  SampleOptions options;
  options.method = method;
  options.lanes = c.threads;
  const EmpiricalLaw law = sample(n, walk, cond, c.seed, c.trials, options);

  json meta = provenance("sample", c);
  meta["seed"] = c.seed;
  meta["trials"] = law.attempted;
  meta["accepted"] = law.accepted;
  meta["acceptance_rate"] = format_double(law.acceptance_rate());
  meta["forecast"] = format_double(forecast);
  meta["method"] = to_string(method);
  meta["budget_exhausted"] = law.budget_exhausted;
  if (law.budget_exhausted) std::cerr << "warning: no trial satisfied the conditioning\n";

  Sink sink(c.out);
  std::ostream& out = sink.stream();
  out << "r1,r2,count,mass\n";
  for (int i = 0; i < law.counts.rows(); ++i)
    for (int j = 0; j < law.counts.cols(); ++j)
      if (law.counts(i, j) > 0)
        out << i << ',' << j << ',' << law.counts(i, j) << ',' << format_double(law.normalized(i, j)) << '\n';
  sink.sidecar(meta);
  return 0;
}

void write_rows(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "n,parity,metric,value,slack,a1,a2\n";
  for (const auto& row : rows) {
    out << row.n << ',' << to_string(row.parity) << ',' << to_string(row.kind) << ','
        << format_double(row.distance.value) << ',' << format_double(row.distance.slack) << ','
        << format_double(row.rescale[0]) << ',' << format_double(row.rescale[1]) << '\n';
  }
}

int cmd_sweep(const std::string& command, const RunConfig& c, std::vector<int> ns) {
  const auto walk = require_walk(c);
  SweepOptions options;
  options.engine = engine_options(c);
  if (!c.parity.empty()) options.parity = parse_parity(c.parity);
  const auto rows = sweep(ns, walk, parse_conditioning(c.cond), options);
  Sink sink(c.out);
  write_rows(sink.stream(), rows);
  sink.sidecar(provenance(command, c));
  return 0;
}

int cmd_reproduce(const RunConfig& c) {
  std::optional<StepDistribution> walk;
  if (!c.walk.empty()) walk = StepDistribution::parse(c.walk);
  const Report report = reproduce(c.theorem, parse_scale(c.scale), walk);
  Sink sink(c.out);
  sink.stream() << format_report(report);
  return report.passed() ? 0 : 1;
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read config " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "config line without '=': " + line);
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

// Config entries become "--key value" arguments placed after the subcommand,
// unless the key is already given on the command line. Keys the subcommand
// does not take are skipped; keys no subcommand takes are an error.
std::vector<std::string> expand_config(const CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
  }
  if (path.empty() || args.empty()) return args;
  const CLI::App* sub = nullptr;
  for (const CLI::App* candidate : app.get_subcommands({}))
    if (candidate->get_name() == args.front()) sub = candidate;
  if (sub == nullptr) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config(path)) {
    const std::string flag = "--" + key;
    bool known = false;
    for (const CLI::App* candidate : app.get_subcommands({}))
      known = known || candidate->get_option_no_throw(flag) != nullptr;
    if (!known) fail(ErrorCode::ParseError, "unknown config key '" + key + "'");
    if (sub->get_option_no_throw(flag) == nullptr) continue;
    bool present = false;
    for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (present || value == "false") continue;
    injected.push_back(flag);
    if (value != "true") injected.push_back(value);
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapacityExceeded:
    case ErrorCode::CapTooLarge:
      return kExitCapacity;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Return counts of conditioned quarter-plane walks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  RunConfig c;

  auto add_walk = [&](CLI::App* sub) {
    sub->add_option("--walk", c.walk, "p1,q1,p2,q2 as decimals or fractions");
    sub->add_option("--cond", c.cond, "none | bridge | meander | excursion");
    sub->add_option("--out", c.out, "output path; CSV output also writes <out>.json");
    sub->add_option("--threads", c.threads, "worker threads (default QWALK_THREADS or 1)");
  };
  auto add_engine = [&](CLI::App* sub) {
    sub->add_option("--mode", c.mode, "exact | windowed");
    sub->add_option("--backend", c.backend, "auto | exact | float");
    sub->add_option("--rational-bound", c.rational_bound, "largest n for the rational backend");
  };

  auto* exact = app.add_subcommand("exact", "exact joint law of the return counts");
  add_walk(exact);
  add_engine(exact);
  exact->add_option("--n", c.n, "walk length");
  exact->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* oracle = app.add_subcommand("oracle", "brute-force law by full lattice enumeration");
  add_walk(oracle);
  oracle->add_option("--n", c.n, "walk length");
  oracle->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  bool oracle_check = false;
  oracle->add_flag("--check", oracle_check, "also compare cell by cell with the exact engine");

  auto* limit = app.add_subcommand("limit", "limit law of the return counts");
  add_walk(limit);
  limit->add_option("--n", c.n, "length whose parity selects the meander branch");
  limit->add_option("--parity", c.parity, "even | odd");
  limit->add_option("--tail", c.tail, "truncation mass for discrete laws");

  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo estimate of the conditioned law");
  add_walk(sample_cmd);
  sample_cmd->add_option("--n", c.n, "walk length");
  auto* seed_opt = sample_cmd->add_option("--seed", c.seed, "RNG seed");
  sample_cmd->add_option("--trials", c.trials, "attempted walks");
  sample_cmd->add_option("--method", c.method, "rejection | tilted");
  sample_cmd->add_flag("--force", c.force, "run even when the forecast acceptance is tiny");

  auto* compare = app.add_subcommand("compare", "distance between the exact law and its limit");
  add_walk(compare);
  add_engine(compare);
  compare->add_option("--n", c.n, "walk length");
  compare->add_option("--parity", c.parity, "meander branch override");

  auto* sweep_cmd = app.add_subcommand("sweep", "distance to the limit over several lengths");
  add_walk(sweep_cmd);
  add_engine(sweep_cmd);
  sweep_cmd->add_option("--ns", c.ns, "comma-separated ascending lengths");
  sweep_cmd->add_option("--parity", c.parity, "meander branch override");

  auto* repro = app.add_subcommand("reproduce", "run the acceptance sweep for one theorem");
  repro->add_option("theorem", c.theorem, "1.1 | 1.2 | 1.3 | 1.4")->required();
  repro->add_option("--scale", c.scale, "small | default");
  repro->add_option("--walk", c.walk, "restrict to one walk");
  repro->add_option("--out", c.out, "report path");

  try {
    std::vector<std::string> args = expand_config(app, argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  try {
    if (*exact) return cmd_exact(c);
    if (*oracle) return cmd_oracle(c, oracle_check);
    if (*limit) return cmd_limit(c);
    if (*sample_cmd) return cmd_sample(c, seed_opt->count() > 0);
    if (*compare) return cmd_sweep("compare", c, {require_n(c)});
    if (*sweep_cmd) return cmd_sweep("sweep", c, parse_lengths(c.ns));
    if (*repro) return cmd_reproduce(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
