// selflearn: command-line frontend for the self-learning library.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
// error, 1 anything unexpected.

#include "selflearn/classifiers.hpp"
#include "selflearn/config.hpp"
#include "selflearn/dataset.hpp"
#include "selflearn/errors.hpp"
#include "selflearn/protocols.hpp"
#include "selflearn/results.hpp"
#include "selflearn/self_learning.hpp"
#include "selflearn/split.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace selflearn;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kOutputDirEnv = "SELFLEARN_OUTPUT_DIR";

std::string default_out_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? env : ".";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
  std::vector<double> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    if (!item.empty() && item.front() == '+') item.erase(0, 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v))
      throw ConfigError(std::string(flag) + ": '" + item + "' is not a finite number");
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

LabelEncoding parse_encoding(const std::string& text) {
  const auto v = parse_numbers(text, "--encoding");
  if (v.size() != 2) throw ConfigError("--encoding: expected two codes 'm,n'");
  return LabelEncoding(v[0], v[1]);
}

std::optional<ClassMap> parse_classes(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw ConfigError("--classes: expected two symbols 'first,second'");
  return ClassMap{text.substr(0, comma), text.substr(comma + 1)};
}

void write_text(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(DataError::Kind::missing_file, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw DataError(DataError::Kind::malformed, "write failed for '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw DataError(DataError::Kind::missing_file, "cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

// Config-driven subcommands collect flag values under their config key and
// apply them on top of the file, so the effective config has one source.
struct Overrides {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::string> assignments;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    options.emplace_back(key, app->add_option(flag, values[key], help));
  }

  void add_flag(CLI::App* app, const std::string& flag, const std::string& key,
                const std::string& help) {
    options.emplace_back(key, app->add_flag(flag, help));
  }

  KeyValues resolve(const std::string& config_path) const {
    KeyValues kv = config_path.empty() ? KeyValues{} : KeyValues::load(config_path);
    for (const auto& a : assignments) {
      const auto eq = a.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set: expected key=value, got '" + a + "'");
      kv.set(a.substr(0, eq), a.substr(eq + 1));
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() == 0) continue;
      kv.set(key, opt->get_expected_min() == 0 ? "true" : values.at(key));
    }
    return kv;
  }
};

struct Common {
  std::string config;
  std::string out_dir = default_out_dir();
  std::size_t jobs = 1;
};

void add_common(CLI::App* app, Common& c, Overrides& o) {
  app->add_option("config,--config", c.config,
                  "Configuration file of key = value lines (positional or --config)")
      ->check(CLI::ExistingFile);
  app->add_option("--out-dir", c.out_dir,
                  std::string("Directory for all output files (default: $") + kOutputDirEnv +
                      " or the working directory)");
  app->add_option("--jobs", c.jobs, "Worker threads; outputs do not depend on it")
      ->check(CLI::PositiveNumber);
  app->add_option("--set", o.assignments, "Override any config key: --set key=value (repeatable)")
      ->allow_extra_args(false);
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string data = "builtin:gaussians";
  std::string label_column = "class";
  std::string classes;
  std::string classifier = "soft";
  std::size_t n_labeled = 10;
  std::size_t n_unlabeled = 200;
  std::size_t n_test = 1000;
  std::uint64_t seed = 1;
  double lambda = 0.0;
  bool penalize_intercept = false;
  int max_iterations = 500;
  double tolerance = 1e-8;
  std::string encoding = "-1,1";
  bool standardize = false;
};

int run_fit(const FitArgs& a) {
  const auto classes = parse_classes(a.classes);
  const auto encoding = parse_encoding(a.encoding);
  ClassifierSpec spec;
  spec.kind = parse_classifier(a.classifier);
  spec.ridge = {a.lambda, a.penalize_intercept};
  spec.ridge.validate();
  spec.bcd.max_iterations = a.max_iterations;
  spec.bcd.objective_tolerance = a.tolerance;
  spec.bcd.validate();

  const Dataset ds = load_dataset_ref(a.data, a.label_column, classes);
  const ExperimentSplit split =
      make_split(ds, a.n_labeled, a.n_unlabeled, a.n_test, encoding, a.standardize, a.seed);
  const ClassifierFit fit = fit_classifier(spec, split);

  json out;
  out["dataset"] = ds.name;
  out["classifier"] = std::string(to_string(spec.kind));
  out["seed"] = a.seed;
  out["n_labeled"] = a.n_labeled;
  out["n_unlabeled"] = a.n_unlabeled;
  out["n_test"] = a.n_test;
  out["weights"] = std::vector<double>(fit.weights.values().begin(), fit.weights.values().end());
  out["iterations"] = fit.iterations;
  out["objective"] = fit.objective;
  out["converged"] = fit.converged;
  if (a.n_test > 0) {
    out["metrics"] = {
        {"Error", error_rate(predict(fit.weights, split.X_test, encoding), split.y_test)},
        {"AverageLossTest", average_quadratic_loss(fit.weights, split.X_test, split.y_test)}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct Example1dArgs {
  std::string unlabeled = "-1,4";
  std::string labeled = "-1,1";
  std::string labeled_classes = "neg,pos";
  double lambda = 0.0;
  std::string out_dir = default_out_dir();
};

int run_example_1d(const Example1dArgs& a) {
  const auto unl = parse_numbers(a.unlabeled, "--unlabeled");
  const auto lab = parse_numbers(a.labeled, "--labeled");
  if (lab.size() != 2) throw ConfigError("--labeled: expected two positions");
  const auto classes = parse_classes(a.labeled_classes);
  if (!classes) throw ConfigError("--labeled-classes: expected two symbols");

  const Fig1Example ex =
      generate_fig1_example({lab[0], lab[1]}, {classes->first, classes->second}, unl);
  const LabelEncoding enc{};
  const FeatureMatrix X_lab = FeatureMatrix::with_intercept(ex.labeled.features.values());
  const FeatureMatrix X_unl = FeatureMatrix::with_intercept(ex.unlabeled.values());
  const EncodedTargets y = ex.labeled.encoded(enc);

  RidgeConfig ridge{a.lambda, false};
  ridge.validate();
  const WeightVector w_sup = fit_ridge(X_lab, y, ridge);

  BcdConfig one_step;
  one_step.max_iterations = 1;
  one_step.ridge = ridge;

  WeightVector w_soft = w_sup;
  WeightVector w_hard = w_sup;
  EncodedTargets u_soft;
  EncodedTargets t_hard;
  if (!unl.empty()) {
    const FitResult soft = run_bcd(Variant::soft_label, X_lab, y, X_unl, enc, one_step);
    const FitResult hard = run_bcd(Variant::hard_label, X_lab, y, X_unl, enc, one_step);
    w_soft = soft.weights;
    w_hard = hard.weights;
    u_soft = soft_label_update(w_sup, X_unl, enc);
    t_hard = responsibilities_to_targets(hard_responsibility_update(w_sup, X_unl, enc), enc);
  }

  // The boundary of w = (slope, intercept) is where the decision value
  // crosses the midpoint of the two codes.
  const auto boundary = [&](const WeightVector& w) -> json {
    if (w[0] == 0.0) return nullptr;
    return (enc.midpoint() - w[1]) / w[0];
  };
  const auto shift = [&](const WeightVector& w) -> json {
    const json b0 = boundary(w_sup);
    const json b1 = boundary(w);
    if (b0.is_null() || b1.is_null()) return nullptr;
    return b1.get<double>() - b0.get<double>();
  };
  const auto weights_json = [](const WeightVector& w) {
    return std::vector<double>(w.values().begin(), w.values().end());
  };

  json report;
  report["labeled"] = json::array();
  for (std::size_t i = 0; i < 2; ++i)
    report["labeled"].push_back(
        {{"position", lab[i]}, {"class", i == 0 ? classes->first : classes->second}});
  report["unlabeled"] = unl;
  report["lambda"] = a.lambda;
  report["supervised"] = {{"weights", weights_json(w_sup)}, {"boundary", boundary(w_sup)}};
  report["soft"] = {{"weights", weights_json(w_soft)},
                    {"boundary", boundary(w_soft)},
                    {"shift", shift(w_soft)}};
  report["hard"] = {{"weights", weights_json(w_hard)},
                    {"boundary", boundary(w_hard)},
                    {"shift", shift(w_hard)}};
  json objects = json::array();
  const Eigen::VectorXd d_unl =
      unl.empty() ? Eigen::VectorXd() : decision_values(w_sup, X_unl);
  for (std::size_t j = 0; j < unl.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    objects.push_back({{"position", unl[j]},
                       {"supervised_decision", d_unl[jj]},
                       {"soft_target", u_soft[jj]},
                       {"hard_target", t_hard[jj]}});
  }
  report["pseudo_targets"] = objects;

  const fs::path dir = prepare_out_dir(a.out_dir);
  std::string csv = "position,role,classifier,decision_value\n";
  const auto emit = [&](double x, const char* role) {
    const std::pair<const char*, const WeightVector*> fits[] = {
        {"supervised", &w_sup}, {"soft", &w_soft}, {"hard", &w_hard}};
    for (const auto& [name, w] : fits)
      csv += fmt(x) + ',' + role + ',' + name + ',' + fmt((*w)[0] * x + (*w)[1]) + '\n';
  };
  for (double x : lab) emit(x, "labeled");
  for (double x : unl) emit(x, "unlabeled");
  double lo = std::min(lab[0], lab[1]);
  double hi = std::max(lab[0], lab[1]);
  for (double x : unl) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  lo -= 1.0;
  hi += 1.0;
  constexpr int kGrid = 50;
  for (int i = 0; i <= kGrid; ++i) emit(lo + (hi - lo) * i / kGrid, "grid");
  write_text(dir / "example_1d.csv", csv);

  std::cout << report.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

void write_outputs(const fs::path& dir, const std::string& subcommand, const std::string& data_file,
                   const std::string& data, const KeyValues& effective, std::uint64_t seed,
                   const std::map<std::string, std::string>& extra = {}) {
  write_text(dir / data_file, data);
  const std::string sidecar = fs::path(data_file).stem().string() + ".provenance.json";
  write_text(dir / sidecar, provenance_json(subcommand, effective, seed, {data_file}, extra));
  std::cout << "wrote " << (dir / data_file).string() << '\n';
}

void add_curve_overrides(CLI::App* app, Overrides& o, bool fraction) {
  o.add(app, "--dataset", "dataset", "Dataset file or builtin:gaussians?n=..&d=..&separation=..&prior=..&seed=..");
  o.add(app, "--label-column", "label_column", "Name of the class column in a dataset file");
  o.add(app, "--classes", "classes", "Class symbols 'first,second'; first is encoded m");
  o.add(app, "--encoding", "encoding", "Class codes 'm,n' (default -1,1)");
  if (fraction) {
    o.add(app, "--fraction-grid", "fraction_grid", "Labeled fractions, comma separated");
    o.add(app, "--test-fraction", "test_fraction", "Fraction of rows held out for testing");
  } else {
    o.add(app, "--l-fixed", "l_fixed", "Number of labeled objects");
    o.add(app, "--u-grid", "u_grid", "Unlabeled counts, comma separated, increasing");
    o.add(app, "--test-size", "test_size", "Number of test objects");
  }
  o.add(app, "--repeats", "repeats", "Number of repeats");
  o.add(app, "--seed", "master_seed", "Master seed; repeat r uses a stream derived from (seed, r)");
  o.add(app, "--measures", "measures", "Measures to write: Error, AverageLossTest (both are computed)");
  o.add(app, "--classifiers", "classifiers", "Classifiers: supervised, soft, hard, oracle");
  o.add(app, "--lambda", "lambda", "Ridge penalty (>= 0)");
  o.add_flag(app, "--penalize-intercept", "penalize_intercept", "Also penalize the intercept");
  o.add_flag(app, "--standardize", "standardize", "Standardize features on labeled + unlabeled rows");
  o.add(app, "--max-iterations", "max_iterations", "BCD iteration cap");
  o.add(app, "--tol", "objective_tolerance", "BCD relative objective tolerance");
}

int run_curve(const Common& c, const Overrides& o, bool fraction) {
  const KeyValues kv = o.resolve(c.config);
  CurveConfig cfg = curve_config_from(kv);
  cfg.jobs = c.jobs;
  const fs::path dir = prepare_out_dir(c.out_dir);
  const ResultsTable table = fraction ? run_fraction_curve(cfg) : run_unlabeled_curve(cfg);
  std::vector<std::string> measures;
  for (Measure m : cfg.measures) measures.emplace_back(to_string(m));
  const ResultsTable out = table.filtered(measures);
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(table.fingerprint_digest()));
  const std::string name = fraction ? "curve-fraction" : "curve-unlabeled";
  write_outputs(dir, name, fraction ? "curve_fraction.csv" : "curve_unlabeled.csv",
                results_csv_string(out), to_key_values(cfg), cfg.master_seed,
                {{"split_fingerprint_digest", digest}});
  return 0;
}

int run_minima(const Common& c, const Overrides& o) {
  const KeyValues kv = o.resolve(c.config);
  MinimaExperimentConfig cfg = minima_config_from(kv);
  cfg.minima.jobs = c.jobs;
  const fs::path dir = prepare_out_dir(c.out_dir);
  const auto reports = run_minima_experiment(cfg);
  for (const auto& r : reports) {
    std::size_t verified = 0;
    for (const auto& m : r.distinct_minima) verified += m.verified_fixed_point ? 1 : 0;
    std::cout << to_string(r.variant) << ": " << r.distinct_minima.size() << " distinct minima ("
              << verified << " verified) from " << r.n_runs << " runs\n";
  }
  write_outputs(dir, "minima", "minima.json", minima_reports_json(reports),
                to_key_values(cfg), cfg.minima.seed);
  return 0;
}

int run_sweep(const Common& c, const Overrides& o) {
  const KeyValues kv = o.resolve(c.config);
  SeedSweepConfig cfg = seed_sweep_config_from(kv);
  cfg.jobs = c.jobs;
  const fs::path dir = prepare_out_dir(c.out_dir);
  const auto rows = run_seed_sweep(cfg);
  std::map<std::string, std::size_t> single;
  for (const auto& r : rows)
    if (r.single_class) ++single[r.classifier];
  for (const auto& [name, count] : single)
    std::cout << name << ": single class on " << count << " of " << cfg.seeds.size() << " seeds\n";
  write_outputs(dir, "seed-sweep", "seed_sweep.csv", seed_sweep_csv_string(rows),
                to_key_values(cfg), cfg.seeds.empty() ? 0 : cfg.seeds.front());
  return 0;
}

struct SummarizeArgs {
  std::string input;
  std::string by = "dataset,classifier,size_role,size,measure";
  std::string measures;
  std::string output = "summary.csv";
  std::string out_dir = default_out_dir();
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

int run_summarize(const SummarizeArgs& a) {
  const fs::path name(a.output);
  if (name.empty() || name.has_parent_path() || name.filename() != name || name == "." ||
      name == "..")
    throw ConfigError("--output must be a plain file name inside --out-dir");
  ResultsTable table = read_results_csv(a.input);
  if (!a.measures.empty()) {
    const auto measures = split_list(a.measures);
    for (const auto& m : measures) (void)parse_measure(m);
    table = table.filtered(measures);
  }
  const SummaryTable summary = summarize(table, split_list(a.by));
  const fs::path dir = prepare_out_dir(a.out_dir);
  const std::string csv = summary_csv_string(summary);
  write_text(dir / name, csv);
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares self-learning: fits, learning curves, local minima, seed sweeps"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit one classifier on a seeded split; prints JSON");
  fit->add_option("--data", fit_args.data, "Dataset file or builtin:gaussians?...")
      ->capture_default_str();
  fit->add_option("--label-column", fit_args.label_column, "Class column in a dataset file")
      ->capture_default_str();
  fit->add_option("--classes", fit_args.classes, "Class symbols 'first,second'; first is encoded m");
  fit->add_option("--classifier", fit_args.classifier, "supervised, soft, hard, or oracle")
      ->capture_default_str();
  fit->add_option("--n-labeled", fit_args.n_labeled, "Labeled objects")->capture_default_str();
  fit->add_option("--n-unlabeled", fit_args.n_unlabeled, "Unlabeled objects")->capture_default_str();
  fit->add_option("--n-test", fit_args.n_test, "Test objects (0 skips the metrics)")
      ->capture_default_str();
  fit->add_option("--seed", fit_args.seed, "Split seed")->capture_default_str();
  fit->add_option("--lambda", fit_args.lambda, "Ridge penalty (>= 0)")->capture_default_str();
  fit->add_flag("--penalize-intercept", fit_args.penalize_intercept, "Also penalize the intercept");
  fit->add_option("--max-iterations", fit_args.max_iterations, "BCD iteration cap")
      ->capture_default_str();
  fit->add_option("--tol", fit_args.tolerance, "BCD relative objective tolerance")
      ->capture_default_str();
  fit->add_option("--encoding", fit_args.encoding, "Class codes 'm,n'")->capture_default_str();
  fit->add_flag("--standardize", fit_args.standardize, "Standardize features on labeled + unlabeled rows");

  Example1dArgs ex_args;
  auto* ex = app.add_subcommand("example-1d", "First step of self-learning on a 1-D toy problem");
  ex->add_option("--unlabeled", ex_args.unlabeled, "Unlabeled positions, comma separated (may be empty)")
      ->capture_default_str();
  ex->add_option("--labeled", ex_args.labeled, "The two labeled positions")->capture_default_str();
  ex->add_option("--labeled-classes", ex_args.labeled_classes,
                 "Classes of the two labeled objects; the first is encoded m")
      ->capture_default_str();
  ex->add_option("--lambda", ex_args.lambda, "Ridge penalty (>= 0)")->capture_default_str();
  ex->add_option("--out-dir", ex_args.out_dir,
                 std::string("Directory for example_1d.csv (default: $") + kOutputDirEnv +
                     " or the working directory)");

  Common cu_common, cf_common, mn_common, sw_common;
  Overrides cu_over, cf_over, mn_over, sw_over;

  auto* cu = app.add_subcommand("curve-unlabeled", "Learning curve over the number of unlabeled objects");
  add_common(cu, cu_common, cu_over);
  add_curve_overrides(cu, cu_over, false);

  auto* cf = app.add_subcommand("curve-fraction", "Learning curve over the labeled fraction");
  add_common(cf, cf_common, cf_over);
  add_curve_overrides(cf, cf_over, true);

  auto* mn = app.add_subcommand("minima", "Enumerate distinct local minima by random restarts");
  add_common(mn, mn_common, mn_over);
  mn_over.add(mn, "--dataset", "dataset", "Dataset file or builtin:gaussians?...");
  mn_over.add(mn, "--label-column", "label_column", "Class column in a dataset file");
  mn_over.add(mn, "--classes", "classes", "Class symbols 'first,second'");
  mn_over.add(mn, "--n-labeled", "n_labeled", "Labeled objects");
  mn_over.add(mn, "--n-unlabeled", "n_unlabeled", "Unlabeled objects");
  mn_over.add(mn, "--split-seed", "split_seed", "Seed of the labeled/unlabeled split");
  mn_over.add(mn, "--encoding", "encoding", "Class codes 'm,n'");
  mn_over.add(mn, "--restarts", "restarts", "Random restarts per variant");
  mn_over.add(mn, "--seed", "seed", "Restart seed");
  mn_over.add(mn, "--init", "init", "random_targets or random_weights");
  mn_over.add(mn, "--variants", "variants", "soft, hard, or soft,hard");
  mn_over.add(mn, "--dedup-objective", "dedup_objective", "Relative objective tolerance for merging");
  mn_over.add(mn, "--dedup-weight", "dedup_weight", "Weight distance tolerance for merging");
  mn_over.add(mn, "--fixed-point-tolerance", "fixed_point_tolerance",
              "Largest relative change accepted as a verified fixed point");
  mn_over.add(mn, "--lambda", "lambda", "Ridge penalty (>= 0)");
  mn_over.add_flag(mn, "--penalize-intercept", "penalize_intercept", "Also penalize the intercept");
  mn_over.add_flag(mn, "--standardize", "standardize", "Standardize features");
  mn_over.add(mn, "--max-iterations", "max_iterations", "BCD iteration cap");
  mn_over.add(mn, "--tol", "objective_tolerance", "BCD relative objective tolerance");

  auto* sw = app.add_subcommand("seed-sweep", "Test error per data-generating seed, with single-class flags");
  add_common(sw, sw_common, sw_over);
  sw_over.add(sw, "--seeds", "seeds", "Seed list: '1,5,9' or '1..50'");
  sw_over.add(sw, "--d", "d", "Feature dimension");
  sw_over.add(sw, "--separation", "separation", "Distance between the class means");
  sw_over.add(sw, "--prior", "prior", "P(pos)");
  sw_over.add(sw, "--n-labeled", "n_labeled", "Labeled objects");
  sw_over.add(sw, "--n-unlabeled", "n_unlabeled", "Unlabeled objects");
  sw_over.add(sw, "--n-test", "n_test", "Test objects");
  sw_over.add(sw, "--encoding", "encoding", "Class codes 'm,n'");
  sw_over.add(sw, "--lambda", "lambda", "Ridge penalty (>= 0)");
  sw_over.add_flag(sw, "--penalize-intercept", "penalize_intercept", "Also penalize the intercept");
  sw_over.add_flag(sw, "--standardize", "standardize", "Standardize features");
  sw_over.add(sw, "--max-iterations", "max_iterations", "BCD iteration cap");
  sw_over.add(sw, "--tol", "objective_tolerance", "BCD relative objective tolerance");

  SummarizeArgs sm_args;
  auto* sm = app.add_subcommand("summarize", "Mean, std, and count of a results CSV per group");
  sm->add_option("input", sm_args.input, "Results CSV")->required()->check(CLI::ExistingFile);
  sm->add_option("--by", sm_args.by, "Grouping keys")->capture_default_str();
  sm->add_option("--measures", sm_args.measures, "Keep only these measures");
  sm->add_option("--output", sm_args.output, "Summary file name inside --out-dir")
      ->capture_default_str();
  sm->add_option("--out-dir", sm_args.out_dir,
                 std::string("Output directory (default: $") + kOutputDirEnv +
                     " or the working directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorCategory::config);
  }

  try {
    if (*fit) return run_fit(fit_args);
    if (*ex) return run_example_1d(ex_args);
    if (*cu) return run_curve(cu_common, cu_over, false);
    if (*cf) return run_curve(cf_common, cf_over, true);
    if (*mn) return run_minima(mn_common, mn_over);
    if (*sw) return run_sweep(sw_common, sw_over);
    if (*sm) return run_summarize(sm_args);
  } catch (const Error& e) {
    std::cerr << "selflearn: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "selflearn: internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
