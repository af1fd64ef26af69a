// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criterion 9 drives the CLI binary.

#include "selflearn/config.hpp"
#include "selflearn/dataset.hpp"
#include "selflearn/protocols.hpp"
#include "selflearn/self_learning.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace selflearn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Objective traces from criteria 2 and 4, checked by criterion 3.
struct TraceLog {
  std::vector<FitResult> runs;
  int max_iterations = BcdConfig{}.max_iterations;
};
TraceLog g_traces;

const char* kGaussians2000 = "builtin:gaussians?n=2000&d=2&separation=2&prior=0.5&seed=1";
const char* kGaussians200 = "builtin:gaussians?n=200&d=2&separation=2&prior=0.5&seed=1";

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Outcome criterion1() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dims(1, 10);
  std::normal_distribution<double> N(0.0, 1.0);
  const double lambdas[] = {0.0, 0.01, 1.0};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double lambda = lambdas[i % 3];
    const int d = dims(rng);
    // At lambda = 0 the design needs more rows than columns (d + intercept).
    const int min_rows = lambda == 0.0 ? std::max(5, d + 2) : 5;
    const int rows = std::uniform_int_distribution<int>(min_rows, 50)(rng);
    Eigen::MatrixXd raw(rows, d);
    Eigen::VectorXd t(rows);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < d; ++c) raw(r, c) = N(rng);
      t[r] = N(rng);
    }
    const FeatureMatrix X = FeatureMatrix::with_intercept(raw);
    const WeightVector w = fit_ridge(X, EncodedTargets(t), {lambda, false});
    const auto ref = oracle::ridge(oracle::to_mat(X), oracle::to_vec(t), lambda, true);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      const double rel = std::abs(w[static_cast<Eigen::Index>(j)] - ref[j]) /
                         std::max(std::abs(ref[j]), 1e-300);
      worst = std::max(worst, rel);
    }
  }
  return {worst <= 1e-8, "max relative deviation " + num(worst)};
}

Outcome criterion2() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> dims(1, 5);
  std::uniform_int_distribution<int> unl(1, 80);
  const LabelEncoding enc;
  double worst_hard = 0.0, worst_soft = 0.0;
  bool same_lengths = true;
  for (int i = 0; i < 100; ++i) {
    const int d = dims(rng);
    const int l = std::uniform_int_distribution<int>(d + 3, 30)(rng);
    const auto inst = oracle::random_instance(rng, l, unl(rng), d, enc);
    BcdConfig cfg;
    cfg.ridge.lambda = i % 2 == 0 ? 0.0 : 0.1;
    cfg.record_weights = true;
    const auto Xl = oracle::to_mat(inst.X_lab);
    const auto Xu = oracle::to_mat(inst.X_unl);
    const auto y = oracle::to_vec(inst.y.values());

    const FitResult hard = run_bcd(Variant::hard_label, inst.X_lab, inst.y, inst.X_unl, enc, cfg);
    const auto ref_h = oracle::hard_self_training(Xl, y, Xu, enc.m(), enc.n(), cfg.ridge.lambda,
                                                  cfg.max_iterations, cfg.objective_tolerance);
    const FitResult soft = run_bcd(Variant::soft_label, inst.X_lab, inst.y, inst.X_unl, enc, cfg);
    const auto ref_s = oracle::clamp_impute_refit(Xl, y, Xu, enc.lo(), enc.hi(), cfg.ridge.lambda,
                                                  cfg.max_iterations, cfg.objective_tolerance);
    same_lengths = same_lengths && hard.weight_trace.size() == ref_h.weights.size() &&
                   soft.weight_trace.size() == ref_s.weights.size();
    for (std::size_t k = 0; k < std::min(hard.weight_trace.size(), ref_h.weights.size()); ++k)
      worst_hard = std::max(worst_hard, oracle::max_abs_diff(
                                            oracle::to_vec(hard.weight_trace[k].values()), ref_h.weights[k]));
    for (std::size_t k = 0; k < std::min(soft.weight_trace.size(), ref_s.weights.size()); ++k)
      worst_soft = std::max(worst_soft, oracle::max_abs_diff(
                                            oracle::to_vec(soft.weight_trace[k].values()), ref_s.weights[k]));
    g_traces.runs.push_back(hard);
    g_traces.runs.push_back(soft);
  }
  return {same_lengths && worst_hard <= 1e-10 && worst_soft <= 1e-10,
          "max |dw| hard " + num(worst_hard) + ", soft " + num(worst_soft) +
              (same_lengths ? "" : ", iteration counts differ")};
}

Outcome criterion4() {
  const auto shift_for = [](std::vector<double> unlabeled) {
    const Fig1Example ex = generate_fig1_example({-1, 1}, {"neg", "pos"}, unlabeled);
    const FeatureMatrix X_lab = FeatureMatrix::with_intercept(ex.labeled.features.values());
    const FeatureMatrix X_unl = FeatureMatrix::with_intercept(ex.unlabeled.values());
    const EncodedTargets y = ex.labeled.encoded({});
    const WeightVector sup = fit_ridge(X_lab, y, {});
    const FitResult r = run_bcd(Variant::soft_label, X_lab, y, X_unl, {}, {});
    g_traces.runs.push_back(r);
    g_traces.runs.push_back(run_bcd(Variant::hard_label, X_lab, y, X_unl, {}, {}));
    // Boundary where w0 x + w1 = 0.
    return std::abs(-r.weights[1] / r.weights[0] - (-sup[1] / sup[0]));
  };
  const double inside = shift_for({-1, 0.5});
  const double outside = shift_for({-1, 4});
  return {inside <= 1e-9 && outside > 0.0,
          "shift with {-1,0.5} = " + num(inside) + ", with {-1,4} = " + num(outside)};
}

Outcome criterion3() {
  std::size_t violations = 0, over_cap = 0;
  for (const FitResult& r : g_traces.runs) {
    double prev = r.initial_objective;
    for (double v : r.objective_trace) {
      if (v > prev + kMonotoneSlack) ++violations;
      prev = v;
    }
    if (r.iterations > g_traces.max_iterations) ++over_cap;
  }
  return {!g_traces.runs.empty() && violations == 0 && over_cap == 0,
          std::to_string(g_traces.runs.size()) + " traces, " + std::to_string(violations) +
              " increases, " + std::to_string(over_cap) + " over the iteration cap"};
}

std::map<std::string, std::map<double, std::vector<double>>> by_classifier_size(
    const ResultsTable& t, const std::string& measure) {
  std::map<std::string, std::map<double, std::vector<double>>> out;
  for (const auto& r : t.rows)
    if (r.measure == measure) out[r.classifier][r.size].push_back(r.value ? *r.value : NAN);
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

CurveConfig criterion5_config() {
  CurveConfig cfg;
  cfg.dataset = kGaussians2000;
  cfg.l_fixed = 10;
  cfg.u_grid = {0, 2, 8, 32, 128, 512};
  cfg.test_size = 1000;
  cfg.repeats = 250;
  cfg.master_seed = 1;
  cfg.jobs = 1;
  return cfg;
}

Outcome criterion5() {
  const ResultsTable t = run_unlabeled_curve(criterion5_config());
  auto loss = by_classifier_size(t, "AverageLossTest");
  bool ok = true;
  std::string detail;
  for (double u : {2.0, 8.0, 32.0, 128.0, 512.0}) {
    const auto& soft = loss["soft"][u];
    const auto& hard = loss["hard"][u];
    bool finite = soft.size() == 250 && hard.size() == 250;
    for (double v : soft) finite = finite && std::isfinite(v);
    for (double v : hard) finite = finite && std::isfinite(v);
    const double ms = mean(soft), mh = mean(hard);
    ok = ok && finite && ms <= mh;
    detail += "U=" + num(u) + ": " + num(ms) + " vs " + num(mh) + "; ";
  }
  return {ok, "mean loss soft vs hard " + detail};
}

MinimaExperimentConfig criterion6_config() {
  MinimaExperimentConfig cfg;
  cfg.dataset = "builtin:gaussians?n=60&d=2&separation=2&prior=0.5&seed=1";
  cfg.n_labeled = 10;
  cfg.n_unlabeled = 50;
  cfg.split_seed = 1;
  cfg.minima.n_restarts = 50;
  cfg.minima.seed = 1;
  return cfg;
}

Outcome criterion6() {
  const auto reports = run_minima_experiment(criterion6_config());
  std::size_t soft = 0, hard = 0, unverified = 0;
  for (const auto& r : reports) {
    (r.variant == Variant::soft_label ? soft : hard) = r.distinct_minima.size();
    for (const auto& m : r.distinct_minima)
      if (!m.verified_fixed_point) ++unverified;
  }
  return {hard >= soft && soft > 0 && unverified == 0,
          "distinct minima soft " + std::to_string(soft) + ", hard " + std::to_string(hard) + ", " +
              std::to_string(unverified) + " unverified"};
}

SeedSweepConfig criterion7_config() {
  SeedSweepConfig cfg;
  cfg.n_labeled = 4;
  cfg.n_unlabeled = 200;
  cfg.n_test = 1000;
  cfg.seeds = parse_seed_list("1..50");
  return cfg;
}

Outcome criterion7() {
  const auto rows = run_seed_sweep(criterion7_config());
  int single = 0, hard_rows = 0;
  for (const auto& r : rows)
    if (r.classifier == "hard") {
      ++hard_rows;
      single += r.single_class ? 1 : 0;
    }
  return {hard_rows == 50 && single >= 1,
          std::to_string(single) + " of " + std::to_string(hard_rows) +
              " seeds with a single-class hard-label classifier (L=4, U=200)"};
}

CurveConfig criterion8_config() {
  CurveConfig cfg;
  cfg.dataset = kGaussians200;
  cfg.test_fraction = 0.2;
  cfg.fraction_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  cfg.repeats = 250;
  cfg.master_seed = 1;
  cfg.jobs = 1;
  return cfg;
}

Outcome criterion8() {
  const ResultsTable t = run_fraction_curve(criterion8_config());
  // (a) at fraction 1.0 the three non-oracle classifiers coincide.
  std::map<std::tuple<int, std::string>, std::map<std::string, double>> at_full;
  for (const auto& r : t.rows)
    if (r.size == 1.0 && r.value) at_full[{r.repeat, r.measure}][r.classifier] = *r.value;
  double worst = 0.0;
  for (auto& [key, v] : at_full) {
    worst = std::max(worst, std::abs(v["soft"] - v["supervised"]));
    worst = std::max(worst, std::abs(v["hard"] - v["supervised"]));
  }
  bool complete = at_full.size() == 500;
  // (b) oracle has the lowest mean error at every fraction.
  auto err = by_classifier_size(t, "Error");
  bool oracle_best = true;
  std::string gaps;
  for (double f : criterion8_config().fraction_grid) {
    const double mo = mean(err["oracle"][f]);
    double best_other = INFINITY;
    for (const char* c : {"supervised", "soft", "hard"}) best_other = std::min(best_other, mean(err[c][f]));
    oracle_best = oracle_best && mo <= best_other;
    gaps += num(best_other - mo) + " ";
  }
  return {complete && worst <= 1e-12 && oracle_best,
          "max deviation at 1.0 = " + num(worst) + "; margin of oracle per fraction: " + gaps};
}

// Criterion 9 ---------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

void write_config(const fs::path& p, const KeyValues& kv) {
  std::ofstream out(p);
  for (const auto& [k, v] : kv.entries()) out << k << " = " << v << '\n';
}

Outcome criterion9() {
  const fs::path root =
      fs::temp_directory_path() / ("selflearn_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(root);
  struct Job {
    std::string subcommand;
    KeyValues config;
  };
  const std::vector<Job> jobs{
      {"curve-unlabeled", to_key_values(criterion5_config())},
      {"curve-fraction", to_key_values(criterion8_config())},
      {"minima", to_key_values(criterion6_config())},
      {"seed-sweep", to_key_values(criterion7_config())},
  };
  bool ok = true;
  std::string detail;
  for (const Job& job : jobs) {
    const fs::path cfg = root / (job.subcommand + ".cfg");
    write_config(cfg, job.config);
    std::vector<std::map<std::string, std::string>> outputs;
    int run_no = 0;
    for (int jobs_n : {1, 1, 8}) {
      const fs::path out = root / (job.subcommand + "_" + std::to_string(run_no++));
      const std::string cmd = std::string("'") + SELFLEARN_CLI_PATH + "' " + job.subcommand + " '" +
                              cfg.string() + "' --jobs " + std::to_string(jobs_n) + " --out-dir '" +
                              out.string() + "' >/dev/null";
      if (std::system(cmd.c_str()) != 0) {
        ok = false;
        detail += job.subcommand + " failed; ";
        break;
      }
      outputs.push_back(dir_contents(out));
    }
    if (outputs.size() != 3) continue;
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2] && outputs[0].size() >= 2;
    ok = ok && same;
    detail += job.subcommand + (same ? " identical (" + std::to_string(outputs[0].size()) + " files); "
                                     : " DIFFERS; ");
  }
  fs::remove_all(root);
  return {ok, detail + "jobs 1, 1, 8"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  // Criterion 3 inspects the traces gathered by 2 and 4, so it runs after them.
  const std::vector<Criterion> criteria{
      {1, "solver matches the normal-equations oracle", 5, criterion1},
      {2, "BCD equals self-training and clamp-impute-refit", 30, criterion2},
      {4, "one-dimensional first-step example", 1, criterion4},
      {3, "monotone descent within the iteration cap", 1, criterion3},
      {5, "soft-label loss <= hard-label loss on the unlabeled curve", 300, criterion5},
      {6, "hard-label has at least as many local minima, all verified", 60, criterion6},
      {7, "a seed where hard-label predicts a single class", 60, criterion7},
      {8, "fraction protocol sanity", 300, criterion8},
      {9, "byte-identical outputs across reruns and job counts", 600, criterion9},
  };

  std::map<int, std::string> lines;
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += " [runtime " + num(secs) + " s exceeds " + num(c.limit_seconds) + " s]";
    }
    all = all && o.pass;
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " -- "
         << o.detail << " (" << num(secs) << " s)";
    lines[c.id] = line.str();
  }
  for (const auto& [id, line] : lines) std::cout << line << '\n';
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED") << '\n';
  return all ? 0 : 1;
}
