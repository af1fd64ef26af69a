#include "selflearn/errors.hpp"
#include "selflearn/parallel.hpp"
#include "selflearn/rng.hpp"
#include "selflearn/self_learning.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace selflearn {

namespace {

struct RunOutcome {
  WeightVector weights;
  double objective = 0.0;
  bool converged = false;
};

bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

bool same_basin(const RunOutcome& a, const LocalMinimum& rep, const DedupTolerance& tol) {
  const double scale = std::max({std::abs(a.objective), std::abs(rep.objective), 1e-300});
  if (std::abs(a.objective - rep.objective) > tol.objective_relative * scale) return false;
  return (a.weights.values() - rep.weights.values()).norm() <= tol.weight_distance;
}

BcdStart random_start(Variant variant, MinimaInit init, Eigen::Index n_unlabeled,
                      Eigen::Index n_weights, const LabelEncoding& encoding, Rng& rng) {
  if (init == MinimaInit::random_weights) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd w(n_weights);
    for (Eigen::Index i = 0; i < n_weights; ++i) w[i] = normal(rng);
    return BcdStart::from_weights(WeightVector(std::move(w)));
  }
  Eigen::VectorXd u(n_unlabeled);
  if (variant == Variant::soft_label) {
    std::uniform_real_distribution<double> uniform(encoding.lo(), encoding.hi());
    for (Eigen::Index j = 0; j < n_unlabeled; ++j) u[j] = uniform(rng);
  } else {
    std::bernoulli_distribution coin(0.5);
    for (Eigen::Index j = 0; j < n_unlabeled; ++j) u[j] = coin(rng) ? encoding.m() : encoding.n();
  }
  return BcdStart::from_pseudo_targets(EncodedTargets(std::move(u)));
}

}  // namespace

std::string_view to_string(MinimaInit init) noexcept {
  return init == MinimaInit::random_targets ? "random_targets" : "random_weights";
}

MinimaInit parse_minima_init(std::string_view name) {
  if (name == "random_targets" || name == "targets") return MinimaInit::random_targets;
  if (name == "random_weights" || name == "weights") return MinimaInit::random_weights;
  throw ConfigError("unknown minima initialization '" + std::string(name) + "'");
}

MinimaReport enumerate_local_minima(Variant variant, const FeatureMatrix& X_lab,
                                    const EncodedTargets& y, const FeatureMatrix& X_unl,
                                    const LabelEncoding& encoding, const BcdConfig& cfg,
                                    const MinimaConfig& minima) {
  if (minima.n_restarts < 1) throw ConfigError("n_restarts must be at least 1");
  if (!(minima.dedup.objective_relative >= 0.0) || !(minima.dedup.weight_distance >= 0.0))
    throw ConfigError("dedup tolerances must be nonnegative");
  cfg.validate();

  // Verification needs the runs to be converged well past the fixed-point
  // tolerance, not just to the default stopping rule.
  BcdConfig run_cfg = cfg;
  run_cfg.record_weights = false;
  run_cfg.objective_tolerance =
      std::min(cfg.objective_tolerance, minima.fixed_point_tolerance / 10.0);

  const std::size_t n_runs = minima.n_restarts + 1;
  std::vector<RunOutcome> outcomes(n_runs);
  parallel_for(n_runs, minima.jobs, [&](std::size_t run) {
    try {
      BcdStart start = BcdStart::supervised();
      if (run > 0) {
        Rng rng = make_rng(minima.seed, run - 1, "minima-restart");
        start = random_start(variant, minima.init, X_unl.rows(), X_lab.cols(), encoding, rng);
      }
      FitResult fit = run_bcd(variant, X_lab, y, X_unl, encoding, run_cfg, start);
      outcomes[run] = {std::move(fit.weights), fit.final_objective(), fit.converged};
    } catch (const Error& e) {
      const std::string where =
          run == 0 ? std::string("supervised start") : "restart " + std::to_string(run - 1);
      throw Error(e.category(), where + ": " + e.what());
    }
  });

  std::sort(outcomes.begin(), outcomes.end(), [](const RunOutcome& a, const RunOutcome& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return lexicographically_less(a.weights.values(), b.weights.values());
  });

  MinimaReport report;
  report.variant = variant;
  report.n_restarts = minima.n_restarts;
  report.n_runs = n_runs;
  report.dedup_tolerance = minima.dedup;
  report.seed = minima.seed;
  report.init = minima.init;

  for (const RunOutcome& outcome : outcomes) {
    auto match = std::find_if(
        report.distinct_minima.begin(), report.distinct_minima.end(),
        [&](const LocalMinimum& rep) { return same_basin(outcome, rep, minima.dedup); });
    if (match != report.distinct_minima.end()) {
      ++match->basin_count;
      match->converged = match->converged && outcome.converged;
      continue;
    }
    LocalMinimum rep;
    rep.weights = outcome.weights;
    rep.objective = outcome.objective;
    rep.basin_count = 1;
    rep.converged = outcome.converged;
    report.distinct_minima.push_back(std::move(rep));
  }

  for (LocalMinimum& rep : report.distinct_minima) {
    rep.fixed_point_residual =
        fixed_point_residual(variant, rep.weights, X_lab, y, X_unl, encoding, cfg.ridge);
    rep.verified_fixed_point = rep.fixed_point_residual <= minima.fixed_point_tolerance;
  }
  return report;
}

std::string to_json(const MinimaReport& report, int indent) {
  nlohmann::ordered_json j;
  j["variant"] = std::string(to_string(report.variant));
  j["n_restarts"] = report.n_restarts;
  j["n_runs"] = report.n_runs;
  j["seed"] = report.seed;
  j["init"] = std::string(to_string(report.init));
  j["dedup_tolerance"] = {{"objective_relative", report.dedup_tolerance.objective_relative},
                          {"weight_distance", report.dedup_tolerance.weight_distance}};
  j["n_distinct"] = report.distinct_minima.size();
  auto minima = nlohmann::ordered_json::array();
  for (const LocalMinimum& m : report.distinct_minima) {
    nlohmann::ordered_json e;
    e["weights"] = std::vector<double>(m.weights.values().data(),
                                       m.weights.values().data() + m.weights.size());
    e["objective"] = m.objective;
    e["basin_count"] = m.basin_count;
    e["fixed_point_residual"] = m.fixed_point_residual;
    e["verified_fixed_point"] = m.verified_fixed_point;
    e["converged"] = m.converged;
    minima.push_back(std::move(e));
  }
  j["distinct_minima"] = std::move(minima);
  return j.dump(indent);
}

}  // namespace selflearn
