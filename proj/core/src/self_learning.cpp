#include "selflearn/self_learning.hpp"

#include "selflearn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace selflearn {

namespace {

struct PseudoStep {
  EncodedTargets targets;
  std::optional<Responsibilities> q;
};

PseudoStep pseudo_step(Variant variant, const WeightVector& w, const FeatureMatrix& X_unl,
                       const LabelEncoding& encoding) {
  if (variant == Variant::soft_label) return {soft_label_update(w, X_unl, encoding), std::nullopt};
  Responsibilities q = hard_responsibility_update(w, X_unl, encoding);
  EncodedTargets t = responsibilities_to_targets(q, encoding);
  return {std::move(t), std::move(q)};
}

double objective_at(Variant variant, const WeightVector& w, const PseudoStep& step,
                    const FeatureMatrix& X_lab, const EncodedTargets& y,
                    const FeatureMatrix& X_unl, const LabelEncoding& encoding,
                    const RidgeConfig& ridge) {
  if (variant == Variant::hard_label && step.q)
    return objective_responsibility(w, *step.q, X_lab, y, X_unl, encoding, ridge);
  return objective_label_based(w, step.targets, X_lab, y, X_unl, ridge);
}

double relative_decrease(double before, double after) {
  const double scale = std::max(std::abs(before), std::numeric_limits<double>::min());
  return (before - after) / scale;
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  return v == Variant::soft_label ? "soft_label" : "hard_label";
}

Variant parse_variant(std::string_view name) {
  if (name == "soft" || name == "soft_label") return Variant::soft_label;
  if (name == "hard" || name == "hard_label") return Variant::hard_label;
  throw ConfigError("unknown self-learning variant '" + std::string(name) + "'");
}

void BcdConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (!(objective_tolerance >= 0.0)) throw ConfigError("objective_tolerance must be nonnegative");
  ridge.validate();
}

EncodedTargets soft_label_update(const WeightVector& w, const FeatureMatrix& X_unl,
                                 const LabelEncoding& encoding) {
  return EncodedTargets(
      decision_values(w, X_unl).cwiseMax(encoding.lo()).cwiseMin(encoding.hi()).eval());
}

Responsibilities hard_responsibility_update(const WeightVector& w, const FeatureMatrix& X_unl,
                                            const LabelEncoding& encoding) {
  const Eigen::VectorXd d = decision_values(w, X_unl);
  Eigen::VectorXd q(d.size());
  for (Eigen::Index j = 0; j < d.size(); ++j)
    q[j] = std::abs(d[j] - encoding.m()) <= std::abs(d[j] - encoding.n()) ? 1.0 : 0.0;
  return Responsibilities(std::move(q));
}

EncodedTargets responsibilities_to_targets(const Responsibilities& q,
                                           const LabelEncoding& encoding) {
  const Eigen::ArrayXd qa = q.values().array();
  return EncodedTargets((qa * encoding.m() + (1.0 - qa) * encoding.n()).matrix().eval());
}

double profile_objective(Variant variant, const WeightVector& w, const FeatureMatrix& X_lab,
                         const EncodedTargets& y, const FeatureMatrix& X_unl,
                         const LabelEncoding& encoding, const RidgeConfig& ridge) {
  return objective_at(variant, w, pseudo_step(variant, w, X_unl, encoding), X_lab, y, X_unl,
                      encoding, ridge);
}

double fixed_point_residual(Variant variant, const WeightVector& w, const FeatureMatrix& X_lab,
                            const EncodedTargets& y, const FeatureMatrix& X_unl,
                            const LabelEncoding& encoding, const RidgeConfig& ridge) {
  const PseudoStep step = pseudo_step(variant, w, X_unl, encoding);
  const double before = objective_at(variant, w, step, X_lab, y, X_unl, encoding, ridge);
  const FeatureMatrix X_e = FeatureMatrix::vstack(X_lab, X_unl);
  const WeightVector next = fit_ridge(X_e, EncodedTargets::concat(y, step.targets), ridge);
  const double after = objective_at(variant, next, step, X_lab, y, X_unl, encoding, ridge);
  return std::abs(relative_decrease(before, after));
}

FitResult run_bcd(Variant variant, const FeatureMatrix& X_lab, const EncodedTargets& y,
                  const FeatureMatrix& X_unl, const LabelEncoding& encoding,
                  const BcdConfig& cfg, const BcdStart& start) {
  cfg.validate();
  if (X_lab.rows() == 0) throw DomainError("run_bcd: no labeled objects");
  if (X_lab.rows() != y.size()) throw ShapeError("run_bcd: labeled block and labels differ in length");

  const FeatureMatrix X_e = FeatureMatrix::vstack(X_lab, X_unl);

  WeightVector w;
  switch (start.kind) {
    case BcdStart::Kind::supervised:
      w = fit_ridge(X_lab, y, cfg.ridge);
      break;
    case BcdStart::Kind::weights:
      if (start.weights.size() != X_lab.cols())
        throw ShapeError("run_bcd: initial weights do not match the feature columns");
      w = start.weights;
      break;
    case BcdStart::Kind::pseudo_targets:
      if (start.pseudo_targets.size() != X_unl.rows())
        throw ShapeError("run_bcd: initial pseudo-targets do not match the unlabeled block");
      w = fit_ridge(X_e, EncodedTargets::concat(y, start.pseudo_targets), cfg.ridge);
      break;
  }

  FitResult result;
  PseudoStep step = pseudo_step(variant, w, X_unl, encoding);
  result.initial_objective = objective_at(variant, w, step, X_lab, y, X_unl, encoding, cfg.ridge);
  double reference = result.initial_objective;

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    w = fit_ridge(X_e, EncodedTargets::concat(y, step.targets), cfg.ridge);
    const double objective = objective_at(variant, w, step, X_lab, y, X_unl, encoding, cfg.ridge);
    if (objective > reference + kMonotoneSlack) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "run_bcd(" << to_string(variant) << "): objective increased from " << reference
          << " to " << objective << " at iteration " << k;
      throw InvariantViolation(msg.str());
    }
    result.objective_trace.push_back(objective);
    if (cfg.record_weights) result.weight_trace.push_back(w);
    result.iterations = k;

    PseudoStep next = pseudo_step(variant, w, X_unl, encoding);
    const bool same_labels = variant == Variant::hard_label && next.q == step.q;
    const bool small_decrease = relative_decrease(reference, objective) <= cfg.objective_tolerance;
    reference = objective;
    if (same_labels || small_decrease) {
      result.converged = true;
      result.stop_reason = small_decrease ? StopReason::tolerance : StopReason::fixed_point;
      break;
    }
    step = std::move(next);
  }

  result.weights = std::move(w);
  result.pseudo_targets = std::move(step.targets);
  result.responsibilities = std::move(step.q);
  return result;
}

}  // namespace selflearn
