#include "selflearn/classifiers.hpp"

#include "selflearn/errors.hpp"

namespace selflearn {

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::supervised:
      return "supervised";
    case ClassifierKind::self_learning_soft:
      return "soft";
    case ClassifierKind::self_learning_hard:
      return "hard";
    case ClassifierKind::oracle:
      return "oracle";
  }
  return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
  if (name == "supervised") return ClassifierKind::supervised;
  if (name == "soft" || name == "self_learning_soft") return ClassifierKind::self_learning_soft;
  if (name == "hard" || name == "self_learning_hard") return ClassifierKind::self_learning_hard;
  if (name == "oracle") return ClassifierKind::oracle;
  throw ConfigError("unknown classifier '" + std::string(name) +
                    "' (expected supervised, soft, hard, or oracle)");
}

std::string_view to_string(Measure m) noexcept {
  return m == Measure::error ? "Error" : "AverageLossTest";
}

Measure parse_measure(std::string_view name) {
  if (name == "Error") return Measure::error;
  if (name == "AverageLossTest") return Measure::average_loss_test;
  throw ConfigError("unknown measure '" + std::string(name) +
                    "' (expected Error or AverageLossTest)");
}

std::vector<ClassifierSpec> default_roster(const RidgeConfig& ridge, const BcdConfig& bcd) {
  std::vector<ClassifierSpec> roster;
  for (auto kind : {ClassifierKind::supervised, ClassifierKind::self_learning_soft,
                    ClassifierKind::self_learning_hard, ClassifierKind::oracle})
    roster.push_back({kind, ridge, bcd});
  return roster;
}

ClassifierFit fit_classifier(const ClassifierSpec& spec, const ExperimentSplit& split) {
  switch (spec.kind) {
    case ClassifierKind::supervised: {
      WeightVector w = fit_ridge(split.X_lab, split.y_lab, spec.ridge);
      const double obj = objective_supervised(w, split.X_lab, split.y_lab, spec.ridge);
      return {std::move(w), 0, obj, true};
    }
    case ClassifierKind::self_learning_soft:
    case ClassifierKind::self_learning_hard: {
      BcdConfig bcd = spec.bcd;
      bcd.ridge = spec.ridge;
      const Variant variant = spec.kind == ClassifierKind::self_learning_soft ? Variant::soft_label
                                                                             : Variant::hard_label;
      FitResult fit = run_bcd(variant, split.X_lab, split.y_lab, split.X_unl, split.encoding, bcd);
      return {std::move(fit.weights), fit.iterations, fit.final_objective(), fit.converged};
    }
    case ClassifierKind::oracle: {
      const FeatureMatrix X = FeatureMatrix::vstack(split.X_lab, split.X_unl);
      const EncodedTargets t = EncodedTargets::concat(split.y_lab, split.unlabeled_truth);
      WeightVector w = fit_ridge(X, t, spec.ridge);
      const double obj = objective_supervised(w, X, t, spec.ridge);
      return {std::move(w), 0, obj, true};
    }
  }
  throw ConfigError("unhandled classifier kind");
}

std::string error_tag(const std::exception& e) {
  if (dynamic_cast<const RankDeficiencyError*>(&e)) return "rank_deficient";
  if (dynamic_cast<const InvariantViolation*>(&e)) return "invariant_violation";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  return "error";
}

std::vector<Evaluation> evaluate_classifiers(const ExperimentSplit& split,
                                             const std::vector<ClassifierSpec>& roster,
                                             const std::vector<Measure>& measures) {
  if (roster.empty()) throw ConfigError("evaluate_classifiers: empty classifier roster");
  std::vector<Evaluation> out;
  out.reserve(roster.size() * measures.size());
  for (const ClassifierSpec& spec : roster) {
    std::optional<WeightVector> w;
    std::string tag;
    try {
      w = fit_classifier(spec, split).weights;
    } catch (const Error& e) {
      tag = error_tag(e);
    }
    for (Measure m : measures) {
      Evaluation ev{spec.kind, m, std::nullopt, tag};
      if (w) {
        ev.value = m == Measure::error
                       ? error_rate(predict(*w, split.X_test, split.encoding), split.y_test)
                       : average_quadratic_loss(*w, split.X_test, split.y_test);
      }
      out.push_back(std::move(ev));
    }
  }
  return out;
}

}  // namespace selflearn
