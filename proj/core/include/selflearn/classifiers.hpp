#pragma once

#include "selflearn/self_learning.hpp"
#include "selflearn/split.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selflearn {

enum class ClassifierKind { supervised, self_learning_soft, self_learning_hard, oracle };

/// Short names used in results files: supervised, soft, hard, oracle.
std::string_view to_string(ClassifierKind kind) noexcept;
ClassifierKind parse_classifier(std::string_view name);

enum class Measure { error, average_loss_test };

/// "Error" and "AverageLossTest".
std::string_view to_string(Measure m) noexcept;
Measure parse_measure(std::string_view name);

inline const std::vector<Measure> kAllMeasures{Measure::error, Measure::average_loss_test};

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::supervised;
  RidgeConfig ridge{};
  /// Used by the self-learning kinds; its ridge field is replaced by `ridge`.
  BcdConfig bcd{};
};

/// supervised, soft, hard, oracle with shared ridge and BCD settings.
std::vector<ClassifierSpec> default_roster(const RidgeConfig& ridge = {}, const BcdConfig& bcd = {});

struct ClassifierFit {
  WeightVector weights;
  int iterations = 0;
  /// Final value of the objective the classifier minimizes.
  double objective = 0.0;
  bool converged = true;
};

/// Supervised: ridge on the labeled block. Self-learning: run_bcd. Oracle:
/// ridge on labeled + unlabeled with the true unlabeled labels.
ClassifierFit fit_classifier(const ClassifierSpec& spec, const ExperimentSplit& split);

struct Evaluation {
  ClassifierKind classifier = ClassifierKind::supervised;
  Measure measure = Measure::error;
  std::optional<double> value;
  /// Empty on success; otherwise a short tag naming the failure.
  std::string error_tag;
};

/// Fits every roster member on the same split and evaluates each measure on
/// the test block. A failed fit yields rows without value and with an error
/// tag instead of throwing.
std::vector<Evaluation> evaluate_classifiers(const ExperimentSplit& split,
                                             const std::vector<ClassifierSpec>& roster,
                                             const std::vector<Measure>& measures = kAllMeasures);

/// Short failure tag for an exception raised by a fit.
std::string error_tag(const std::exception& e);

}  // namespace selflearn
