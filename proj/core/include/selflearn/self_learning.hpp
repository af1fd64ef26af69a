#pragma once

// Block coordinate descent on the label-based objective J_l (soft-label
// self-learning) and on the responsibility-based objective J_r (hard-label
// self-learning), plus a random-restart enumerator of the fixed points each
// procedure can get stuck in.

#include "selflearn/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selflearn {

enum class Variant {
  soft_label,  ///< minimizes J_l over (w, u), u boxed to [lo, hi]
  hard_label,  ///< minimizes J_r over (w, q), q in [0, 1]^U
};

std::string_view to_string(Variant v) noexcept;
/// Accepts "soft", "soft_label", "hard", "hard_label".
Variant parse_variant(std::string_view name);

/// Absolute slack allowed when checking that an objective trace never goes up.
inline constexpr double kMonotoneSlack = 1e-10;

struct BcdConfig {
  int max_iterations = 500;
  /// Stop when the relative objective decrease of an iteration is at most this.
  double objective_tolerance = 1e-8;
  RidgeConfig ridge{};
  /// Keep the weights of every iteration in FitResult::weight_trace.
  bool record_weights = false;

  void validate() const;
};

/// Where the weights of the first iteration come from.
struct BcdStart {
  enum class Kind { supervised, weights, pseudo_targets };

  Kind kind = Kind::supervised;
  WeightVector weights;
  EncodedTargets pseudo_targets;

  static BcdStart supervised() { return {}; }
  static BcdStart from_weights(WeightVector w) { return {Kind::weights, std::move(w), {}}; }
  /// The initial weights are the ridge fit on [y; pseudo_targets].
  static BcdStart from_pseudo_targets(EncodedTargets u) {
    return {Kind::pseudo_targets, {}, std::move(u)};
  }
};

enum class StopReason {
  tolerance,       ///< relative objective decrease at or below the tolerance
  fixed_point,     ///< hard-label only: q repeated, so the next step is a no-op
  max_iterations,
};

struct FitResult {
  WeightVector weights;
  /// Final u (soft) or t(q) (hard); the targets the final weights were fit on.
  EncodedTargets pseudo_targets;
  /// Final q; set for the hard-label variant only.
  std::optional<Responsibilities> responsibilities;
  /// Objective after each completed iteration (after its weight step).
  std::vector<double> objective_trace;
  /// Weights after each iteration, when BcdConfig::record_weights is set.
  std::vector<WeightVector> weight_trace;
  /// Objective at the initial weights paired with their optimal pseudo-targets.
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iterations;

  double final_objective() const { return objective_trace.back(); }
};

/// u_j = clamp(x_j'w, lo, hi): the minimizer of J_l over u in the box.
EncodedTargets soft_label_update(const WeightVector& w, const FeatureMatrix& X_unl,
                                 const LabelEncoding& encoding);

/// q_j = 1 when x_j'w is at least as close to m as to n, else 0: the
/// minimizer of J_r over q in [0, 1]^U for fixed w.
Responsibilities hard_responsibility_update(const WeightVector& w, const FeatureMatrix& X_unl,
                                            const LabelEncoding& encoding);

/// t_j = q_j m + (1 - q_j) n.
EncodedTargets responsibilities_to_targets(const Responsibilities& q,
                                           const LabelEncoding& encoding);

/// Alternates the pseudo-target step and the ridge refit on the stacked
/// design until the relative objective decrease drops to the tolerance or
/// max_iterations is reached. The hard-label variant also stops as soon as q
/// repeats. Throws RankDeficiencyError if a refit is ill-posed and
/// InvariantViolation if the objective increases by more than kMonotoneSlack.
FitResult run_bcd(Variant variant, const FeatureMatrix& X_lab, const EncodedTargets& y,
                  const FeatureMatrix& X_unl, const LabelEncoding& encoding,
                  const BcdConfig& cfg, const BcdStart& start = BcdStart::supervised());

/// Objective of `variant` at w paired with the optimal pseudo-targets for w.
double profile_objective(Variant variant, const WeightVector& w, const FeatureMatrix& X_lab,
                         const EncodedTargets& y, const FeatureMatrix& X_unl,
                         const LabelEncoding& encoding, const RidgeConfig& ridge);

/// Relative objective change caused by one more BCD iteration started at w.
/// Zero (up to rounding) exactly when w is a BCD fixed point.
double fixed_point_residual(Variant variant, const WeightVector& w, const FeatureMatrix& X_lab,
                            const EncodedTargets& y, const FeatureMatrix& X_unl,
                            const LabelEncoding& encoding, const RidgeConfig& ridge);

// ---------------------------------------------------------------------------
// Local minima

struct DedupTolerance {
  double objective_relative = 1e-6;
  double weight_distance = 1e-4;
};

enum class MinimaInit {
  random_targets,  ///< soft: u_j ~ U[lo, hi]; hard: q_j ~ Bernoulli(0.5)
  random_weights,  ///< w ~ N(0, I)
};

std::string_view to_string(MinimaInit init) noexcept;
MinimaInit parse_minima_init(std::string_view name);

struct MinimaConfig {
  std::size_t n_restarts = 50;
  DedupTolerance dedup{};
  std::uint64_t seed = 1;
  MinimaInit init = MinimaInit::random_targets;
  /// A representative passes verification when one more iteration changes
  /// its objective by at most this relative amount.
  double fixed_point_tolerance = 1e-10;
  /// Worker threads for restarts; the report does not depend on it.
  std::size_t jobs = 1;
};

struct LocalMinimum {
  WeightVector weights;
  double objective = 0.0;
  std::size_t basin_count = 0;
  /// Relative objective change of one extra iteration from `weights`.
  double fixed_point_residual = 0.0;
  bool verified_fixed_point = false;
  /// All runs in this basin met the stopping tolerance.
  bool converged = false;
};

struct MinimaReport {
  Variant variant = Variant::soft_label;
  /// Sorted by objective, then lexicographically by weights.
  std::vector<LocalMinimum> distinct_minima;
  std::size_t n_restarts = 0;
  /// n_restarts random starts plus the supervised start; sum of basin counts.
  std::size_t n_runs = 0;
  DedupTolerance dedup_tolerance{};
  std::uint64_t seed = 0;
  MinimaInit init = MinimaInit::random_targets;
};

/// Runs BCD from the supervised start and from n_restarts random starts, then
/// groups the end points: two runs share a basin when their objectives agree
/// to dedup.objective_relative and their weights to dedup.weight_distance.
/// Restart i draws from its own stream derived from (seed, i).
MinimaReport enumerate_local_minima(Variant variant, const FeatureMatrix& X_lab,
                                    const EncodedTargets& y, const FeatureMatrix& X_unl,
                                    const LabelEncoding& encoding, const BcdConfig& cfg,
                                    const MinimaConfig& minima);

/// JSON object with the report fields; weights as arrays.
std::string to_json(const MinimaReport& report, int indent = 2);

}  // namespace selflearn
