#pragma once

#include "selflearn/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace selflearn {

/// Per-feature affine map applied before the intercept column is appended.
struct Standardization {
  bool applied = false;
  Eigen::VectorXd mean;
  /// Population standard deviation; 1 for zero-variance features.
  Eigen::VectorXd scale;
  /// Features whose variance was zero and were passed through unscaled.
  std::vector<Eigen::Index> zero_variance_features;
};

/// Source-dataset row indices of each block.
struct RowAssignment {
  std::vector<std::size_t> labeled;
  std::vector<std::size_t> unlabeled;
  std::vector<std::size_t> test;
};

/// Labeled / unlabeled / test blocks of one dataset. All three feature blocks
/// carry a trailing intercept column. `unlabeled_truth` is for the oracle
/// classifier and diagnostics only.
struct ExperimentSplit {
  std::string dataset;
  LabelEncoding encoding;
  FeatureMatrix X_lab;
  EncodedTargets y_lab;
  FeatureMatrix X_unl;
  EncodedTargets unlabeled_truth;
  FeatureMatrix X_test;
  EncodedTargets y_test;
  Standardization standardization;
  RowAssignment rows;

  /// Hash of the row assignment, encoding, and feature values.
  std::uint64_t fingerprint() const;
};

/// Maximum number of labeled-block redraws when the block misses a class.
inline constexpr int kClassPresenceRetries = 100;

/// Samples l + u + t rows without replacement: the first l labeled, the
/// next u unlabeled, the last t test. The whole draw is repeated (fresh
/// sub-seed) until the labeled block contains both classes. Standardization
/// statistics come from labeled + unlabeled rows only.
ExperimentSplit make_split(const Dataset& ds, std::size_t l, std::size_t u, std::size_t t,
                           const LabelEncoding& encoding, bool standardize, std::uint64_t seed);

/// Holds out round(test_fraction N) test rows; of the rest, the first
/// round(labeled_fraction * rest) are labeled and the remainder unlabeled.
ExperimentSplit make_fraction_split(const Dataset& ds, double test_fraction,
                                    double labeled_fraction, const LabelEncoding& encoding,
                                    bool standardize, std::uint64_t seed);

// Building blocks for protocols that reuse one draw across a grid.

/// Row draw for make_split with the class-presence retry loop. The first
/// `l` rows of `labeled` + `unlabeled` + `test` come from one permutation.
RowAssignment draw_rows(const Dataset& ds, std::size_t l, std::size_t u, std::size_t t,
                        std::uint64_t seed);

/// Test holdout plus a permutation of the remaining rows whose first
/// `min_labeled` entries contain both classes.
struct FractionDraw {
  std::vector<std::size_t> test;
  std::vector<std::size_t> rest;
};
FractionDraw draw_fraction_rows(const Dataset& ds, double test_fraction, std::size_t min_labeled,
                                std::uint64_t seed);

/// round(fraction * rest), validated to lie in [2, rest].
std::size_t labeled_count(std::size_t rest, double labeled_fraction);

/// Builds the blocks for `rows`. Standardization statistics, when enabled,
/// are computed over `stats_rows` (which must not include test rows).
ExperimentSplit materialize_split(const Dataset& ds, const RowAssignment& rows,
                                  const LabelEncoding& encoding, bool standardize,
                                  std::span<const std::size_t> stats_rows);

}  // namespace selflearn
