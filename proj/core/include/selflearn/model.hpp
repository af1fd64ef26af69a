#pragma once

// Least-squares classifier primitives: label encoding, the ridge solve,
// decision and prediction functions, the supervised / label-based /
// responsibility-based objectives, and the two evaluation measures.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace selflearn {

/// Numeric codes (m, n) substituted for the two class symbols.
class LabelEncoding {
 public:
  LabelEncoding() = default;
  /// Throws DomainError unless m != n and both are finite.
  LabelEncoding(double m, double n);

  double m() const noexcept { return m_; }
  double n() const noexcept { return n_; }
  double midpoint() const noexcept { return 0.5 * (m_ + n_); }
  double lo() const noexcept { return m_ < n_ ? m_ : n_; }
  double hi() const noexcept { return m_ < n_ ? n_ : m_; }

  friend bool operator==(const LabelEncoding&, const LabelEncoding&) = default;

 private:
  double m_ = -1.0;
  double n_ = 1.0;
};

/// Class symbol -> code map: `first` is encoded as m, `second` as n.
struct ClassMap {
  std::string first;
  std::string second;

  friend bool operator==(const ClassMap&, const ClassMap&) = default;
};

/// Dense design matrix. When `has_intercept_column` is set, the last column
/// is the constant 1 column and is the coordinate excluded from the ridge
/// penalty unless RidgeConfig::penalize_intercept is set.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  /// Validates finiteness and, if flagged, the trailing column of ones.
  explicit FeatureMatrix(Eigen::MatrixXd values, bool has_intercept_column = false);

  /// Copies `raw` and appends a column of ones.
  static FeatureMatrix with_intercept(const Eigen::MatrixXd& raw);

  /// Stacks `top` over `bottom`; both must have the same columns and flag.
  static FeatureMatrix vstack(const FeatureMatrix& top, const FeatureMatrix& bottom);

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  bool has_intercept_column() const noexcept { return has_intercept_; }

  /// Rows in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
  /// First `count` rows.
  FeatureMatrix head(Eigen::Index count) const;

 private:
  Eigen::MatrixXd values_;
  bool has_intercept_ = false;
};

/// Numeric targets, one per object: true labels (entries in {m, n}) or
/// pseudo-targets (entries in [lo, hi]). Entries must be finite.
class EncodedTargets {
 public:
  EncodedTargets() = default;
  explicit EncodedTargets(Eigen::VectorXd values);
  EncodedTargets(std::initializer_list<double> values);

  Eigen::Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

  /// Entries in the given order.
  EncodedTargets select(std::span<const std::size_t> rows) const;
  EncodedTargets head(Eigen::Index count) const;
  static EncodedTargets concat(const EncodedTargets& top, const EncodedTargets& bottom);

  friend bool operator==(const EncodedTargets& a, const EncodedTargets& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

/// Linear classifier weights; the intercept, when present, is the last entry.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(Eigen::VectorXd values);
  WeightVector(std::initializer_list<double> values);

  Eigen::Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

  friend bool operator==(const WeightVector& a, const WeightVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

struct RidgeConfig {
  double lambda = 0.0;
  bool penalize_intercept = false;

  /// Throws ConfigError if lambda is negative or not finite.
  void validate() const;
};

/// Per-unlabeled-object probability of belonging to the class encoded m.
class Responsibilities {
 public:
  Responsibilities() = default;
  /// Throws DomainError if any entry lies outside [0, 1].
  explicit Responsibilities(Eigen::VectorXd values);
  Responsibilities(std::initializer_list<double> values);

  Eigen::Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

  friend bool operator==(const Responsibilities& a, const Responsibilities& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

/// Replaces each class symbol by its code. Throws EncodingError when more
/// than two distinct symbols appear or a symbol is not in `classes`.
EncodedTargets encode_labels(std::span<const std::string> labels, const ClassMap& classes,
                             const LabelEncoding& encoding);

/// Unique minimizer of ||Xw - t||^2 + lambda ||w_pen||^2 via a Cholesky
/// factorization of the regularized normal matrix, with one step of
/// iterative refinement. Throws RankDeficiencyError when that matrix is
/// numerically singular; no pseudo-inverse fallback.
WeightVector fit_ridge(const FeatureMatrix& X, const EncodedTargets& t, const RidgeConfig& cfg);

/// X w. Throws ShapeError on a dimension mismatch.
Eigen::VectorXd decision_values(const WeightVector& w, const FeatureMatrix& X);

/// Nearest code to each decision value; an exact tie goes to m.
EncodedTargets predict(const WeightVector& w, const FeatureMatrix& X,
                       const LabelEncoding& encoding);

/// lambda ||w_pen||^2, where w_pen drops the intercept coordinate of an
/// intercept-carrying design unless the intercept is penalized.
double ridge_penalty(const WeightVector& w, const FeatureMatrix& X, const RidgeConfig& cfg);

/// J_s(w) = ||X w - y||^2 + lambda ||w_pen||^2.
double objective_supervised(const WeightVector& w, const FeatureMatrix& X_lab,
                            const EncodedTargets& y, const RidgeConfig& cfg);

/// J_l(w, u) = ||[X_lab; X_unl] w - [y; u]||^2 + lambda ||w_pen||^2.
double objective_label_based(const WeightVector& w, const EncodedTargets& u,
                             const FeatureMatrix& X_lab, const EncodedTargets& y,
                             const FeatureMatrix& X_unl, const RidgeConfig& cfg);

/// J_r(w, q) = J_s(w) + sum_j q_j (x_j'w - m)^2 + (1 - q_j)(x_j'w - n)^2.
double objective_responsibility(const WeightVector& w, const Responsibilities& q,
                                const FeatureMatrix& X_lab, const EncodedTargets& y,
                                const FeatureMatrix& X_unl, const LabelEncoding& encoding,
                                const RidgeConfig& cfg);

/// Fraction of positions where the two code vectors differ.
double error_rate(const EncodedTargets& predicted, const EncodedTargets& truth);

/// Mean squared residual (1/T) sum (x_i'w - y_i)^2 over the test objects,
/// without the penalty term. Throws DomainError on an empty test set.
double average_quadratic_loss(const WeightVector& w, const FeatureMatrix& X_test,
                              const EncodedTargets& y_test);

}  // namespace selflearn
