#include "selflearn/model.hpp"

#include "selflearn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace selflearn {

namespace {

// Below this reciprocal condition estimate the normal matrix is treated as
// singular.
constexpr double kMinReciprocalCondition = 1e-13;

Eigen::VectorXd to_vector(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + " contains non-finite entries");
}

void require_cols(const WeightVector& w, const FeatureMatrix& X, const char* op) {
  if (w.size() != X.cols()) {
    std::ostringstream msg;
    msg << op << ": weight length " << w.size() << " does not match " << X.cols()
        << " feature columns";
    throw ShapeError(msg.str());
  }
}

void require_rows(const FeatureMatrix& X, Eigen::Index n, const char* op, const char* what) {
  if (X.rows() != n) {
    std::ostringstream msg;
    msg << op << ": " << what << " has length " << n << " but matrix has " << X.rows()
        << " rows";
    throw ShapeError(msg.str());
  }
}

// Diagonal of the penalty matrix D.
Eigen::VectorXd penalty_diagonal(const FeatureMatrix& X, const RidgeConfig& cfg) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(X.cols());
  if (X.has_intercept_column() && !cfg.penalize_intercept && X.cols() > 0) d[X.cols() - 1] = 0.0;
  return d;
}

}  // namespace

LabelEncoding::LabelEncoding(double m, double n) : m_(m), n_(n) {
  if (!std::isfinite(m) || !std::isfinite(n)) throw DomainError("label codes must be finite");
  if (m == n) throw DomainError("label codes m and n must differ");
}

FeatureMatrix::FeatureMatrix(Eigen::MatrixXd values, bool has_intercept_column)
    : values_(std::move(values)), has_intercept_(has_intercept_column) {
  if (!values_.allFinite()) throw DomainError("feature matrix contains non-finite values");
  if (has_intercept_) {
    if (values_.cols() == 0) throw ShapeError("intercept flag set on a matrix without columns");
    if ((values_.col(values_.cols() - 1).array() != 1.0).any())
      throw DomainError("intercept column is not identically 1");
  }
}

FeatureMatrix FeatureMatrix::with_intercept(const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd out(raw.rows(), raw.cols() + 1);
  out.leftCols(raw.cols()) = raw;
  out.col(raw.cols()).setOnes();
  return FeatureMatrix(std::move(out), true);
}

FeatureMatrix FeatureMatrix::vstack(const FeatureMatrix& top, const FeatureMatrix& bottom) {
  if (top.cols() != bottom.cols() || top.has_intercept_ != bottom.has_intercept_)
    throw ShapeError("vstack: blocks differ in columns or intercept layout");
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top.values_;
  out.bottomRows(bottom.rows()) = bottom.values_;
  FeatureMatrix result;
  result.values_ = std::move(out);
  result.has_intercept_ = top.has_intercept_;
  return result;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix result;
  result.values_.resize(static_cast<Eigen::Index>(rows.size()), values_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= static_cast<std::size_t>(values_.rows()))
      throw ShapeError("select_rows: row index out of range");
    result.values_.row(static_cast<Eigen::Index>(i)) =
        values_.row(static_cast<Eigen::Index>(rows[i]));
  }
  result.has_intercept_ = has_intercept_;
  return result;
}

FeatureMatrix FeatureMatrix::head(Eigen::Index count) const {
  if (count < 0 || count > rows()) throw ShapeError("head: count exceeds row count");
  FeatureMatrix result;
  result.values_ = values_.topRows(count);
  result.has_intercept_ = has_intercept_;
  return result;
}

EncodedTargets::EncodedTargets(Eigen::VectorXd values) : values_(std::move(values)) {
  require_finite(values_, "targets");
}

EncodedTargets::EncodedTargets(std::initializer_list<double> values)
    : EncodedTargets(to_vector(values)) {}

EncodedTargets EncodedTargets::select(std::span<const std::size_t> rows) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= static_cast<std::size_t>(values_.size()))
      throw ShapeError("select: index out of range");
    out[static_cast<Eigen::Index>(i)] = values_[static_cast<Eigen::Index>(rows[i])];
  }
  return EncodedTargets(std::move(out));
}

EncodedTargets EncodedTargets::head(Eigen::Index count) const {
  if (count < 0 || count > size()) throw ShapeError("head: count exceeds length");
  return EncodedTargets(values_.head(count));
}

EncodedTargets EncodedTargets::concat(const EncodedTargets& top, const EncodedTargets& bottom) {
  Eigen::VectorXd out(top.size() + bottom.size());
  out << top.values_, bottom.values_;
  return EncodedTargets(std::move(out));
}

WeightVector::WeightVector(Eigen::VectorXd values) : values_(std::move(values)) {
  require_finite(values_, "weights");
}

WeightVector::WeightVector(std::initializer_list<double> values)
    : WeightVector(to_vector(values)) {}

void RidgeConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ConfigError("lambda must be a finite nonnegative number");
}

Responsibilities::Responsibilities(Eigen::VectorXd values) : values_(std::move(values)) {
  for (Eigen::Index j = 0; j < values_.size(); ++j) {
    const double q = values_[j];
    if (!(q >= 0.0 && q <= 1.0)) {
      std::ostringstream msg;
      msg << "responsibility " << j << " = " << q << " is outside [0, 1]";
      throw DomainError(msg.str());
    }
  }
}

Responsibilities::Responsibilities(std::initializer_list<double> values)
    : Responsibilities(to_vector(values)) {}

EncodedTargets encode_labels(std::span<const std::string> labels, const ClassMap& classes,
                             const LabelEncoding& encoding) {
  if (classes.first == classes.second)
    throw EncodingError("class map assigns the same symbol '" + classes.first + "' to both codes");
  std::vector<std::string> seen;
  Eigen::VectorXd out(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& s = labels[i];
    if (std::find(seen.begin(), seen.end(), s) == seen.end()) {
      seen.push_back(s);
      if (seen.size() > 2)
        throw EncodingError("more than two distinct class symbols (third is '" + s + "')");
    }
    if (s == classes.first) {
      out[static_cast<Eigen::Index>(i)] = encoding.m();
    } else if (s == classes.second) {
      out[static_cast<Eigen::Index>(i)] = encoding.n();
    } else {
      throw EncodingError("class symbol '" + s + "' at position " + std::to_string(i) +
                          " is not in the class map");
    }
  }
  return EncodedTargets(std::move(out));
}

WeightVector fit_ridge(const FeatureMatrix& X, const EncodedTargets& t, const RidgeConfig& cfg) {
  cfg.validate();
  require_rows(X, t.size(), "fit_ridge", "target vector");
  if (X.cols() == 0) throw ShapeError("fit_ridge: design matrix has no columns");

  const Eigen::MatrixXd& A = X.values();
  Eigen::MatrixXd normal = A.transpose() * A;
  normal.diagonal() += cfg.lambda * penalty_diagonal(X, cfg);
  const Eigen::VectorXd rhs = A.transpose() * t.values();

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kMinReciprocalCondition)) {
    std::ostringstream msg;
    msg << "fit_ridge: regularized normal matrix is singular (rows=" << X.rows()
        << ", cols=" << X.cols() << ", lambda=" << cfg.lambda
        << ", penalize_intercept=" << (cfg.penalize_intercept ? "true" : "false")
        << "); need lambda > 0 or a full-column-rank design with rows >= cols";
    throw RankDeficiencyError(msg.str());
  }
  Eigen::VectorXd w = llt.solve(rhs);
  w += llt.solve(rhs - normal * w);
  if (!w.allFinite()) throw RankDeficiencyError("fit_ridge: solution is not finite");
  return WeightVector(std::move(w));
}

Eigen::VectorXd decision_values(const WeightVector& w, const FeatureMatrix& X) {
  require_cols(w, X, "decision_values");
  return X.values() * w.values();
}

EncodedTargets predict(const WeightVector& w, const FeatureMatrix& X,
                       const LabelEncoding& encoding) {
  const Eigen::VectorXd d = decision_values(w, X);
  Eigen::VectorXd out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    out[i] = std::abs(d[i] - encoding.n()) < std::abs(d[i] - encoding.m()) ? encoding.n()
                                                                          : encoding.m();
  }
  return EncodedTargets(std::move(out));
}

double ridge_penalty(const WeightVector& w, const FeatureMatrix& X, const RidgeConfig& cfg) {
  require_cols(w, X, "ridge_penalty");
  if (cfg.lambda == 0.0) return 0.0;
  return cfg.lambda * (penalty_diagonal(X, cfg).array() * w.values().array().square()).sum();
}

double objective_supervised(const WeightVector& w, const FeatureMatrix& X_lab,
                            const EncodedTargets& y, const RidgeConfig& cfg) {
  require_rows(X_lab, y.size(), "objective_supervised", "label vector");
  return (decision_values(w, X_lab) - y.values()).squaredNorm() + ridge_penalty(w, X_lab, cfg);
}

double objective_label_based(const WeightVector& w, const EncodedTargets& u,
                             const FeatureMatrix& X_lab, const EncodedTargets& y,
                             const FeatureMatrix& X_unl, const RidgeConfig& cfg) {
  require_rows(X_unl, u.size(), "objective_label_based", "pseudo-target vector");
  require_cols(w, X_unl, "objective_label_based");
  return objective_supervised(w, X_lab, y, cfg) +
         (decision_values(w, X_unl) - u.values()).squaredNorm();
}

double objective_responsibility(const WeightVector& w, const Responsibilities& q,
                                const FeatureMatrix& X_lab, const EncodedTargets& y,
                                const FeatureMatrix& X_unl, const LabelEncoding& encoding,
                                const RidgeConfig& cfg) {
  require_rows(X_unl, q.size(), "objective_responsibility", "responsibility vector");
  const Eigen::VectorXd d = decision_values(w, X_unl);
  const Eigen::ArrayXd qa = q.values().array();
  const double unlabeled = (qa * (d.array() - encoding.m()).square() +
                            (1.0 - qa) * (d.array() - encoding.n()).square())
                               .sum();
  return objective_supervised(w, X_lab, y, cfg) + unlabeled;
}

double error_rate(const EncodedTargets& predicted, const EncodedTargets& truth) {
  if (predicted.size() != truth.size())
    throw ShapeError("error_rate: predicted and true vectors differ in length");
  if (truth.size() == 0) throw DomainError("error_rate: empty vectors");
  const auto mismatches = (predicted.values().array() != truth.values().array()).count();
  return static_cast<double>(mismatches) / static_cast<double>(truth.size());
}

double average_quadratic_loss(const WeightVector& w, const FeatureMatrix& X_test,
                              const EncodedTargets& y_test) {
  require_rows(X_test, y_test.size(), "average_quadratic_loss", "label vector");
  if (y_test.size() == 0) throw DomainError("average_quadratic_loss: empty test set");
  return (decision_values(w, X_test) - y_test.values()).squaredNorm() /
         static_cast<double>(y_test.size());
}

}  // namespace selflearn
