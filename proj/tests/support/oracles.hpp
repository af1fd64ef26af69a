#pragma once

// Reference implementations used by the tests. They work on plain nested
// vectors with scalar loops and share no code with the library, so an
// agreement between the two is evidence rather than tautology.

#include "selflearn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row major

inline Mat to_mat(const selflearn::FeatureMatrix& X) {
  Mat out(static_cast<std::size_t>(X.rows()), Vec(static_cast<std::size_t>(X.cols())));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = X.values()(i, j);
  return out;
}

template <typename V>
Vec to_vec(const V& v) {
  Vec out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
  return out;
}

inline Mat stack(const Mat& a, const Mat& b) {
  Mat out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Solves A x = b by Gauss-Jordan elimination with partial pivoting.
inline Vec gauss_jordan(Mat A, Vec b) {
  const std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (A[piv][c] == 0.0) throw std::runtime_error("gauss_jordan: singular");
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    const double p = A[c][c];
    for (std::size_t k = 0; k < n; ++k) A[c][k] /= p;
    b[c] /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0.0) continue;
      const double f = A[r][c];
      for (std::size_t k = 0; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  return b;
}

/// Minimizer of ||Xw - t||^2 + lambda * sum_{j penalized} w_j^2 from the
/// normal equations written out entry by entry. `free_last` leaves the last
/// coordinate (the intercept) unpenalized.
inline Vec ridge(const Mat& X, const Vec& t, double lambda, bool free_last) {
  const std::size_t p = X.front().size();
  Mat A(p, Vec(p, 0.0));
  Vec b(p, 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      b[j] += X[i][j] * t[i];
      for (std::size_t k = 0; k < p; ++k) A[j][k] += X[i][j] * X[i][k];
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    if (!(free_last && j + 1 == p)) A[j][j] += lambda;
  return gauss_jordan(std::move(A), std::move(b));
}

inline double sse(const Mat& X, const Vec& w, const Vec& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = dot(X[i], w) - t[i];
    s += r * r;
  }
  return s;
}

inline double penalty(const Vec& w, double lambda, bool free_last) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (!(free_last && j + 1 == w.size())) s += w[j] * w[j];
  return lambda * s;
}

/// J_r written as a double sum.
inline double responsibility_objective(const Mat& Xl, const Vec& y, const Mat& Xu, const Vec& w,
                                       const Vec& q, double m, double n, double lambda,
                                       bool free_last) {
  double s = sse(Xl, w, y) + penalty(w, lambda, free_last);
  for (std::size_t j = 0; j < Xu.size(); ++j) {
    const double d = dot(Xu[j], w);
    s += q[j] * (d - m) * (d - m) + (1.0 - q[j]) * (d - n) * (d - n);
  }
  return s;
}

struct LoopTrace {
  std::vector<Vec> weights;
  std::vector<double> objectives;
};

inline double rel_decrease(double before, double after) {
  return (before - after) / std::max(std::abs(before), 1e-300);
}

/// Classic self-training: label the unlabeled objects with the current
/// classifier (nearest code, ties to m), retrain on everything, repeat until
/// the labels stop changing or the squared loss stalls.
inline LoopTrace hard_self_training(const Mat& Xl, const Vec& y, const Mat& Xu, double m, double n,
                                    double lambda, int max_iter, double tol) {
  const auto label = [&](const Vec& w) {
    Vec out(Xu.size());
    for (std::size_t j = 0; j < Xu.size(); ++j) {
      const double d = dot(Xu[j], w);
      out[j] = std::abs(d - m) <= std::abs(d - n) ? m : n;
    }
    return out;
  };
  const Mat X = stack(Xl, Xu);
  Vec w = ridge(Xl, y, lambda, true);
  Vec labels = label(w);
  double prev = sse(X, w, concat(y, labels)) + penalty(w, lambda, true);
  LoopTrace trace;
  for (int k = 0; k < max_iter; ++k) {
    w = ridge(X, concat(y, labels), lambda, true);
    const double obj = sse(X, w, concat(y, labels)) + penalty(w, lambda, true);
    trace.weights.push_back(w);
    trace.objectives.push_back(obj);
    const Vec next = label(w);
    if (next == labels || rel_decrease(prev, obj) <= tol) break;
    labels = next;
    prev = obj;
  }
  return trace;
}

/// Soft-label self-learning as impute-and-refit: the unlabeled targets are
/// the current predictions clipped to [lo, hi].
inline LoopTrace clamp_impute_refit(const Mat& Xl, const Vec& y, const Mat& Xu, double lo,
                                    double hi, double lambda, int max_iter, double tol) {
  const auto impute = [&](const Vec& w) {
    Vec out(Xu.size());
    for (std::size_t j = 0; j < Xu.size(); ++j) out[j] = std::clamp(dot(Xu[j], w), lo, hi);
    return out;
  };
  const Mat X = stack(Xl, Xu);
  Vec w = ridge(Xl, y, lambda, true);
  Vec u = impute(w);
  double prev = sse(X, w, concat(y, u)) + penalty(w, lambda, true);
  LoopTrace trace;
  for (int k = 0; k < max_iter; ++k) {
    w = ridge(X, concat(y, u), lambda, true);
    const double obj = sse(X, w, concat(y, u)) + penalty(w, lambda, true);
    trace.weights.push_back(w);
    trace.objectives.push_back(obj);
    if (rel_decrease(prev, obj) <= tol) break;
    u = impute(w);
    prev = obj;
  }
  return trace;
}

/// Mean and sample standard deviation (n - 1), the naive two-pass way.
inline std::pair<double, double> mean_std(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Random instances ----------------------------------------------------------

struct Instance {
  selflearn::FeatureMatrix X_lab;
  selflearn::EncodedTargets y;
  selflearn::FeatureMatrix X_unl;
};

/// Gaussian features with an intercept column; labels from a noisy linear
/// rule, redrawn until both classes appear among the labeled rows.
inline Instance random_instance(std::mt19937_64& rng, int l, int u, int d,
                                const selflearn::LabelEncoding& enc = {}) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd xl(l, d), xu(u, d);
  Eigen::VectorXd y(l);
  Eigen::VectorXd dir(d);
  for (int j = 0; j < d; ++j) dir[j] = N(rng);
  for (;;) {
    bool saw_m = false, saw_n = false;
    for (int i = 0; i < l; ++i) {
      for (int j = 0; j < d; ++j) xl(i, j) = N(rng);
      const bool pos = xl.row(i).dot(dir) + 0.7 * N(rng) > 0.0;
      y[i] = pos ? enc.n() : enc.m();
      (pos ? saw_n : saw_m) = true;
    }
    if (saw_m && saw_n) break;
  }
  for (int i = 0; i < u; ++i)
    for (int j = 0; j < d; ++j) xu(i, j) = N(rng);
  return {selflearn::FeatureMatrix::with_intercept(xl), selflearn::EncodedTargets(y),
          selflearn::FeatureMatrix::with_intercept(xu)};
}

}  // namespace oracle
