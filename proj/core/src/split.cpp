#include "selflearn/split.hpp"

#include "selflearn/errors.hpp"
#include "selflearn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace selflearn {

namespace {

bool has_both_classes(const Dataset& ds, std::span<const std::size_t> rows) {
  bool first = false;
  bool second = false;
  for (std::size_t r : rows) {
    (ds.labels[r] == ds.classes.first ? first : second) = true;
    if (first && second) return true;
  }
  return false;
}

std::vector<std::size_t> shuffled_rows(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

[[noreturn]] void fail_class_presence(const Dataset& ds, std::size_t l) {
  throw DataError(DataError::Kind::class_presence,
                  "dataset '" + ds.name + "': no labeled block of " + std::to_string(l) +
                      " rows containing both classes after " +
                      std::to_string(kClassPresenceRetries) + " redraws");
}

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void value(const T& v) {
    bytes(&v, sizeof v);
  }
  void indices(const std::vector<std::size_t>& v) {
    value(v.size());
    bytes(v.data(), v.size() * sizeof(std::size_t));
  }
  void matrix(const Eigen::MatrixXd& m) {
    value(m.rows());
    value(m.cols());
    bytes(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t ExperimentSplit::fingerprint() const {
  Fnv1a h;
  h.indices(rows.labeled);
  h.indices(rows.unlabeled);
  h.indices(rows.test);
  h.value(encoding.m());
  h.value(encoding.n());
  h.matrix(X_lab.values());
  h.matrix(X_unl.values());
  h.matrix(X_test.values());
  return h.digest();
}

RowAssignment draw_rows(const Dataset& ds, std::size_t l, std::size_t u, std::size_t t,
                        std::uint64_t seed) {
  ds.validate();
  if (l < 2) throw DomainError("make_split: need at least 2 labeled objects");
  const auto n = static_cast<std::size_t>(ds.rows());
  if (l + u + t > n)
    throw DataError(DataError::Kind::insufficient_rows,
                    "dataset '" + ds.name + "' has " + std::to_string(n) + " rows; split needs " +
                        std::to_string(l + u + t));
  for (int attempt = 0; attempt <= kClassPresenceRetries; ++attempt) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(attempt), "split");
    const auto perm = shuffled_rows(n, rng);
    if (!has_both_classes(ds, std::span(perm).first(l))) continue;
    RowAssignment rows;
    rows.labeled.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(l));
    rows.unlabeled.assign(perm.begin() + static_cast<std::ptrdiff_t>(l),
                          perm.begin() + static_cast<std::ptrdiff_t>(l + u));
    rows.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(l + u),
                     perm.begin() + static_cast<std::ptrdiff_t>(l + u + t));
    return rows;
  }
  fail_class_presence(ds, l);
}

std::size_t labeled_count(std::size_t rest, double labeled_fraction) {
  if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0))
    throw DomainError("labeled_fraction must lie in (0, 1]");
  const auto l = static_cast<std::size_t>(std::llround(labeled_fraction * static_cast<double>(rest)));
  if (l < 2)
    throw DataError(DataError::Kind::insufficient_rows,
                    "labeled fraction " + std::to_string(labeled_fraction) + " of " +
                        std::to_string(rest) + " training rows leaves fewer than 2 labeled objects");
  return std::min(l, rest);
}

FractionDraw draw_fraction_rows(const Dataset& ds, double test_fraction, std::size_t min_labeled,
                                std::uint64_t seed) {
  ds.validate();
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw DomainError("test_fraction must lie in (0, 1)");
  const auto n = static_cast<std::size_t>(ds.rows());
  const auto t = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  if (t == 0 || t + min_labeled > n)
    throw DataError(DataError::Kind::insufficient_rows,
                    "dataset '" + ds.name + "' has " + std::to_string(n) +
                        " rows; too few for the requested test and labeled fractions");
  for (int attempt = 0; attempt <= kClassPresenceRetries; ++attempt) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(attempt), "fraction-split");
    const auto perm = shuffled_rows(n, rng);
    FractionDraw draw;
    draw.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(t));
    draw.rest.assign(perm.begin() + static_cast<std::ptrdiff_t>(t), perm.end());
    if (has_both_classes(ds, std::span(draw.rest).first(min_labeled))) return draw;
  }
  fail_class_presence(ds, min_labeled);
}

ExperimentSplit materialize_split(const Dataset& ds, const RowAssignment& rows,
                                  const LabelEncoding& encoding, bool standardize,
                                  std::span<const std::size_t> stats_rows) {
  ExperimentSplit split;
  split.dataset = ds.name;
  split.encoding = encoding;
  split.rows = rows;

  const Eigen::MatrixXd& x = ds.features.values();
  Standardization& st = split.standardization;
  st.applied = standardize;
  st.mean = Eigen::VectorXd::Zero(x.cols());
  st.scale = Eigen::VectorXd::Ones(x.cols());
  if (standardize) {
    if (stats_rows.empty()) throw DomainError("standardization needs at least one training row");
    const auto count = static_cast<double>(stats_rows.size());
    for (std::size_t r : stats_rows) st.mean += x.row(static_cast<Eigen::Index>(r)).transpose();
    st.mean /= count;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(x.cols());
    for (std::size_t r : stats_rows)
      var += (x.row(static_cast<Eigen::Index>(r)).transpose() - st.mean).array().square().matrix();
    var /= count;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      if (var[k] > 0.0) {
        st.scale[k] = std::sqrt(var[k]);
      } else {
        st.zero_variance_features.push_back(k);
      }
    }
  }

  const auto block = [&](const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd raw(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
      raw.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
    if (standardize)
      raw = ((raw.rowwise() - st.mean.transpose()).array().rowwise() /
             st.scale.transpose().array())
                .matrix();
    return FeatureMatrix::with_intercept(raw);
  };

  const EncodedTargets all = ds.encoded(encoding);
  split.X_lab = block(rows.labeled);
  split.y_lab = all.select(rows.labeled);
  split.X_unl = block(rows.unlabeled);
  split.unlabeled_truth = all.select(rows.unlabeled);
  split.X_test = block(rows.test);
  split.y_test = all.select(rows.test);
  return split;
}

ExperimentSplit make_split(const Dataset& ds, std::size_t l, std::size_t u, std::size_t t,
                           const LabelEncoding& encoding, bool standardize, std::uint64_t seed) {
  const RowAssignment rows = draw_rows(ds, l, u, t, seed);
  std::vector<std::size_t> training = rows.labeled;
  training.insert(training.end(), rows.unlabeled.begin(), rows.unlabeled.end());
  return materialize_split(ds, rows, encoding, standardize, training);
}

ExperimentSplit make_fraction_split(const Dataset& ds, double test_fraction,
                                    double labeled_fraction, const LabelEncoding& encoding,
                                    bool standardize, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw DomainError("test_fraction must lie in (0, 1)");
  const auto n = static_cast<std::size_t>(ds.rows());
  const auto t = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  const std::size_t l = labeled_count(n - std::min(t, n), labeled_fraction);
  const FractionDraw draw = draw_fraction_rows(ds, test_fraction, l, seed);
  RowAssignment rows;
  rows.test = draw.test;
  rows.labeled.assign(draw.rest.begin(), draw.rest.begin() + static_cast<std::ptrdiff_t>(l));
  rows.unlabeled.assign(draw.rest.begin() + static_cast<std::ptrdiff_t>(l), draw.rest.end());
  return materialize_split(ds, rows, encoding, standardize, draw.rest);
}

}  // namespace selflearn
