#include "selflearn/dataset.hpp"

#include "selflearn/errors.hpp"
#include "selflearn/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

namespace selflearn {

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw ShapeError("dataset '" + name + "': " + std::to_string(features.rows()) +
                     " feature rows but " + std::to_string(labels.size()) + " labels");
  if (features.has_intercept_column())
    throw ShapeError("dataset '" + name + "': features must not carry an intercept column");
  if (classes.first == classes.second)
    throw EncodingError("dataset '" + name + "': class map uses one symbol for both classes");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != classes.first && labels[i] != classes.second)
      throw EncodingError("dataset '" + name + "': row " + std::to_string(i) + " has class '" +
                          labels[i] + "' outside the class map");
  }
}

EncodedTargets Dataset::encoded(const LabelEncoding& encoding) const {
  return encode_labels(labels, classes, encoding);
}

void GaussianConfig::validate() const {
  if (d < 1) throw DomainError("gaussian config: d must be at least 1");
  if (!(mean_separation > 0.0) || !std::isfinite(mean_separation))
    throw DomainError("gaussian config: mean_separation must be positive");
  if (!(class_prior > 0.0 && class_prior < 1.0))
    throw DomainError("gaussian config: class_prior must lie strictly between 0 and 1");
  if (n_per_draw < 2) throw DomainError("gaussian config: n_per_draw must be at least 2");
}

Dataset generate_two_gaussians(const GaussianConfig& cfg, int n, std::uint64_t seed) {
  cfg.validate();
  if (n < 2) throw DomainError("generate_two_gaussians: n must be at least 2");

  Rng rng = make_rng(seed, 0, "two-gaussians");
  std::bernoulli_distribution positive(cfg.class_prior);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd x(n, cfg.d);
  std::vector<std::string> labels(static_cast<std::size_t>(n));
  const double offset = cfg.mean_separation / 2.0;
  for (int i = 0; i < n; ++i) {
    const bool pos = positive(rng);
    labels[static_cast<std::size_t>(i)] = pos ? kGaussianClasses.second : kGaussianClasses.first;
    for (int k = 0; k < cfg.d; ++k) x(i, k) = normal(rng);
    x(i, 0) += pos ? offset : -offset;
  }

  Dataset ds;
  ds.name = "gaussians";
  ds.features = FeatureMatrix(std::move(x));
  ds.labels = std::move(labels);
  ds.classes = kGaussianClasses;
  for (int k = 0; k < cfg.d; ++k) ds.feature_names.push_back("x" + std::to_string(k + 1));
  return ds;
}

Fig1Example generate_fig1_example(std::pair<double, double> labeled_positions,
                                  std::pair<std::string, std::string> labeled_classes,
                                  const std::vector<double>& unlabeled_positions) {
  if (labeled_classes.first == labeled_classes.second)
    throw DomainError("generate_fig1_example: the two labeled objects need distinct classes");

  Fig1Example ex;
  Eigen::MatrixXd xl(2, 1);
  xl << labeled_positions.first, labeled_positions.second;
  ex.labeled.name = "fig1";
  ex.labeled.features = FeatureMatrix(std::move(xl));
  ex.labeled.labels = {labeled_classes.first, labeled_classes.second};
  ex.labeled.classes = {labeled_classes.first, labeled_classes.second};
  ex.labeled.feature_names = {"x"};

  Eigen::MatrixXd xu(static_cast<Eigen::Index>(unlabeled_positions.size()), 1);
  for (std::size_t j = 0; j < unlabeled_positions.size(); ++j)
    xu(static_cast<Eigen::Index>(j), 0) = unlabeled_positions[j];
  ex.unlabeled = FeatureMatrix(std::move(xu));
  return ex;
}

namespace {

template <typename T>
T parse_query_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("dataset reference: parameter '" + key + "' has invalid value '" + value + "'");
  return out;
}

}  // namespace

Dataset load_dataset_ref(const std::string& ref, const std::string& label_column,
                         const std::optional<ClassMap>& classes) {
  constexpr std::string_view kBuiltin = "builtin:";
  if (ref.rfind(kBuiltin, 0) != 0) return load_csv(ref, label_column, classes);

  const std::string body = ref.substr(kBuiltin.size());
  const auto qpos = body.find('?');
  const std::string kind = body.substr(0, qpos);
  if (kind != "gaussians")
    throw ConfigError("unknown builtin dataset '" + kind + "' (available: gaussians)");

  GaussianConfig cfg;
  std::uint64_t seed = 1;
  if (qpos != std::string::npos) {
    std::string query = body.substr(qpos + 1);
    std::size_t start = 0;
    while (start <= query.size()) {
      const auto amp = query.find('&', start);
      const std::string item = query.substr(start, amp == std::string::npos ? std::string::npos : amp - start);
      if (!item.empty()) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
          throw ConfigError("dataset reference: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "n") cfg.n_per_draw = parse_query_number<int>(key, value);
        else if (key == "d") cfg.d = parse_query_number<int>(key, value);
        else if (key == "separation") cfg.mean_separation = parse_query_number<double>(key, value);
        else if (key == "prior") cfg.class_prior = parse_query_number<double>(key, value);
        else if (key == "seed") seed = parse_query_number<std::uint64_t>(key, value);
        else throw ConfigError("dataset reference: unknown parameter '" + key + "'");
      }
      if (amp == std::string::npos) break;
      start = amp + 1;
    }
  }
  return generate_two_gaussians(cfg, cfg.n_per_draw, seed);
}

}  // namespace selflearn
