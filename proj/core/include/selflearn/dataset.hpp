#pragma once

#include "selflearn/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace selflearn {

/// Raw two-class data: features without an intercept column plus one class
/// symbol per row. At most two distinct symbols appear and every symbol is
/// one of `classes` (a single-class dataset is representable; splitting it
/// fails).
struct Dataset {
  std::string name;
  FeatureMatrix features;
  std::vector<std::string> labels;
  ClassMap classes;
  std::vector<std::string> feature_names;
  std::string label_name = "class";

  Eigen::Index rows() const noexcept { return features.rows(); }
  Eigen::Index dims() const noexcept { return features.cols(); }

  /// Throws ShapeError / EncodingError when the invariants above fail.
  void validate() const;
  /// Class codes of all rows.
  EncodedTargets encoded(const LabelEncoding& encoding) const;
};

/// Two unit-covariance Gaussian classes centered at -/+ (separation/2, 0, ...).
/// The class encoded m is "neg", the class encoded n is "pos", and
/// class_prior is P(pos). The Bayes boundary is the hyperplane x1 = 0.
struct GaussianConfig {
  int d = 2;
  double mean_separation = 2.0;
  double class_prior = 0.5;
  /// Row count used when the dataset is generated from a `builtin:` reference.
  int n_per_draw = 2000;

  void validate() const;
};

inline const ClassMap kGaussianClasses{"neg", "pos"};

/// Deterministic in (cfg, n, seed). Throws DomainError for n < 2 or a prior
/// outside (0, 1).
Dataset generate_two_gaussians(const GaussianConfig& cfg, int n, std::uint64_t seed);

struct Fig1Example {
  Dataset labeled;
  FeatureMatrix unlabeled;
};

/// One-dimensional first-step example: two labeled objects and a list of
/// unlabeled positions. The first labeled class is encoded m.
Fig1Example generate_fig1_example(std::pair<double, double> labeled_positions = {-1.0, 1.0},
                                  std::pair<std::string, std::string> labeled_classes = {"neg", "pos"},
                                  const std::vector<double>& unlabeled_positions = {-1.0, 4.0});

/// Reads a comma-separated file with a header row. Every column except
/// `label_column` must be numeric. Without `classes`, the two symbols are
/// ordered lexicographically (the first is encoded m).
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::optional<ClassMap>& classes = std::nullopt);

/// Writes features (17 significant digits) followed by the label column.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Resolves `builtin:gaussians?n=..&d=..&separation=..&prior=..&seed=..` or
/// a filesystem path (loaded with load_csv).
Dataset load_dataset_ref(const std::string& ref, const std::string& label_column = "class",
                         const std::optional<ClassMap>& classes = std::nullopt);

}  // namespace selflearn
