#pragma once

// Experiment protocols: learning curves over the number of unlabeled
// objects, learning curves over the labeled fraction, a sweep over the data
// generating seed, and the local-minima study on one seeded instance.

#include "selflearn/classifiers.hpp"
#include "selflearn/dataset.hpp"
#include "selflearn/results.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace selflearn {

struct CurveConfig {
  std::string dataset = "builtin:gaussians";
  std::string label_column = "class";
  std::optional<ClassMap> classes;
  LabelEncoding encoding{};

  // Unlabeled-count protocol.
  std::size_t l_fixed = 10;
  std::vector<std::size_t> u_grid{0, 2, 8, 32, 128, 512};
  std::size_t test_size = 1000;

  // Labeled-fraction protocol.
  std::vector<double> fraction_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double test_fraction = 0.2;

  int repeats = 250;
  std::uint64_t master_seed = 1;
  /// Measures written out; both are always computed.
  std::vector<Measure> measures = kAllMeasures;
  bool standardize = false;
  std::vector<ClassifierKind> classifiers{ClassifierKind::supervised,
                                          ClassifierKind::self_learning_soft,
                                          ClassifierKind::self_learning_hard,
                                          ClassifierKind::oracle};
  RidgeConfig ridge{};
  BcdConfig bcd{};
  /// Worker threads over repeats; output does not depend on it.
  std::size_t jobs = 1;

  /// Checks repeats, grid ordering, and (at lambda = 0) l_fixed > d.
  void validate_unlabeled(Eigen::Index dims) const;
  void validate_fraction() const;
  std::vector<ClassifierSpec> roster() const;
};

/// Per repeat r, one draw keyed by (master_seed, r) fixes the labeled block,
/// the test block, and an unlabeled pool of max(u_grid) rows; each grid
/// value U uses the first U pool rows, so unlabeled sets are nested.
/// Standardization statistics come from labeled + full pool.
ResultsTable run_unlabeled_curve(const CurveConfig& cfg);
ResultsTable run_unlabeled_curve(const CurveConfig& cfg, const Dataset& ds);

/// Per repeat, one test holdout of round(test_fraction N) rows and one
/// ordering of the remaining rows; fraction f labels the first
/// round(f * rest) of them and leaves the others unlabeled.
ResultsTable run_fraction_curve(const CurveConfig& cfg);
ResultsTable run_fraction_curve(const CurveConfig& cfg, const Dataset& ds);

struct SeedSweepConfig {
  GaussianConfig gaussian{};
  std::size_t n_labeled = 4;
  std::size_t n_unlabeled = 200;
  std::size_t n_test = 1000;
  LabelEncoding encoding{};
  bool standardize = false;
  RidgeConfig ridge{};
  BcdConfig bcd{};
  std::vector<std::uint64_t> seeds;
  std::size_t jobs = 1;

  void validate() const;
};

struct SeedSweepRow {
  /// Position of the seed in the input list.
  std::size_t position = 0;
  std::uint64_t seed = 0;
  std::string classifier;
  std::optional<double> error;
  /// Every test object received the same predicted class.
  bool single_class = false;
  std::string error_tag;

  friend bool operator==(const SeedSweepRow&, const SeedSweepRow&) = default;
};

/// For each seed: generates the dataset with that seed, splits it, fits
/// supervised / soft / hard, and records test error and the single-class
/// flag. Rows are ordered by list position, then classifier.
std::vector<SeedSweepRow> run_seed_sweep(const SeedSweepConfig& cfg);

/// `position,seed,classifier,error,single_class`.
std::string seed_sweep_csv_string(const std::vector<SeedSweepRow>& rows);
void write_seed_sweep_csv(const std::vector<SeedSweepRow>& rows, const std::filesystem::path& path);

struct MinimaExperimentConfig {
  std::string dataset = "builtin:gaussians?n=60";
  std::string label_column = "class";
  std::optional<ClassMap> classes;
  std::size_t n_labeled = 10;
  std::size_t n_unlabeled = 50;
  std::uint64_t split_seed = 1;
  LabelEncoding encoding{};
  bool standardize = false;
  BcdConfig bcd{};
  MinimaConfig minima{};
  std::vector<Variant> variants{Variant::soft_label, Variant::hard_label};
};

/// Splits the dataset into labeled / unlabeled blocks (no test block) and
/// enumerates the local minima of each requested variant.
std::vector<MinimaReport> run_minima_experiment(const MinimaExperimentConfig& cfg);
std::vector<MinimaReport> run_minima_experiment(const MinimaExperimentConfig& cfg,
                                                const Dataset& ds);

/// JSON array of reports.
std::string minima_reports_json(const std::vector<MinimaReport>& reports);

}  // namespace selflearn
