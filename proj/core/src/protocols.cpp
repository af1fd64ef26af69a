#include "selflearn/protocols.hpp"

#include "selflearn/errors.hpp"
#include "selflearn/parallel.hpp"
#include "selflearn/rng.hpp"
#include "selflearn/split.hpp"

#include "text.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace selflearn {

namespace {

template <typename T>
bool strictly_increasing(const std::vector<T>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<T>()) == v.end();
}

bool wanted(const std::vector<Measure>& measures, Measure m) {
  return std::find(measures.begin(), measures.end(), m) != measures.end();
}

[[noreturn]] void rethrow_for_repeat(const Error& e, int repeat) {
  throw Error(e.category(), "repeat " + std::to_string(repeat) + ": " + e.what());
}

void append_rows(const CurveConfig& cfg, const ExperimentSplit& split,
                 const std::vector<ClassifierSpec>& roster, int repeat, SizeRole role,
                 double size, std::vector<ResultRow>& out) {
  for (Evaluation& ev : evaluate_classifiers(split, roster, kAllMeasures)) {
    if (!wanted(cfg.measures, ev.measure)) continue;
    ResultRow row;
    row.dataset = split.dataset;
    row.classifier = std::string(to_string(ev.classifier));
    row.repeat = repeat;
    row.size_role = role;
    row.size = size;
    row.measure = std::string(to_string(ev.measure));
    row.value = ev.value;
    row.error_tag = std::move(ev.error_tag);
    out.push_back(std::move(row));
  }
}

struct RepeatOutput {
  std::vector<ResultRow> rows;
  std::vector<SplitFingerprint> fingerprints;
};

ResultsTable collect(std::vector<RepeatOutput>& outputs) {
  ResultsTable table;
  for (auto& o : outputs) {
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(table.rows));
    std::move(o.fingerprints.begin(), o.fingerprints.end(), std::back_inserter(table.fingerprints));
  }
  table.sort();
  table.validate();
  return table;
}

}  // namespace

void CurveConfig::validate_unlabeled(Eigen::Index dims) const {
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (u_grid.empty()) throw ConfigError("u_grid must not be empty");
  if (!strictly_increasing(u_grid)) throw ConfigError("u_grid must be strictly increasing");
  if (test_size < 1) throw ConfigError("test_size must be at least 1");
  if (classifiers.empty()) throw ConfigError("classifier roster must not be empty");
  if (measures.empty()) throw ConfigError("measures must not be empty");
  if (l_fixed < 2) throw ConfigError("l_fixed must be at least 2");
  ridge.validate();
  bcd.validate();
  if (ridge.lambda == 0.0 && static_cast<Eigen::Index>(l_fixed) <= dims)
    throw ConfigError("l_fixed (" + std::to_string(l_fixed) +
                      ") must exceed the dimensionality (" + std::to_string(dims) +
                      ") when lambda = 0");
}

void CurveConfig::validate_fraction() const {
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (fraction_grid.empty()) throw ConfigError("fraction_grid must not be empty");
  if (!strictly_increasing(fraction_grid))
    throw ConfigError("fraction_grid must be strictly increasing");
  for (double f : fraction_grid)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("fractions must lie in (0, 1]");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("test_fraction must lie in (0, 1)");
  if (classifiers.empty()) throw ConfigError("classifier roster must not be empty");
  if (measures.empty()) throw ConfigError("measures must not be empty");
  ridge.validate();
  bcd.validate();
}

std::vector<ClassifierSpec> CurveConfig::roster() const {
  std::vector<ClassifierSpec> out;
  for (ClassifierKind k : classifiers) out.push_back({k, ridge, bcd});
  return out;
}

ResultsTable run_unlabeled_curve(const CurveConfig& cfg) {
  return run_unlabeled_curve(cfg, load_dataset_ref(cfg.dataset, cfg.label_column, cfg.classes));
}

ResultsTable run_unlabeled_curve(const CurveConfig& cfg, const Dataset& ds) {
  cfg.validate_unlabeled(ds.dims());
  const auto roster = cfg.roster();
  const std::size_t u_max = cfg.u_grid.back();

  std::vector<RepeatOutput> outputs(static_cast<std::size_t>(cfg.repeats));
  parallel_for(outputs.size(), cfg.jobs, [&](std::size_t r) {
    const int repeat = static_cast<int>(r);
    try {
      const RowAssignment drawn =
          draw_rows(ds, cfg.l_fixed, u_max, cfg.test_size,
                    derive_seed(cfg.master_seed, r, "unlabeled-curve"));
      std::vector<std::size_t> stats = drawn.labeled;
      stats.insert(stats.end(), drawn.unlabeled.begin(), drawn.unlabeled.end());
      for (std::size_t u : cfg.u_grid) {
        RowAssignment rows{drawn.labeled,
                           {drawn.unlabeled.begin(),
                            drawn.unlabeled.begin() + static_cast<std::ptrdiff_t>(u)},
                           drawn.test};
        const ExperimentSplit split = materialize_split(ds, rows, cfg.encoding, cfg.standardize, stats);
        const auto size = static_cast<double>(u);
        outputs[r].fingerprints.push_back({repeat, size, split.fingerprint()});
        append_rows(cfg, split, roster, repeat, SizeRole::n_unlabeled, size, outputs[r].rows);
      }
    } catch (const Error& e) {
      rethrow_for_repeat(e, repeat);
    }
  });
  return collect(outputs);
}

ResultsTable run_fraction_curve(const CurveConfig& cfg) {
  return run_fraction_curve(cfg, load_dataset_ref(cfg.dataset, cfg.label_column, cfg.classes));
}

ResultsTable run_fraction_curve(const CurveConfig& cfg, const Dataset& ds) {
  cfg.validate_fraction();
  const auto roster = cfg.roster();
  const auto n = static_cast<std::size_t>(ds.rows());
  const auto t = static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(n)));
  if (t >= n) throw DataError(DataError::Kind::insufficient_rows, "test fraction leaves no training rows");
  const std::size_t rest = n - t;
  std::vector<std::size_t> labeled_counts;
  for (double f : cfg.fraction_grid) labeled_counts.push_back(labeled_count(rest, f));
  if (cfg.ridge.lambda == 0.0 && static_cast<Eigen::Index>(labeled_counts.front()) <= ds.dims())
    throw ConfigError("smallest labeled fraction gives " + std::to_string(labeled_counts.front()) +
                      " labeled objects, not more than the dimensionality (" +
                      std::to_string(ds.dims()) + ") required at lambda = 0");

  std::vector<RepeatOutput> outputs(static_cast<std::size_t>(cfg.repeats));
  parallel_for(outputs.size(), cfg.jobs, [&](std::size_t r) {
    const int repeat = static_cast<int>(r);
    try {
      const FractionDraw draw =
          draw_fraction_rows(ds, cfg.test_fraction, labeled_counts.front(),
                             derive_seed(cfg.master_seed, r, "fraction-curve"));
      for (std::size_t g = 0; g < cfg.fraction_grid.size(); ++g) {
        const auto l = static_cast<std::ptrdiff_t>(labeled_counts[g]);
        RowAssignment rows{{draw.rest.begin(), draw.rest.begin() + l},
                           {draw.rest.begin() + l, draw.rest.end()},
                           draw.test};
        const ExperimentSplit split =
            materialize_split(ds, rows, cfg.encoding, cfg.standardize, draw.rest);
        const double size = cfg.fraction_grid[g];
        outputs[r].fingerprints.push_back({repeat, size, split.fingerprint()});
        append_rows(cfg, split, roster, repeat, SizeRole::labeled_fraction, size, outputs[r].rows);
      }
    } catch (const Error& e) {
      rethrow_for_repeat(e, repeat);
    }
  });
  return collect(outputs);
}

void SeedSweepConfig::validate() const {
  gaussian.validate();
  if (seeds.empty()) throw ConfigError("seed sweep: seed list must not be empty");
  if (n_labeled < 2) throw ConfigError("seed sweep: n_labeled must be at least 2");
  if (n_test < 1) throw ConfigError("seed sweep: n_test must be at least 1");
  ridge.validate();
  bcd.validate();
}

std::vector<SeedSweepRow> run_seed_sweep(const SeedSweepConfig& cfg) {
  cfg.validate();
  const std::vector<ClassifierSpec> roster{
      {ClassifierKind::supervised, cfg.ridge, cfg.bcd},
      {ClassifierKind::self_learning_soft, cfg.ridge, cfg.bcd},
      {ClassifierKind::self_learning_hard, cfg.ridge, cfg.bcd},
  };
  const int n = static_cast<int>(cfg.n_labeled + cfg.n_unlabeled + cfg.n_test);

  std::vector<std::vector<SeedSweepRow>> per_seed(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
    const std::uint64_t seed = cfg.seeds[i];
    try {
      const Dataset ds = generate_two_gaussians(cfg.gaussian, n, seed);
      const ExperimentSplit split =
          make_split(ds, cfg.n_labeled, cfg.n_unlabeled, cfg.n_test, cfg.encoding, cfg.standardize,
                     derive_seed(seed, 0, "seed-sweep"));
      for (const ClassifierSpec& spec : roster) {
        SeedSweepRow row;
        row.position = i;
        row.seed = seed;
        row.classifier = std::string(to_string(spec.kind));
        try {
          const ClassifierFit fit = fit_classifier(spec, split);
          const EncodedTargets pred = predict(fit.weights, split.X_test, split.encoding);
          row.error = error_rate(pred, split.y_test);
          row.single_class = (pred.values().array() == pred[0]).all();
        } catch (const Error& e) {
          row.error_tag = error_tag(e);
        }
        per_seed[i].push_back(std::move(row));
      }
    } catch (const Error& e) {
      throw Error(e.category(), "seed " + std::to_string(seed) + ": " + e.what());
    }
  });

  std::vector<SeedSweepRow> rows;
  for (auto& v : per_seed) std::move(v.begin(), v.end(), std::back_inserter(rows));
  return rows;
}

std::string seed_sweep_csv_string(const std::vector<SeedSweepRow>& rows) {
  std::string out = "position,seed,classifier,error,single_class\n";
  for (const auto& r : rows) {
    out += std::to_string(r.position) + ',' + std::to_string(r.seed) + ',' + r.classifier + ',';
    out += r.error ? text::format_double(*r.error) : (r.error_tag.empty() ? "NA" : "NA:" + r.error_tag);
    out += ',';
    out += r.single_class ? "true" : "false";
    out += '\n';
  }
  return out;
}

void write_seed_sweep_csv(const std::vector<SeedSweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(DataError::Kind::missing_file, "cannot write '" + path.string() + "'");
  out << seed_sweep_csv_string(rows);
}

std::vector<MinimaReport> run_minima_experiment(const MinimaExperimentConfig& cfg) {
  return run_minima_experiment(cfg, load_dataset_ref(cfg.dataset, cfg.label_column, cfg.classes));
}

std::vector<MinimaReport> run_minima_experiment(const MinimaExperimentConfig& cfg,
                                                const Dataset& ds) {
  if (cfg.variants.empty()) throw ConfigError("minima: no variants requested");
  const ExperimentSplit split = make_split(ds, cfg.n_labeled, cfg.n_unlabeled, 0, cfg.encoding,
                                           cfg.standardize, cfg.split_seed);
  std::vector<MinimaReport> reports;
  for (Variant v : cfg.variants)
    reports.push_back(enumerate_local_minima(v, split.X_lab, split.y_lab, split.X_unl,
                                             split.encoding, cfg.bcd, cfg.minima));
  return reports;
}

std::string minima_reports_json(const std::vector<MinimaReport>& reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(nlohmann::ordered_json::parse(to_json(r, -1)));
  return arr.dump(2) + "\n";
}

}  // namespace selflearn
