#include "selflearn/config.hpp"

#include "selflearn/errors.hpp"

#include "text.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#ifndef SELFLEARN_VERSION
#define SELFLEARN_VERSION "0.0.0"
#endif

namespace selflearn {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& v) {
  std::vector<std::string> parts;
  for (const T& x : v) {
    if constexpr (std::is_floating_point_v<T>) {
      parts.push_back(text::format_double(x));
    } else {
      parts.push_back(std::to_string(x));
    }
  }
  return join(parts);
}

// Typed access to one KeyValues map with key-naming errors.
class Reader {
 public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  template <typename T>
  void integer(const std::string& key, T& out) const {
    if (auto v = kv_.get(key)) out = parse_integer<T>(key, *v);
  }

  void real(const std::string& key, double& out) const {
    if (auto v = kv_.get(key)) out = parse_real(key, *v);
  }

  void boolean(const std::string& key, bool& out) const {
    if (auto v = kv_.get(key)) {
      if (*v == "true" || *v == "1" || *v == "yes") out = true;
      else if (*v == "false" || *v == "0" || *v == "no") out = false;
      else throw ConfigError("config key '" + key + "': expected true/false, got '" + *v + "'");
    }
  }

  void string(const std::string& key, std::string& out) const {
    if (auto v = kv_.get(key)) out = *v;
  }

  template <typename T>
  void integer_list(const std::string& key, std::vector<T>& out) const {
    if (auto v = kv_.get(key)) {
      out.clear();
      for (auto item : text::split(*v, ','))
        out.push_back(parse_integer<T>(key, std::string(text::trim(item))));
    }
  }

  void real_list(const std::string& key, std::vector<double>& out) const {
    if (auto v = kv_.get(key)) {
      out.clear();
      for (auto item : text::split(*v, ',')) out.push_back(parse_real(key, std::string(item)));
    }
  }

  template <typename F>
  void list(const std::string& key, F&& each) const {
    if (auto v = kv_.get(key)) {
      for (auto item : text::split(*v, ',')) {
        try {
          each(std::string(text::trim(item)));
        } catch (const ConfigError& e) {
          throw ConfigError("config key '" + key + "': " + e.what());
        }
      }
    }
  }

  void encoding(const std::string& key, LabelEncoding& out) const {
    if (auto v = kv_.get(key)) {
      std::vector<double> mn;
      real_list(key, mn);
      if (mn.size() != 2) throw ConfigError("config key '" + key + "': expected two codes m,n");
      try {
        out = LabelEncoding(mn[0], mn[1]);
      } catch (const Error& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
      }
    }
  }

  void classes(const std::string& key, std::optional<ClassMap>& out) const {
    if (auto v = kv_.get(key)) {
      const auto parts = text::split(*v, ',');
      if (parts.size() != 2)
        throw ConfigError("config key '" + key + "': expected two class symbols a,b");
      out = ClassMap{std::string(text::trim(parts[0])), std::string(text::trim(parts[1]))};
    }
  }

  void ridge(RidgeConfig& out) const {
    real("lambda", out.lambda);
    boolean("penalize_intercept", out.penalize_intercept);
  }

  void bcd(BcdConfig& out) const {
    integer("max_iterations", out.max_iterations);
    real("objective_tolerance", out.objective_tolerance);
  }

  template <typename T>
  static T parse_integer(const std::string& key, const std::string& raw) {
    const auto s = text::trim(raw);
    T out{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError("config key '" + key + "': expected an integer, got '" + raw + "'");
    return out;
  }

  static double parse_real(const std::string& key, const std::string& raw) {
    const auto v = text::parse_double(raw);
    if (!v) throw ConfigError("config key '" + key + "': expected a number, got '" + raw + "'");
    return *v;
  }

 private:
  const KeyValues& kv_;
};

std::string encoding_string(const LabelEncoding& e) {
  return text::format_double(e.m()) + "," + text::format_double(e.n());
}

void put_ridge_bcd(KeyValues& kv, const RidgeConfig& ridge, const BcdConfig& bcd) {
  kv.set("lambda", text::format_double(ridge.lambda));
  kv.set("penalize_intercept", ridge.penalize_intercept ? "true" : "false");
  kv.set("max_iterations", std::to_string(bcd.max_iterations));
  kv.set("objective_tolerance", text::format_double(bcd.objective_tolerance));
}

}  // namespace

KeyValues KeyValues::parse(std::string_view contents, std::string_view source) {
  KeyValues kv;
  std::size_t line_no = 0;
  for (auto raw : text::split(contents, '\n')) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key(text::trim(line.substr(0, eq)));
    if (key.empty())
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
    if (kv.contains(key))
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": duplicate key '" +
                        key + "'");
    kv.set(key, std::string(text::trim(line.substr(eq + 1))));
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void KeyValues::reject_unknown(const std::vector<std::string_view>& allowed,
                               std::string_view context) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown " + std::string(context) + " config key '" + key + "'");
  }
}

const std::vector<std::string_view>& curve_config_keys() {
  static const std::vector<std::string_view> keys{
      "dataset",      "label_column",  "classes",        "encoding",   "l_fixed",
      "u_grid",       "test_size",     "fraction_grid",  "test_fraction", "repeats",
      "master_seed",  "measures",      "standardize",    "classifiers", "lambda",
      "penalize_intercept", "max_iterations", "objective_tolerance"};
  return keys;
}

const std::vector<std::string_view>& seed_sweep_config_keys() {
  static const std::vector<std::string_view> keys{
      "d",        "separation", "prior",  "n_labeled",          "n_unlabeled",
      "n_test",   "seeds",      "encoding", "standardize",      "lambda",
      "penalize_intercept", "max_iterations", "objective_tolerance"};
  return keys;
}

const std::vector<std::string_view>& minima_config_keys() {
  static const std::vector<std::string_view> keys{
      "dataset",   "label_column", "classes",         "n_labeled",      "n_unlabeled",
      "split_seed", "encoding",    "standardize",     "lambda",         "penalize_intercept",
      "max_iterations", "objective_tolerance", "restarts", "seed",      "init",
      "dedup_objective", "dedup_weight", "fixed_point_tolerance", "variants"};
  return keys;
}

CurveConfig curve_config_from(const KeyValues& kv) {
  kv.reject_unknown(curve_config_keys(), "curve");
  CurveConfig cfg;
  Reader r(kv);
  r.string("dataset", cfg.dataset);
  r.string("label_column", cfg.label_column);
  r.classes("classes", cfg.classes);
  r.encoding("encoding", cfg.encoding);
  r.integer("l_fixed", cfg.l_fixed);
  r.integer_list("u_grid", cfg.u_grid);
  r.integer("test_size", cfg.test_size);
  r.real_list("fraction_grid", cfg.fraction_grid);
  r.real("test_fraction", cfg.test_fraction);
  r.integer("repeats", cfg.repeats);
  r.integer("master_seed", cfg.master_seed);
  if (kv.contains("measures")) {
    cfg.measures.clear();
    r.list("measures", [&](const std::string& s) { cfg.measures.push_back(parse_measure(s)); });
  }
  r.boolean("standardize", cfg.standardize);
  if (kv.contains("classifiers")) {
    cfg.classifiers.clear();
    r.list("classifiers",
           [&](const std::string& s) { cfg.classifiers.push_back(parse_classifier(s)); });
  }
  r.ridge(cfg.ridge);
  r.bcd(cfg.bcd);
  return cfg;
}

KeyValues to_key_values(const CurveConfig& cfg) {
  KeyValues kv;
  kv.set("dataset", cfg.dataset);
  kv.set("label_column", cfg.label_column);
  if (cfg.classes) kv.set("classes", cfg.classes->first + "," + cfg.classes->second);
  kv.set("encoding", encoding_string(cfg.encoding));
  kv.set("l_fixed", std::to_string(cfg.l_fixed));
  kv.set("u_grid", join_numbers(cfg.u_grid));
  kv.set("test_size", std::to_string(cfg.test_size));
  kv.set("fraction_grid", join_numbers(cfg.fraction_grid));
  kv.set("test_fraction", text::format_double(cfg.test_fraction));
  kv.set("repeats", std::to_string(cfg.repeats));
  kv.set("master_seed", std::to_string(cfg.master_seed));
  std::vector<std::string> measures;
  for (Measure m : cfg.measures) measures.emplace_back(to_string(m));
  kv.set("measures", join(measures));
  kv.set("standardize", cfg.standardize ? "true" : "false");
  std::vector<std::string> classifiers;
  for (ClassifierKind k : cfg.classifiers) classifiers.emplace_back(to_string(k));
  kv.set("classifiers", join(classifiers));
  put_ridge_bcd(kv, cfg.ridge, cfg.bcd);
  return kv;
}

SeedSweepConfig seed_sweep_config_from(const KeyValues& kv) {
  kv.reject_unknown(seed_sweep_config_keys(), "seed-sweep");
  SeedSweepConfig cfg;
  Reader r(kv);
  r.integer("d", cfg.gaussian.d);
  r.real("separation", cfg.gaussian.mean_separation);
  r.real("prior", cfg.gaussian.class_prior);
  r.integer("n_labeled", cfg.n_labeled);
  r.integer("n_unlabeled", cfg.n_unlabeled);
  r.integer("n_test", cfg.n_test);
  if (auto v = kv.get("seeds")) {
    try {
      cfg.seeds = parse_seed_list(*v);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config key 'seeds': ") + e.what());
    }
  }
  r.encoding("encoding", cfg.encoding);
  r.boolean("standardize", cfg.standardize);
  r.ridge(cfg.ridge);
  r.bcd(cfg.bcd);
  return cfg;
}

KeyValues to_key_values(const SeedSweepConfig& cfg) {
  KeyValues kv;
  kv.set("d", std::to_string(cfg.gaussian.d));
  kv.set("separation", text::format_double(cfg.gaussian.mean_separation));
  kv.set("prior", text::format_double(cfg.gaussian.class_prior));
  kv.set("n_labeled", std::to_string(cfg.n_labeled));
  kv.set("n_unlabeled", std::to_string(cfg.n_unlabeled));
  kv.set("n_test", std::to_string(cfg.n_test));
  kv.set("seeds", join_numbers(cfg.seeds));
  kv.set("encoding", encoding_string(cfg.encoding));
  kv.set("standardize", cfg.standardize ? "true" : "false");
  put_ridge_bcd(kv, cfg.ridge, cfg.bcd);
  return kv;
}

MinimaExperimentConfig minima_config_from(const KeyValues& kv) {
  kv.reject_unknown(minima_config_keys(), "minima");
  MinimaExperimentConfig cfg;
  Reader r(kv);
  r.string("dataset", cfg.dataset);
  r.string("label_column", cfg.label_column);
  r.classes("classes", cfg.classes);
  r.integer("n_labeled", cfg.n_labeled);
  r.integer("n_unlabeled", cfg.n_unlabeled);
  r.integer("split_seed", cfg.split_seed);
  r.encoding("encoding", cfg.encoding);
  r.boolean("standardize", cfg.standardize);
  r.ridge(cfg.bcd.ridge);
  r.bcd(cfg.bcd);
  r.integer("restarts", cfg.minima.n_restarts);
  r.integer("seed", cfg.minima.seed);
  if (auto v = kv.get("init")) {
    try {
      cfg.minima.init = parse_minima_init(*v);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config key 'init': ") + e.what());
    }
  }
  r.real("dedup_objective", cfg.minima.dedup.objective_relative);
  r.real("dedup_weight", cfg.minima.dedup.weight_distance);
  r.real("fixed_point_tolerance", cfg.minima.fixed_point_tolerance);
  if (kv.contains("variants")) {
    cfg.variants.clear();
    r.list("variants", [&](const std::string& s) { cfg.variants.push_back(parse_variant(s)); });
  }
  return cfg;
}

KeyValues to_key_values(const MinimaExperimentConfig& cfg) {
  KeyValues kv;
  kv.set("dataset", cfg.dataset);
  kv.set("label_column", cfg.label_column);
  if (cfg.classes) kv.set("classes", cfg.classes->first + "," + cfg.classes->second);
  kv.set("n_labeled", std::to_string(cfg.n_labeled));
  kv.set("n_unlabeled", std::to_string(cfg.n_unlabeled));
  kv.set("split_seed", std::to_string(cfg.split_seed));
  kv.set("encoding", encoding_string(cfg.encoding));
  kv.set("standardize", cfg.standardize ? "true" : "false");
  put_ridge_bcd(kv, cfg.bcd.ridge, cfg.bcd);
  kv.set("restarts", std::to_string(cfg.minima.n_restarts));
  kv.set("seed", std::to_string(cfg.minima.seed));
  kv.set("init", std::string(to_string(cfg.minima.init)));
  kv.set("dedup_objective", text::format_double(cfg.minima.dedup.objective_relative));
  kv.set("dedup_weight", text::format_double(cfg.minima.dedup.weight_distance));
  kv.set("fixed_point_tolerance", text::format_double(cfg.minima.fixed_point_tolerance));
  std::vector<std::string> variants;
  for (Variant v : cfg.variants) variants.emplace_back(to_string(v));
  kv.set("variants", join(variants));
  return kv;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view list) {
  std::vector<std::uint64_t> seeds;
  for (auto item : text::split(list, ',')) {
    item = text::trim(item);
    const auto dots = item.find("..");
    const auto parse = [&](std::string_view s) {
      s = text::trim(s);
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("invalid seed '" + std::string(s) + "'");
      return v;
    };
    if (dots == std::string_view::npos) {
      seeds.push_back(parse(item));
      continue;
    }
    const std::uint64_t lo = parse(item.substr(0, dots));
    const std::uint64_t hi = parse(item.substr(dots + 2));
    if (hi < lo) throw ConfigError("empty seed range '" + std::string(item) + "'");
    if (hi - lo > 1'000'000) throw ConfigError("seed range '" + std::string(item) + "' is too long");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::string_view library_version() noexcept { return SELFLEARN_VERSION; }

std::string provenance_json(std::string_view subcommand, const KeyValues& effective,
                            std::uint64_t seed, const std::vector<std::string>& outputs,
                            const std::map<std::string, std::string>& extra) {
  nlohmann::ordered_json j;
  j["tool"] = "selflearn";
  j["version"] = std::string(library_version());
  j["subcommand"] = std::string(subcommand);
  j["seed"] = seed;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : effective.entries()) config[k] = v;
  j["config"] = std::move(config);
  j["outputs"] = outputs;
  for (const auto& [k, v] : extra) j[k] = v;
  return j.dump(2) + "\n";
}

}  // namespace selflearn
