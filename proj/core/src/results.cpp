#include "selflearn/results.hpp"

#include "selflearn/errors.hpp"

#include "text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace selflearn {

namespace {

auto row_key(const ResultRow& r) {
  return std::tie(r.dataset, r.classifier, r.repeat, r.size_role, r.size, r.measure);
}

bool row_less(const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); }

void check_field(const std::string& value, const char* field) {
  if (value.find_first_of(",\n\r") != std::string::npos)
    throw ConfigError(std::string("results: ") + field + " '" + value +
                      "' contains a comma or newline");
}

std::string format_value(const ResultRow& r) {
  if (r.value) return text::format_double(*r.value);
  return r.error_tag.empty() ? "NA" : "NA:" + r.error_tag;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataError::Kind::missing_file, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(DataError::Kind::missing_file, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw DataError(DataError::Kind::malformed, "write failed for '" + path.string() + "'");
}

enum class KeyField { dataset, classifier, repeat, size_role, size, measure };

KeyField parse_key_field(const std::string& name) {
  if (name == "dataset") return KeyField::dataset;
  if (name == "classifier") return KeyField::classifier;
  if (name == "repeat") return KeyField::repeat;
  if (name == "size_role") return KeyField::size_role;
  if (name == "size") return KeyField::size;
  if (name == "measure") return KeyField::measure;
  throw ConfigError("summarize: '" + name +
                    "' is not a key field (dataset, classifier, repeat, size_role, size, measure)");
}

// Numeric fields sort numerically, text fields lexicographically.
struct KeyValue {
  std::string text;
  double number = 0.0;
  bool numeric = false;

  friend bool operator<(const KeyValue& a, const KeyValue& b) {
    if (a.numeric && b.numeric) return a.number < b.number;
    return a.text < b.text;
  }
};

KeyValue key_value(const ResultRow& r, KeyField f) {
  switch (f) {
    case KeyField::dataset:
      return {r.dataset};
    case KeyField::classifier:
      return {r.classifier};
    case KeyField::repeat:
      return {std::to_string(r.repeat), static_cast<double>(r.repeat), true};
    case KeyField::size_role:
      return {std::string(to_string(r.size_role))};
    case KeyField::size:
      return {text::format_double(r.size), r.size, true};
    case KeyField::measure:
      return {r.measure};
  }
  return {};
}

}  // namespace

std::string_view to_string(SizeRole role) noexcept {
  return role == SizeRole::n_unlabeled ? "n_unlabeled" : "labeled_fraction";
}

SizeRole parse_size_role(std::string_view name) {
  if (name == "n_unlabeled") return SizeRole::n_unlabeled;
  if (name == "labeled_fraction") return SizeRole::labeled_fraction;
  throw ConfigError("unknown size role '" + std::string(name) + "'");
}

void ResultsTable::sort() {
  std::stable_sort(rows.begin(), rows.end(), row_less);
  std::stable_sort(fingerprints.begin(), fingerprints.end(),
                   [](const SplitFingerprint& a, const SplitFingerprint& b) {
                     return std::tie(a.repeat, a.size) < std::tie(b.repeat, b.size);
                   });
}

void ResultsTable::validate() const {
  std::vector<const ResultRow*> sorted;
  sorted.reserve(rows.size());
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const ResultRow* a, const ResultRow* b) { return row_less(*a, *b); });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (row_key(*sorted[i - 1]) == row_key(*sorted[i]))
      throw InvariantViolation("results: duplicate key (" + sorted[i]->dataset + ", " +
                               sorted[i]->classifier + ", repeat " +
                               std::to_string(sorted[i]->repeat) + ", size " +
                               text::format_double(sorted[i]->size) + ", " + sorted[i]->measure +
                               ")");
  }
  for (const auto& r : rows) {
    if (!r.value) continue;
    const double v = *r.value;
    const bool ok = r.measure == "Error" ? (v >= 0.0 && v <= 1.0)
                                         : (r.measure == "AverageLossTest" ? v >= 0.0 : std::isfinite(v));
    if (!ok)
      throw InvariantViolation("results: " + r.measure + " value " + text::format_double(v) +
                               " out of range for " + r.classifier + ", repeat " +
                               std::to_string(r.repeat));
  }
}

ResultsTable ResultsTable::filtered(const std::vector<std::string>& measures) const {
  ResultsTable out;
  out.fingerprints = fingerprints;
  for (const auto& r : rows)
    if (std::find(measures.begin(), measures.end(), r.measure) != measures.end())
      out.rows.push_back(r);
  return out;
}

std::uint64_t ResultsTable::fingerprint_digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& f : fingerprints) {
    for (int shift = 0; shift < 64; shift += 8) {
      h ^= (f.fingerprint >> shift) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string results_csv_string(const ResultsTable& table) {
  ResultsTable sorted = table;
  sorted.sort();
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : sorted.rows) {
    check_field(r.dataset, "dataset");
    check_field(r.classifier, "classifier");
    check_field(r.measure, "measure");
    out += r.dataset;
    out += ',';
    out += r.classifier;
    out += ',';
    out += std::to_string(r.repeat);
    out += ',';
    out += to_string(r.size_role);
    out += ',';
    out += text::format_double(r.size);
    out += ',';
    out += r.measure;
    out += ',';
    out += format_value(r);
    out += '\n';
  }
  return out;
}

void write_results_csv(const ResultsTable& table, const std::filesystem::path& path) {
  write_file(path, results_csv_string(table));
}

ResultsTable read_results_csv(const std::filesystem::path& path) {
  const std::string contents = read_file(path);
  std::istringstream in(contents);
  std::string line;
  const auto fail = [&](std::size_t line_no, const std::string& why) -> DataError {
    return DataError(DataError::Kind::malformed,
                     path.string() + ": line " + std::to_string(line_no) + ": " + why);
  };
  if (!std::getline(in, line) || text::trim(line) != kResultsHeader)
    throw fail(1, "expected header '" + std::string(kResultsHeader) + "'");

  ResultsTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != 7) throw fail(line_no, "expected 7 fields, found " + std::to_string(f.size()));
    ResultRow r;
    r.dataset = std::string(f[0]);
    r.classifier = std::string(f[1]);
    {
      const auto s = text::trim(f[2]);
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.repeat);
      if (ec != std::errc() || ptr != s.data() + s.size())
        throw fail(line_no, "repeat '" + std::string(s) + "' is not an integer");
    }
    try {
      r.size_role = parse_size_role(text::trim(f[3]));
    } catch (const ConfigError&) {
      throw fail(line_no, "unknown size_role '" + std::string(f[3]) + "'");
    }
    const auto size = text::parse_double(f[4]);
    if (!size) throw fail(line_no, "size '" + std::string(f[4]) + "' is not a number");
    r.size = *size;
    r.measure = std::string(f[5]);
    const auto v = text::trim(f[6]);
    if (v == "NA") {
    } else if (v.rfind("NA:", 0) == 0) {
      r.error_tag = std::string(v.substr(3));
    } else {
      const auto value = text::parse_double(v);
      if (!value) throw fail(line_no, "value '" + std::string(v) + "' is not a number or NA");
      r.value = *value;
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

SummaryTable summarize(const ResultsTable& table, const std::vector<std::string>& group_keys) {
  if (table.rows.empty()) throw DomainError("summarize: empty results table");
  std::vector<KeyField> fields;
  for (const auto& k : group_keys) fields.push_back(parse_key_field(k));

  struct Accumulator {
    std::vector<double> values;
  };
  std::map<std::vector<KeyValue>, Accumulator> groups;
  for (const auto& r : table.rows) {
    std::vector<KeyValue> key;
    key.reserve(fields.size());
    for (KeyField f : fields) key.push_back(key_value(r, f));
    auto& acc = groups[std::move(key)];
    if (r.value) acc.values.push_back(*r.value);
  }

  SummaryTable out;
  out.group_keys = group_keys;
  for (const auto& [key, acc] : groups) {
    SummaryRow row;
    for (const auto& kv : key) row.key.push_back(kv.text);
    row.count = acc.values.size();
    if (row.count > 0) {
      double sum = 0.0;
      for (double v : acc.values) sum += v;
      const double mean = sum / static_cast<double>(row.count);
      row.mean = mean;
      if (row.count > 1) {
        double ss = 0.0;
        for (double v : acc.values) ss += (v - mean) * (v - mean);
        row.std = std::sqrt(ss / static_cast<double>(row.count - 1));
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string summary_csv_string(const SummaryTable& summary) {
  std::string out;
  for (const auto& k : summary.group_keys) out += k + ',';
  out += "mean,std,count\n";
  for (const auto& r : summary.rows) {
    for (const auto& k : r.key) out += k + ',';
    out += r.mean ? text::format_double(*r.mean) : "NA";
    out += ',';
    out += text::format_double(r.std);
    out += ',';
    out += std::to_string(r.count);
    out += '\n';
  }
  return out;
}

void write_summary_csv(const SummaryTable& summary, const std::filesystem::path& path) {
  write_file(path, summary_csv_string(summary));
}

}  // namespace selflearn
