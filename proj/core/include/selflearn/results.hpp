#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selflearn {

enum class SizeRole { n_unlabeled, labeled_fraction };

std::string_view to_string(SizeRole role) noexcept;
SizeRole parse_size_role(std::string_view name);

/// One long-format record. A missing `value` marks a failed fit; the tag
/// says why.
struct ResultRow {
  std::string dataset;
  std::string classifier;
  int repeat = 0;
  SizeRole size_role = SizeRole::n_unlabeled;
  double size = 0.0;
  std::string measure;
  std::optional<double> value;
  std::string error_tag;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Split fingerprint shared by every row of one (repeat, size) group.
struct SplitFingerprint {
  int repeat = 0;
  double size = 0.0;
  std::uint64_t fingerprint = 0;

  friend bool operator==(const SplitFingerprint&, const SplitFingerprint&) = default;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  std::vector<SplitFingerprint> fingerprints;

  /// Orders rows by (dataset, classifier, repeat, size_role, size, measure)
  /// and fingerprints by (repeat, size).
  void sort();
  /// Throws InvariantViolation on a duplicate key or an out-of-range value
  /// (Error outside [0, 1], AverageLossTest negative).
  void validate() const;
  /// Keeps only rows whose measure is listed.
  ResultsTable filtered(const std::vector<std::string>& measures) const;
  /// FNV-1a over all fingerprints in order.
  std::uint64_t fingerprint_digest() const;

  friend bool operator==(const ResultsTable& a, const ResultsTable& b) { return a.rows == b.rows; }
};

inline constexpr std::string_view kResultsHeader =
    "dataset,classifier,repeat,size_role,size,measure,value";

/// Writes the table sorted by key; values with 17 significant digits and
/// failed fits as `NA:<tag>`.
void write_results_csv(const ResultsTable& table, const std::filesystem::path& path);
std::string results_csv_string(const ResultsTable& table);

/// Inverse of write_results_csv. Malformed input raises DataError naming
/// the line.
ResultsTable read_results_csv(const std::filesystem::path& path);

struct SummaryRow {
  std::vector<std::string> key;
  std::optional<double> mean;
  double std = 0.0;
  std::size_t count = 0;
};

struct SummaryTable {
  std::vector<std::string> group_keys;
  std::vector<SummaryRow> rows;
};

/// Mean, sample standard deviation (n - 1), and count of the non-missing
/// values per group. A single-value group reports std 0. `group_keys` must
/// be a subset of dataset, classifier, repeat, size_role, size, measure.
SummaryTable summarize(const ResultsTable& table, const std::vector<std::string>& group_keys);

/// `group keys...,mean,std,count`.
void write_summary_csv(const SummaryTable& summary, const std::filesystem::path& path);
std::string summary_csv_string(const SummaryTable& summary);

}  // namespace selflearn
