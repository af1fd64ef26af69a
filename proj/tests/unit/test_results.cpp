#include "selflearn/errors.hpp"
#include "selflearn/results.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

using namespace selflearn;
namespace fs = std::filesystem;

namespace {

ResultRow row(std::string classifier, int repeat, double size, std::string measure,
              std::optional<double> value, SizeRole role = SizeRole::n_unlabeled) {
  ResultRow r;
  r.dataset = "toy";
  r.classifier = std::move(classifier);
  r.repeat = repeat;
  r.size_role = role;
  r.size = size;
  r.measure = std::move(measure);
  r.value = value;
  if (!value) r.error_tag = "rank_deficient";
  return r;
}

fs::path temp_file(const std::string& stem) {
  return fs::temp_directory_path() / (stem + "_" + std::to_string(std::random_device{}()) + ".csv");
}

}  // namespace

TEST_CASE("results CSV") {
  ResultsTable t;
  t.rows = {row("soft", 1, 8, "Error", 0.25), row("hard", 0, 2, "AverageLossTest", 1.0 / 3.0),
            row("hard", 0, 2, "Error", std::nullopt)};
  const std::string csv = results_csv_string(t);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "dataset,classifier,repeat,size_role,size,measure,value");
  CHECK(csv.find("toy,hard,0,n_unlabeled,2,AverageLossTest,0.33333333333333331\n") !=
        std::string::npos);
  CHECK(csv.find("NA:rank_deficient") != std::string::npos);
  // Sorted by key: hard rows first.
  CHECK(csv.find("toy,hard") < csv.find("toy,soft"));

  const fs::path p = temp_file("results");
  write_results_csv(t, p);
  ResultsTable back = read_results_csv(p);
  ResultsTable sorted = t;
  sorted.sort();
  CHECK(back == sorted);

  write_results_csv(t, p);
  std::ifstream again(p);
  std::stringstream ss;
  ss << again.rdbuf();
  CHECK(ss.str() == csv);
  fs::remove(p);
}

TEST_CASE("results CSV rejects malformed input") {
  const fs::path p = temp_file("bad");
  std::ofstream(p) << "dataset,classifier,repeat,size_role,size,measure,value\n"
                   << "toy,soft,x,n_unlabeled,2,Error,0.1\n";
  try {
    read_results_csv(p);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::ofstream(p) << "wrong,header\n";
  CHECK_THROWS_AS(read_results_csv(p), DataError);
  fs::remove(p);
}

TEST_CASE("table validation") {
  ResultsTable t;
  t.rows = {row("soft", 0, 2, "Error", 0.1), row("soft", 0, 2, "Error", 0.2)};
  CHECK_THROWS_AS(t.validate(), InvariantViolation);
  t.rows = {row("soft", 0, 2, "Error", 1.5)};
  CHECK_THROWS_AS(t.validate(), InvariantViolation);
  t.rows = {row("soft", 0, 2, "AverageLossTest", -0.1)};
  CHECK_THROWS_AS(t.validate(), InvariantViolation);
  t.rows = {row("soft", 0, 2, "Error", std::nullopt)};
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("summarize by hand") {
  ResultsTable one;
  one.rows = {row("soft", 0, 2, "Error", 0.3)};
  const SummaryTable s1 = summarize(one, {"classifier"});
  REQUIRE(s1.rows.size() == 1);
  CHECK(*s1.rows[0].mean == doctest::Approx(0.3));
  CHECK(s1.rows[0].std == 0.0);
  CHECK(s1.rows[0].count == 1);

  ResultsTable two;
  two.rows = {row("soft", 0, 2, "Error", 0.0), row("soft", 1, 2, "Error", 1.0)};
  const SummaryTable s2 = summarize(two, {"classifier", "size"});
  REQUIRE(s2.rows.size() == 1);
  CHECK(*s2.rows[0].mean == 0.5);
  CHECK(s2.rows[0].std == doctest::Approx(std::sqrt(0.5)));
  CHECK(summary_csv_string(s2) ==
        "classifier,size,mean,std,count\nsoft,2,0.5,0.70710678118654757,2\n");

  CHECK_THROWS_AS(summarize(two, {"colour"}), ConfigError);
  CHECK_THROWS_AS(summarize(ResultsTable{}, {"classifier"}), DomainError);

  // Failed fits are excluded from the statistics.
  two.rows.push_back(row("soft", 2, 2, "Error", std::nullopt));
  CHECK(summarize(two, {"classifier"}).rows[0].count == 2);
}

TEST_CASE("summarize matches a full-scan aggregation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const char* classifiers[] = {"supervised", "soft", "hard"};
  const double sizes[] = {0, 2, 32, 128};
  for (int trial = 0; trial < 10; ++trial) {
    ResultsTable t;
    const int repeats = 1 + trial;
    for (const char* c : classifiers)
      for (double s : sizes)
        for (int r = 0; r < repeats; ++r) t.rows.push_back(row(c, r, s, "Error", U(rng)));
    const SummaryTable summary = summarize(t, {"classifier", "size"});
    CHECK(summary.rows.size() == 12);
    for (const SummaryRow& sr : summary.rows) {
      oracle::Vec values;
      for (const ResultRow& r : t.rows) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", r.size);
        if (r.classifier == sr.key[0] && buf == sr.key[1]) values.push_back(*r.value);
      }
      const auto [mean, sd] = oracle::mean_std(values);
      CHECK(sr.count == values.size());
      CHECK(*sr.mean == doctest::Approx(mean).epsilon(1e-12));
      CHECK(sr.std == doctest::Approx(sd).epsilon(1e-10));
    }
  }
}

TEST_CASE("numeric keys sort numerically") {
  ResultsTable t;
  t.rows = {row("soft", 0, 128, "Error", 0.1), row("soft", 0, 8, "Error", 0.2)};
  const SummaryTable s = summarize(t, {"size"});
  CHECK(s.rows[0].key[0] == "8");
  CHECK(s.rows[1].key[0] == "128");
}
