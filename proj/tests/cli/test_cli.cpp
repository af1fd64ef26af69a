// Drives the built `selflearn` binary through a shell.

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + SELFLEARN_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("selflearn_cli_" + std::to_string(std::random_device{}()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() { fs::remove_all(dir); }
  std::string q(const std::string& sub) const { return "'" + (dir / sub).string() + "'"; }
};

}  // namespace

TEST_CASE("fit prints the model as JSON") {
  const Run r = run("fit --data builtin:gaussians --classifier soft");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("weights"));
  CHECK(j.contains("iterations"));
  CHECK(j.contains("objective"));
  CHECK(j["weights"].size() == 3);

  CHECK(run("fit --seed 7").out == run("fit --seed 7").out);
  CHECK(run("fit --seed 7").out != run("fit --seed 8").out);
}

TEST_CASE("exit codes") {
  CHECK(run("fit --classifier bogus").code == 2);
  CHECK(run("fit --no-such-flag").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("fit --data /nonexistent/data.csv").code == 3);
  CHECK(run("fit --classifier supervised --n-labeled 2").code == 4);
  CHECK(run("fit --lambda -1").code == 2);
}

TEST_CASE("every subcommand documents its flags") {
  const char* subs[] = {"fit", "curve-unlabeled", "curve-fraction", "minima",
                        "example-1d", "seed-sweep", "summarize"};
  const Run top = run("--help");
  CHECK(top.code == 0);
  for (const char* s : subs) {
    CHECK(top.out.find(s) != std::string::npos);
    const Run h = run(std::string(s) + " --help");
    CHECK(h.code == 0);
    CHECK(h.out.find("Options:") != std::string::npos);
  }
  const Run cu = run("curve-unlabeled --help");
  for (const char* flag : {"--config", "--out-dir", "--jobs", "--seed", "--measures", "--repeats",
                           "--u-grid", "--set"})
    CHECK(cu.out.find(flag) != std::string::npos);
  CHECK(run("minima --help").out.find("--restarts") != std::string::npos);
}

TEST_CASE("example-1d") {
  Scratch s;
  const auto report = [&](const std::string& unl) {
    const Run r = run("example-1d --unlabeled " + unl + " --out-dir " + s.q("ex"));
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
  };
  const auto inside = report("-1,0.5");
  CHECK(std::abs(inside["soft"]["shift"].get<double>()) < 1e-9);
  const auto outside = report("-1,4");
  CHECK(outside["soft"]["shift"].get<double>() > 0.0);
  CHECK(outside["pseudo_targets"][1]["soft_target"] == 1.0);
  const auto none = report("''");
  CHECK(none["soft"]["weights"] == none["supervised"]["weights"]);
  CHECK(none["hard"]["weights"] == none["supervised"]["weights"]);
  CHECK(none["pseudo_targets"].empty());

  const std::string csv = slurp(s.dir / "ex" / "example_1d.csv");
  CHECK(csv.rfind("position,role,classifier,decision_value\n", 0) == 0);
  CHECK(run("example-1d --unlabeled 1,abc --out-dir " + s.q("ex")).code == 2);
}

TEST_CASE("curve-unlabeled measure switch keeps the keys") {
  Scratch s;
  const std::string base = "curve-unlabeled --repeats 3 --u-grid 0,4,16 --test-size 200 --seed 5 ";
  REQUIRE(run(base + "--measures Error --out-dir " + s.q("e")).code == 0);
  REQUIRE(run(base + "--measures AverageLossTest --out-dir " + s.q("l")).code == 0);
  const auto keys = [](const std::string& csv, std::string* measures) {
    std::istringstream in(csv);
    std::string line, out;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::size_t cut = 0;
      for (int i = 0; i < 5; ++i) cut = line.find(',', cut) + 1;
      // dataset,classifier,repeat,size_role,size
      out += line.substr(0, cut) + "\n";
      *measures += line.substr(cut, line.find(',', cut) - cut) + ";";
    }
    return out;
  };
  std::string me, ml;
  const std::string ke = keys(slurp(s.dir / "e" / "curve_unlabeled.csv"), &me);
  const std::string kl = keys(slurp(s.dir / "l" / "curve_unlabeled.csv"), &ml);
  CHECK(ke == kl);
  CHECK(me.find("AverageLossTest") == std::string::npos);
  CHECK(ml.find("Error") == std::string::npos);

  const auto pe = nlohmann::json::parse(slurp(s.dir / "e" / "curve_unlabeled.provenance.json"));
  const auto pl = nlohmann::json::parse(slurp(s.dir / "l" / "curve_unlabeled.provenance.json"));
  CHECK(pe["split_fingerprint_digest"] == pl["split_fingerprint_digest"]);
  CHECK(pe["config"]["measures"] == "Error");
}

TEST_CASE("config file, flag precedence, and determinism") {
  Scratch s;
  std::ofstream(s.dir / "c.cfg") << "# small run\nrepeats = 2\nu_grid = 0,4\ntest_size = 100\n";
  REQUIRE(run(s.q("c.cfg") + " --out-dir " + s.q("a")).code == 2);  // needs a subcommand
  REQUIRE(run("curve-unlabeled " + s.q("c.cfg") + " --repeats 3 --out-dir " + s.q("a")).code == 0);
  const auto prov = nlohmann::json::parse(slurp(s.dir / "a" / "curve_unlabeled.provenance.json"));
  CHECK(prov["config"]["repeats"] == "3");
  CHECK(prov["config"]["u_grid"] == "0,4");

  REQUIRE(run("curve-unlabeled --config " + s.q("c.cfg") + " --repeats 3 --jobs 4 --out-dir " +
              s.q("b"))
              .code == 0);
  for (const char* f : {"curve_unlabeled.csv", "curve_unlabeled.provenance.json"})
    CHECK(slurp(s.dir / "a" / f) == slurp(s.dir / "b" / f));

  std::ofstream(s.dir / "bad.cfg") << "repeats = 2\nfavourite = 3\n";
  CHECK(run("curve-unlabeled " + s.q("bad.cfg") + " --out-dir " + s.q("x")).code == 2);
}

TEST_CASE("minima and seed-sweep are reproducible") {
  Scratch s;
  REQUIRE(run("minima --restarts 50 --seed 1 --out-dir " + s.q("m1")).code == 0);
  REQUIRE(run("minima --restarts 50 --seed 1 --jobs 8 --out-dir " + s.q("m2")).code == 0);
  CHECK(slurp(s.dir / "m1" / "minima.json") == slurp(s.dir / "m2" / "minima.json"));
  const auto reports = nlohmann::json::parse(slurp(s.dir / "m1" / "minima.json"));
  CHECK(reports.size() == 2);

  REQUIRE(run("seed-sweep --seeds 1..5 --out-dir " + s.q("s1")).code == 0);
  REQUIRE(run("seed-sweep --seeds 1..5 --jobs 3 --out-dir " + s.q("s2")).code == 0);
  CHECK(slurp(s.dir / "s1" / "seed_sweep.csv") == slurp(s.dir / "s2" / "seed_sweep.csv"));
}

TEST_CASE("summarize a hand-written table") {
  Scratch s;
  std::ofstream(s.dir / "r.csv") << "dataset,classifier,repeat,size_role,size,measure,value\n"
                                    "toy,soft,0,n_unlabeled,8,Error,0.25\n"
                                    "toy,soft,1,n_unlabeled,8,Error,0.75\n";
  const Run r = run("summarize " + s.q("r.csv") + " --by classifier,size --out-dir " + s.q("out"));
  REQUIRE(r.code == 0);
  // mean 0.5, std sqrt(0.125)
  CHECK(slurp(s.dir / "out" / "summary.csv") ==
        "classifier,size,mean,std,count\nsoft,8,0.5,0.35355339059327379,2\n");
  CHECK(run("summarize " + s.q("r.csv") + " --output ../escape.csv --out-dir " + s.q("out")).code == 2);
  CHECK(!fs::exists(s.dir / "escape.csv"));
  CHECK(run("summarize " + s.q("r.csv") + " --by colour --out-dir " + s.q("out")).code == 2);
}

TEST_CASE("output directory default comes from the environment") {
  Scratch s;
  const Run r = run("example-1d", "SELFLEARN_OUTPUT_DIR=" + s.q("env"));
  CHECK(r.code == 0);
  CHECK(fs::exists(s.dir / "env" / "example_1d.csv"));
}
