#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "elmlc/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "elmlc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = elmlc::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("help lists subcommands and exit codes") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* word : {"generate", "train", "predict", "benchmark", "sweep"})
    CHECK(r.out.find(word) != std::string::npos);
  CHECK(r.out.find("7") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == elmlc::kExitUsage);
  CHECK(run({"frobnicate"}).code == elmlc::kExitUsage);
  const auto r = run({"train", "--out", "x", "--bogus"});
  CHECK(r.code == elmlc::kExitUsage);
  CHECK(r.err.find("elmlc: error:") == 0);
  CHECK(r.err.find('\n') == r.err.size() - 1);
}

TEST_CASE("generate, train twice, predict") {
  TempDir dir("elmlc_cli_pipeline");
  REQUIRE(run({"generate", "--out", dir.path.string()}).code == 0);
  CHECK(fs::exists(dir / "train.csv"));
  CHECK(fs::exists(dir / "test.csv"));
  CHECK(fs::exists(dir / "synthetic_config.txt"));

  const std::vector<std::string> train{"train",  "--classifier", "elm", "--hidden", "40",
                                       "--seed", "42",           "--train", dir / "train.csv",
                                       "--test", dir / "test.csv"};
  auto a = train;
  a.insert(a.end(), {"--out", dir / "m1.txt"});
  auto b = train;
  b.insert(b.end(), {"--out", dir / "m2.txt"});
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  CHECK(slurp(dir / "m1.txt") == slurp(dir / "m2.txt"));
  CHECK(slurp(dir / "m1.txt.report").find("seed = 42") != std::string::npos);

  REQUIRE(run({"predict", "--model", dir / "m1.txt", "--input", dir / "test.csv", "--out",
               dir / "pred.csv"})
              .code == 0);
  const std::string pred = slurp(dir / "pred.csv");
  CHECK(std::count(pred.begin(), pred.end(), '\n') == 2038);
}

TEST_CASE("mlp training through the cli") {
  TempDir dir("elmlc_cli_mlp");
  REQUIRE(run({"generate", "--out", dir.path.string()}).code == 0);
  const auto r = run({"train", "--classifier", "mlp", "--iterations", "3", "--train",
                      dir / "train.csv", "--out", dir / "mlp.txt"});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "mlp.txt").find("format = mlp") != std::string::npos);
}

TEST_CASE("error exit codes") {
  TempDir dir("elmlc_cli_errors");
  CHECK(run({"train", "--train", dir / "missing.csv", "--out", dir / "m.txt"}).code ==
        elmlc::kExitIo);

  {
    std::ofstream bad(dir / "bad.csv");
    bad << "a,b,label\n1,2,x\n3,zz,y\n";
  }
  CHECK(run({"train", "--data", dir / "bad.csv", "--out", dir / "m.txt"}).code ==
        elmlc::kExitMalformed);

  {
    std::ofstream ok(dir / "small.csv");
    ok << "a,b,label\n";
    for (int i = 0; i < 20; ++i) ok << i << ',' << (i * 7) % 5 << ',' << (i % 2 ? "x" : "y") << '\n';
    std::ofstream wide(dir / "wide.csv");
    wide << "a,b,c\n1,2,3\n";
  }
  REQUIRE(run({"train", "--data", dir / "small.csv", "--hidden", "5", "--out", dir / "m.txt"})
              .code == 0);
  CHECK(run({"predict", "--model", dir / "m.txt", "--input", dir / "wide.csv", "--out",
             dir / "p.csv"})
            .code == elmlc::kExitDimension);
  CHECK(run({"train", "--data", dir / "small.csv", "--hidden", "0", "--out", dir / "m.txt"})
            .code == elmlc::kExitConfig);
  CHECK(run({"train", "--data", dir / "small.csv", "--train-fraction", "1.0", "--out",
             dir / "m.txt"})
            .code == elmlc::kExitConfig);
  CHECK(run({"train", "--data", dir / "small.csv", "--activation", "relu", "--out", dir / "m.txt"})
            .code == elmlc::kExitConfig);
  {
    std::ofstream garbage(dir / "garbage.txt");
    garbage << "hello\n";
  }
  CHECK(run({"predict", "--model", dir / "garbage.txt", "--input", dir / "small.csv", "--out",
             dir / "p.csv"})
            .code == elmlc::kExitMalformed);
}

TEST_CASE("benchmark and sweep write their reports") {
  TempDir dir("elmlc_cli_bench");
  REQUIRE(run({"generate", "--out", dir.path.string()}).code == 0);
  const auto b = run({"benchmark", "--train", dir / "train.csv", "--test", dir / "test.csv",
                      "--hidden", "50", "--iterations", "5", "--out", dir / "bench"});
  REQUIRE(b.code == 0);
  const std::string table = slurp(dir / "bench/benchmark.txt");
  CHECK(table.find("Extreme learning machine") != std::string::npos);
  CHECK(table.find("Back propagation neural network") != std::string::npos);
  CHECK(table.find("speedup") != std::string::npos);
  const std::string records = slurp(dir / "bench/benchmark.records");
  CHECK(records.find("elm.param.hidden_nodes = 50") != std::string::npos);
  CHECK(records.find("mlp.param.iterations = 5") != std::string::npos);
  CHECK(fs::exists(dir / "bench/elm_model.txt"));
  CHECK(fs::exists(dir / "bench/mlp_predictions.csv"));

  const auto s = run({"sweep", "--train", dir / "train.csv", "--test", dir / "test.csv",
                      "--h-values", "10", "20", "--seeds-per-h", "2", "--out", dir / "sweep"});
  REQUIRE(s.code == 0);
  CHECK(slurp(dir / "sweep/sweep.txt").find("Best number of hidden nodes") != std::string::npos);
  CHECK(run({"sweep", "--train", dir / "train.csv", "--test", dir / "test.csv", "--h-values",
             "20", "10", "--out", dir / "sweep2"})
            .code == elmlc::kExitConfig);
}
