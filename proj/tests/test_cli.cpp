#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rnimpute/cli.hpp"
#include "rnimpute/dataset.hpp"
#include "support/fixtures.hpp"

using namespace rnimpute;
using rnimpute::testing::data_path;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rnimpute");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rnimpute::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("rnimpute_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("summarize") {
  const auto r = invoke({"summarize", "--in", data_path("iris.dat")});
  CHECK(r.code == 0);
  CHECK(r.out.find("iris: 4 attributes (4/0/0), 150 examples, 3 classes, 0.00% MV") !=
        std::string::npos);
  const auto j = invoke({"summarize", "--json", "--in", data_path("iris.dat")});
  CHECK(nlohmann::json::parse(j.out).at("examples") == 150);
}

TEST_CASE("inject then impute") {
  const auto dir = scratch("impute");
  const auto holed = (dir / "holed.dat").string();
  const auto filled = (dir / "filled.dat").string();
  CHECK(invoke({"inject", "--in", data_path("iris.dat"), "--rate", "0.25", "--seed", "3", "--out",
             holed})
            .code == 0);
  const auto before = read_keel_dat_file(holed);
  CHECK(before.missing_count() > 0);

  for (const char* m : {"rnii", "knni", "wknni", "kmi", "fkmi", "mean"}) {
    CAPTURE(m);
    const auto r = invoke({"impute", "--in", holed, "--method", m, "--out", filled});
    CHECK(r.code == 0);
    CHECK(r.out.find("imputed " + std::to_string(before.missing_count())) != std::string::npos);
    CHECK(read_keel_dat_file(filled).is_complete());
  }
  const auto k1 = invoke({"impute", "--in", holed, "--method", "knni", "--param", "k=1", "--out",
                       filled});
  CHECK(k1.code == 0);
}

TEST_CASE("errors are reported with a nonzero exit") {
  const auto dir = scratch("errors");
  const auto unknown =
      invoke({"impute", "--in", data_path("iris.dat"), "--method", "svmi", "--out",
           (dir / "x.dat").string()});
  CHECK(unknown.code != 0);
  CHECK(unknown.err.find("unknown imputer") != std::string::npos);

  const auto missing = invoke({"summarize", "--in", (dir / "nope.dat").string()});
  CHECK(missing.code != 0);
  CHECK_FALSE(missing.err.empty());

  const auto bad_param = invoke({"impute", "--in", data_path("iris.dat"), "--method", "knni",
                              "--param", "depth=3", "--out", (dir / "x.dat").string()});
  CHECK(bad_param.code != 0);
  CHECK(bad_param.err.find("depth") != std::string::npos);

  std::ofstream(dir / "bad.dat") << "@relation r\n@attribute a real\n@attribute c {p}\n@data\nzz, p\n";
  const auto parse = invoke({"summarize", "--in", (dir / "bad.dat").string()});
  CHECK(parse.code != 0);
  CHECK(parse.err.find("line 5") != std::string::npos);

  CHECK(invoke({"frobnicate"}).code != 0);
  CHECK(invoke({}).code != 0);
}

TEST_CASE("compare writes the report, json and delta tables") {
  const auto dir = scratch("compare");
  const auto r = invoke({"compare", "--in", data_path("accuracy_c45.tsv"), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Rank Sums (+, -)") != std::string::npos);
  CHECK(r.out.find("28.0, 0.0") != std::string::npos);
  CHECK(slurp(dir / "wilcoxon.txt") == r.out);
  const auto j = nlohmann::json::parse(slurp(dir / "wilcoxon.json"));
  CHECK(j.at("reports").size() == 5);
  CHECK(j.at("reports")[4].at("w_minus") == 14.0);
  for (const char* m : {"fkmi", "kmi", "knni", "wknni", "svmi"}) {
    const auto t = slurp(dir / (std::string("delta_") + m + ".tsv"));
    CHECK(t.rfind("dataset\tdelta\n", 0) == 0);
    CHECK(std::count(t.begin(), t.end(), '\n') == 10);
  }
  CHECK(slurp(dir / "delta_svmi.tsv").find("IRM\t-1.33") != std::string::npos);

  const auto bad_ref =
      invoke({"compare", "--in", data_path("accuracy_c45.tsv"), "--reference", "zz", "--out",
           dir.string()});
  CHECK(bad_ref.code != 0);
}

TEST_CASE("evaluate and compare its results") {
  const auto dir = scratch("evaluate");
  const auto r = invoke({"evaluate", "--in", data_path("iris.dat"), "--method", "rnii", "--method",
                      "knni", "--rate", "0.1", "--folds", "5", "--param", "knni.k=5", "--out",
                      dir.string()});
  REQUIRE(r.code == 0);
  const auto results = nlohmann::json::parse(slurp(dir / "results.json"));
  REQUIRE(results.at("runs").size() == 2);
  CHECK(results.at("runs")[1].at("params").at("k") == "5");
  CHECK(results.at("runs")[0].at("fold_accuracies").size() == 5);
  CHECK(slurp(dir / "accuracy.tsv").rfind("method\tiris\n", 0) == 0);

  const auto cmp = dir / "cmp";
  CHECK(invoke({"compare", "--in", (dir / "results.json").string(), "--out", cmp.string()}).code == 0);
  CHECK(fs::exists(cmp / "delta_knni.tsv"));

  // Same run from a config file.
  const auto cfg_dir = scratch("evaluate_cfg");
  std::ofstream(cfg_dir / "run.toml") << "[evaluate]\nin = [\"" << data_path("iris.dat") << "\"]\n"
                                      << "method = [\"rnii\", \"knni\"]\n"
                                      << "rate = 0.1\nfolds = 5\nparam = [\"knni.k=5\"]\n"
                                      << "out = \"" << cfg_dir.string() << "\"\n";
  const auto c = invoke({"evaluate", "--config", (cfg_dir / "run.toml").string()});
  REQUIRE(c.code == 0);
  CHECK(nlohmann::json::parse(slurp(cfg_dir / "results.json")) == results);

  // Unqualified parameters are ambiguous with several methods.
  const auto amb = invoke({"evaluate", "--in", data_path("iris.dat"), "--method", "rnii", "--method",
                        "knni", "--param", "k=5", "--out", dir.string()});
  CHECK(amb.code != 0);
}
