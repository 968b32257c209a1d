#include "../tools/cli.hpp"

#include "pnorm/json_io.hpp"
#include "pnorm/random.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pnorm;

namespace {

const std::string kData = PNORM_DATA_DIR;

struct Run {
  int code;
  Json doc;
  std::string out;
  std::string err;
};

Run pnorm_run(std::vector<std::string> args) {
  args.insert(args.begin(), "pnorm");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  Json doc;
  if (!out.str().empty() && out.str()[0] == '{') doc = Json::parse(out.str());
  return {code, doc, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pnorm_test_" + name);
}

std::string write_matrix(const std::string& name, const ComplexMatrix& m) {
  const auto path = temp_path(name);
  std::ofstream(path) << to_json(m).dump();
  return path.string();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("norm") {
    auto r = pnorm_run({"norm", data("identity3.json"), "--p", "3", "--estimate"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.doc["manifest"]["command"] == "norm");
    CHECK(r.doc["manifest"]["version"] == library_version());

    r = pnorm_run({"norm", data("sd_element.json"), "--p", "1", "--exact"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["value"] == 4.0);

    Rng rng(3);
    const std::string file = write_matrix("rand.json", random_matrix(4, 3, rng));
    const auto ex = pnorm_run({"norm", file, "--p", "2", "--exact"});
    const auto es = pnorm_run({"norm", file, "--p", "2", "--estimate"});
    CHECK(std::abs(ex.doc["result"]["value"].get<double>() - es.doc["result"]["value"].get<double>()) <=
          1e-8 * ex.doc["result"]["value"].get<double>());

    r = pnorm_run({"norm", data("sd_element.json"), "--p", "1", "--oracle", "--resolution", "4"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["value"] == 4.0);
    CHECK(r.doc["result"]["method"] == "grid_oracle");

    r = pnorm_run({"norm", file, "--p", "1.5", "--q", "3", "--max-iters", "1", "--restarts", "1"});
    CHECK(r.code == cli::kNotConverged);
  }

  TEST_CASE("input errors") {
    CHECK(pnorm_run({}).code == cli::kInputError);
    CHECK(pnorm_run({"frobnicate"}).code == cli::kInputError);
    CHECK(pnorm_run({"norm", "/nonexistent.json"}).code == cli::kInputError);
    CHECK(pnorm_run({"norm", data("sd_element.json"), "--p", "0.5"}).code == cli::kInputError);
    CHECK(pnorm_run({"norm", data("sd_element.json"), "--p", "abc"}).code == cli::kInputError);
    CHECK(pnorm_run({"norm", data("sd_element.json"), "--p", "1.5", "--exact"}).code == cli::kInputError);
    CHECK(pnorm_run({"norm", data("sd_element.json"), "--exact", "--estimate"}).code == cli::kInputError);
    CHECK(pnorm_run({"norm", data("sd_element.json"), "--restarts", "0", "--p", "1.5"}).code == cli::kInputError);
    CHECK(pnorm_run({"norm", data("sd_algebra.json")}).code == cli::kInputError);
    CHECK(pnorm_run({"gap", data("sd_element.json"), "--composition", "1,2"}).code == cli::kInputError);
    CHECK(pnorm_run({"gap", data("sd_element.json"), "--side", "diagonal"}).code == cli::kInputError);
    CHECK(pnorm_run({"verify", "nonsense"}).code == cli::kInputError);
    CHECK(pnorm_run({"counterexample", "hexagon"}).code == cli::kInputError);
    CHECK(pnorm_run({"sweep", "--grid", "1,inf"}).code == cli::kInputError);
    const auto bad = pnorm_run({"sweep", "--grid", "2", "--out", "/nonexistent/dir/out.csv"});
    CHECK(bad.code == cli::kInputError);
    CHECK_FALSE(bad.err.empty());
    CHECK(pnorm_run({"--help"}).code == cli::kOk);
  }

  TEST_CASE("gap") {
    auto r = pnorm_run({"gap", data("sd_element.json"), "--algebra", data("sd_algebra.json"), "--p", "1",
                        "--restarts", "256"});
    CHECK(r.code == cli::kPropertyFailure);
    CHECK(std::abs(r.doc["result"]["gap"].get<double>() - (4.0 - std::sqrt(10.0))) <= 2e-4);

    Rng rng(4);
    std::vector<ComplexMatrix> blocks;
    for (int l = 0; l < 2; ++l)
      blocks.push_back(block_diag({random_matrix(1, 1, rng), random_matrix(2, 2, rng), random_matrix(1, 1, rng)}));
    const auto a = ColumnModuleElement::from_blocks(BlockDiagAlgebra(Composition({1, 2, 1})), blocks);
    const std::string file = write_matrix("block.json", a.matrix());
    r = pnorm_run({"gap", file, "--composition", "1,2,1", "--p", "1.5"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["certified"] == "constructive");
    r = pnorm_run({"gap", file, "--algebra", data("block_121.json"), "--p", "3"});
    CHECK(r.code == cli::kOk);
    const std::string row = write_matrix("row.json", a.matrix().transpose());
    r = pnorm_run({"gap", row, "--composition", "1,2,1", "--side", "row", "--p", "1.5"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["side"] == "row");

    r = pnorm_run({"gap", data("zero_column_2x1.json"), "--p", "1.5"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["gap"] == 0.0);

    // The upper-triangular element fails unless the tolerance swallows its gap.
    CHECK(pnorm_run({"gap", data("upper_triangular_element.json"), "--algebra",
                     data("upper_triangular_algebra.json"), "--p", "2"})
              .code == cli::kPropertyFailure);
    CHECK(pnorm_run({"gap", data("upper_triangular_element.json"), "--algebra",
                     data("upper_triangular_algebra.json"), "--p", "2", "--gap-tol", "2"})
              .code == cli::kOk);
  }

  TEST_CASE("verify") {
    for (const char* suite : {"duality", "block-lemma", "mainT1", "mainT2"}) {
      const auto r = pnorm_run({"verify", suite, "--trials", "4", "--seed", "9"});
      CHECK_MESSAGE(r.code == cli::kOk, suite);
      CHECK(r.doc["result"]["passed"] == true);
      CHECK(r.doc["result"]["trials"] == 4);
      CHECK(r.doc["manifest"]["seed"] == 9);
    }
    const auto d = pnorm_run({"verify", "duality"});
    CHECK(d.doc["result"]["trials"] == 100);
    for (const auto& [name, prop] : d.doc["result"]["properties"].items()) {
      CHECK_MESSAGE(prop["max_residual"].get<double>() <= 2e-3, name);
    }
    const auto m2 = pnorm_run({"verify", "mainT2"});
    CHECK(m2.code == cli::kOk);
    CHECK(m2.doc["result"]["trials"] == 25);
    CHECK(pnorm_run({"verify", "duality", "--trials", "-1"}).code == cli::kInputError);
  }

  TEST_CASE("counterexample") {
    auto r = pnorm_run({"counterexample", "sd"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["reproduced"] == true);
    CHECK(r.doc["result"]["report"]["element_norm"] == 4.0);
    CHECK(std::abs(r.doc["result"]["claim_oracle"]["value"].get<double>() - std::sqrt(10.0)) < 1e-10);

    r = pnorm_run({"counterexample", "upper-triangular", "--p", "1.5", "--n", "2"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["result"]["report"]["pairing_sup"] == 0.0);
    CHECK(r.doc["result"]["report"]["gap"].get<double>() ==
          doctest::Approx(std::pow(2.0, 1.0 / 1.5)).epsilon(1e-9));
    CHECK(pnorm_run({"counterexample", "upper-triangular", "--n", "0"}).code == cli::kInputError);
  }

  TEST_CASE("determinism") {
    auto strip = [](Json j) {
      j["manifest"].erase("duration_seconds");
      return j.dump();
    };
    const std::vector<std::string> args = {"norm", data("sd_element.json"), "--p", "1.5", "--q", "2.5",
                                           "--seed", "5"};
    CHECK(strip(pnorm_run(args).doc) == strip(pnorm_run(args).doc));
    const std::vector<std::string> gap = {"gap", data("upper_triangular_element.json"), "--algebra",
                                          data("upper_triangular_algebra.json"), "--p", "1.5",
                                          "--oracle-resolution", "8"};
    CHECK(strip(pnorm_run(gap).doc) == strip(pnorm_run(gap).doc));

    const auto out1 = temp_path("sweep1.csv"), out2 = temp_path("sweep2.csv");
    const auto r1 = pnorm_run({"sweep", "--grid", "1,2", "--out", out1.string(), "--seed", "3"});
    const auto r2 = pnorm_run({"sweep", "--grid", "1,2", "--out", out2.string(), "--seed", "3"});
    CHECK(r1.code == cli::kOk);
    CHECK(r2.code == cli::kOk);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1).rfind("p,norm,sup,gap,certified,restarts,seed\n", 0) == 0);
    CHECK(std::filesystem::exists(out1.string() + ".manifest.json"));
    const Json side = Json::parse(slurp(out1.string() + ".manifest.json"));
    CHECK(side["command"] == "sweep");
    CHECK(side["seed"] == 3);
    CHECK(r1.doc["result"]["rows"][1]["gap"].get<double>() <= 1e-4);
  }
}
