#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "ubsr/cli.hpp"
#include "ubsr/io.hpp"
#include "ubsr/optimizer.hpp"
#include "ubsr/rng.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = ubsr::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "ubsr_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  ubsr::write_file_atomic(p, text);
  return p.string();
}

json strip_timestamp(json j) {
  j["metadata"].erase("timestamp");
  return j;
}

std::string regression_csv(std::size_t m, std::uint64_t seed) {
  ubsr::SplitMix64 rng(seed);
  ubsr::RegressionDataset d{Eigen::MatrixXd(m, 1), Eigen::VectorXd(m)};
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) {
    d.features(i, 0) = -2 + 4 * rng.uniform();
    d.targets(i) = 3 * d.features(i, 0) + (2 * rng.uniform() - 1);
  }
  return ubsr::dataset_to_csv(d);
}

}  // namespace

TEST_CASE("analytic prints the exact UBSR with metadata") {
  const auto r = run({"analytic", "--dist", "uniform:0,10", "--utility", "hinge", "--lambda", "2"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["ubsr"].get<double>() == doctest::Approx(3.6754447).epsilon(1e-7));
  const auto& meta = j["metadata"];
  CHECK(meta["rng"] == "splitmix64");
  CHECK(meta["version"] == ubsr::cli::kVersion);
  CHECK(meta["subcommand"] == "analytic");
  CHECK(meta["flags"]["dist"] == "uniform:0,10");
  CHECK(meta["flags"]["tol"] == "1e-10");
  CHECK(meta.contains("timestamp"));
  CHECK(meta.contains("seed"));
}

TEST_CASE("estimate from a CSV of constants") {
  const auto path = write("point5.csv", "z\n5\n5\n5\n5\n");
  const auto r = run({"estimate", "--input", path, "--utility", "linear", "--lambda", "2"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["estimate"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(j.contains("iterations"));
  CHECK(j["bracket_used"].size() == 2);
  CHECK(std::abs(j["q_at_estimate"].get<double>()) <= 1e-8);
}

TEST_CASE("estimate from a distribution spec honours the seed") {
  const std::vector<std::string> args{"estimate", "--input", "uniform:0,10", "--utility", "hinge", "--lambda",
                                      "2",        "--n",     "20000",        "--seed",    "5"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(strip_timestamp(json::parse(a.out)) == strip_timestamp(json::parse(b.out)));
  CHECK(std::abs(json::parse(a.out)["estimate"].get<double>() - 3.6754) < 0.1);
  auto c_args = args;
  c_args.back() = "6";
  CHECK(json::parse(run(c_args).out)["estimate"] != json::parse(a.out)["estimate"]);
}

TEST_CASE("seed defaults to the environment variable") {
  ::setenv("UBSR_SEED", "77", 1);
  const auto r = run({"estimate", "--input", "gauss:0,1", "--utility", "linear", "--lambda", "0", "--n", "10"});
  ::unsetenv("UBSR_SEED");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["metadata"]["seed"] == 77);
}

TEST_CASE("lmo prints weights and diagnostics") {
  const auto path = write("line.csv", "x1,y\n1,2\n2,4\n");
  const auto r = run({"lmo", "--data", path, "--utility", "linear", "--gamma", "0"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["weights"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(j["objective"].get<double>()) <= 1e-6);
  CHECK(j.contains("iterations"));
  CHECK(j.contains("grad_norm"));
}

TEST_CASE("train writes a reloadable model and a trace") {
  const auto data = write("train.csv", regression_csv(400, 3));
  const auto model = (scratch() / "model.json").string();
  const auto trace = (scratch() / "trace.csv").string();
  const auto r = run({"train", "--data", data, "--utility", "blend:a=0.5,tau=3", "--lambda", "0.5", "--T", "8",
                      "--out", model, "--trace", trace});
  REQUIRE(r.code == 0);
  const auto saved = json::parse(ubsr::read_text_file(model));
  for (const char* key : {"weights", "lambda", "utility", "T", "beta0", "final_ubsr_estimate", "metadata"}) {
    CHECK(saved.contains(key));
  }
  CHECK(saved["T"] == 8);

  const auto csv = ubsr::read_text_file(trace);
  CHECK(csv.rfind("t,alpha,beta,gamma_t,gamma_hat,branch,lmo_objective,lmo_iters\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(std::filesystem::exists(trace + ".meta.json"));

  // Round trip: the stored estimate is reproduced on the same estimation half.
  const auto m = ubsr::model_from_json(saved);
  const auto [first, second] = ubsr::split_halves(ubsr::load_dataset(data), std::nullopt);
  const double again = ubsr::ubsr_of_model(m.model, second, m.utility, m.lambda, 1e-10);
  CHECK(std::abs(again - m.final_ubsr_estimate) <= 1e-9);
}

TEST_CASE("identical argv gives byte-identical files apart from the timestamp") {
  const auto data = write("det.csv", regression_csv(200, 8));
  auto train_to = [&](const std::string& tag) {
    const auto model = (scratch() / ("det_model_" + tag + ".json")).string();
    const auto trace = (scratch() / ("det_trace_" + tag + ".csv")).string();
    REQUIRE(run({"train", "--data", data, "--lambda", "0.5", "--T", "6", "--shuffle-seed", "3", "--out", model,
                 "--trace", trace})
                .code == 0);
    return std::pair{model, trace};
  };
  const auto [m1, t1] = train_to("a");
  const auto [m2, t2] = train_to("b");
  CHECK(ubsr::read_text_file(t1) == ubsr::read_text_file(t2));
  auto j1 = strip_timestamp(json::parse(ubsr::read_text_file(m1)));
  auto j2 = strip_timestamp(json::parse(ubsr::read_text_file(m2)));
  // Output paths differ by construction.
  j1["metadata"]["flags"].erase("out");
  j1["metadata"]["flags"].erase("trace");
  j2["metadata"]["flags"].erase("out");
  j2["metadata"]["flags"].erase("trace");
  CHECK(j1.dump() == j2.dump());
}

TEST_CASE("concentration CSV and thread invariance") {
  const std::vector<std::string> base{"concentration", "--dist", "uniform:0,10", "--utility", "hinge",
                                      "--lambda", "2", "--n-grid", "50,200", "--delta-grid", "0.1",
                                      "--trials", "40", "--seed", "9"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto many = base;
  many.insert(many.end(), {"--threads", "4"});
  const auto a = run(one);
  const auto b = run(many);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,delta,trial,abs_error,bound,covered\n", 0) == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 81);

  const auto path = (scratch() / "conc.csv").string();
  auto to_file = base;
  to_file.insert(to_file.end(), {"--out", path, "--tail", "subgauss:5"});
  const auto c = run(to_file);
  REQUIRE(c.code == 0);
  CHECK(ubsr::read_text_file(path) == a.out);
  CHECK(json::parse(c.out).contains("report"));
}

TEST_CASE("verify exit codes and report") {
  const auto report = (scratch() / "report.json").string();
  const auto ok = run({"verify", "--check", "nonconvexity", "--report", report});
  CHECK(ok.code == 0);
  const auto j = json::parse(ubsr::read_text_file(report));
  CHECK(j["passed"] == true);
  CHECK(j["checks"][0]["name"] == "nonconvexity");

  const auto bad = run({"verify", "--check", "gradient", "--dist1", "uniform:0,1", "--dist2", "uniform:0,2",
                        "--utility", "hinge", "--lambda", "0"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("non-differentiable") != std::string::npos);

  CHECK(run({"verify", "--check", "pseudolinear"}).code == 0);
  CHECK(run({"verify", "--check", "randomization"}).code == 0);
  CHECK(run({"verify", "--check", "gradient"}).code == 0);
}

TEST_CASE("usage and data errors exit 2 and name the cause") {
  const auto bad_dist = run({"analytic", "--dist", "uniform:1", "--utility", "hinge", "--lambda", "2"});
  CHECK(bad_dist.code == 2);
  CHECK(bad_dist.err.find("--dist") != std::string::npos);
  CHECK(bad_dist.err.find("uniform:lo,hi") != std::string::npos);

  const auto bad_util = run({"analytic", "--dist", "uniform:0,1", "--utility", "cubic", "--lambda", "2"});
  CHECK(bad_util.code == 2);
  CHECK(bad_util.err.find("--utility") != std::string::npos);

  const auto missing = run({"analytic", "--dist", "uniform:0,1", "--utility", "hinge"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--lambda") != std::string::npos);

  const auto not_number = run({"analytic", "--dist", "uniform:0,1", "--utility", "hinge", "--lambda", "two"});
  CHECK(not_number.code == 2);
  CHECK(not_number.err.find("--lambda") != std::string::npos);

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify", "--check", "everything"}).code == 2);

  const auto csv = write("bad.csv", "x1,y\n1,abc\n");
  const auto data = run({"lmo", "--data", csv, "--utility", "linear", "--gamma", "0"});
  CHECK(data.code == 2);
  CHECK(data.err.find("row 2") != std::string::npos);

  const auto hinge_train = run({"train", "--data", write("h.csv", regression_csv(20, 1)), "--utility", "hinge",
                                "--lambda", "1"});
  CHECK(hinge_train.code == 2);
  CHECK(hinge_train.err.find("--utility") != std::string::npos);

  const auto empty = run({"analytic", "--dist", "gauss:0,1", "--utility", "hinge", "--lambda", "0"});
  CHECK(empty.code == 3);
}

TEST_CASE("config file supplies flags; the command line wins") {
  const auto cfg = write("cfg.json", R"({"dist": "uniform:0,10", "utility": "hinge", "lambda": 5})");
  const auto a = run({"analytic", "--config", cfg});
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["ubsr"].get<double>() == doctest::Approx(0.0));
  const auto b = run({"analytic", "--config", cfg, "--lambda", "2"});
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["ubsr"].get<double>() == doctest::Approx(3.6754447).epsilon(1e-7));
  CHECK(json::parse(b.out)["metadata"]["config"] == cfg);

  const auto arr = write("cfg2.json", R"({"n-grid": [50, 100], "trials": 10, "delta-grid": [0.1]})");
  const auto c = run({"concentration", "--dist", "exp:1", "--utility", "blend", "--lambda", "1", "--config", arr});
  REQUIRE(c.code == 0);
  CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 21);

  CHECK(run({"analytic", "--config", write("bad.json", "{oops")}).code == 2);
  CHECK(run({"analytic", "--config", "/nonexistent/cfg.json"}).code == 2);
}

TEST_CASE("help and version") {
  CHECK(run({"--help"}).code == 0);
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(ubsr::cli::kVersion) != std::string::npos);
}
