#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "finiteqp/io.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/optim.hpp"
#include "finiteqp/parallel.hpp"
#include "finiteqp/rng.hpp"
#include "finiteqp/states.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace finiteqp;

TEST_CASE("format_double: shortest exact round trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  for (double v : {3.141592653589793, 1e-300, -2.2250738585072014e-308,
                   0.1 + 0.2, 12345.6789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv writer: quoting rules") {
  CsvWriter csv({"a", "b"});
  csv.add_row({"plain", "with,comma"});
  csv.add_row({"with \"quote\"", "multi\nline"});
  const std::string out = csv.str();
  CHECK(out.find("a,b\r\n") == 0);
  CHECK(out.find("\"with,comma\"") != std::string::npos);
  CHECK(out.find("\"with \"\"quote\"\"\"") != std::string::npos);
  CHECK(out.find("\"multi\nline\"") != std::string::npos);
}

TEST_CASE("atomic writes and config sidecar") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "finiteqp_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "out.csv").string();

  write_with_config(path, "x,y\r\n1,2\r\n", {{"seed", 7}});
  std::ifstream in(path);
  std::stringstream got;
  got << in.rdbuf();
  CHECK(got.str() == "x,y\r\n1,2\r\n");

  std::ifstream cfg(path + ".config.json");
  REQUIRE(cfg.good());
  auto parsed = nlohmann::json::parse(cfg);
  CHECK(parsed["seed"] == 7);
  CHECK(!fs::exists(path + ".tmp"));
  fs::remove_all(dir);
}

TEST_CASE("json export shapes") {
  auto pair = build_canonical_pair(3);
  auto j = to_json(pair.q);
  CHECK(j["dim"] == 3);
  CHECK(j["re"].size() == 3);
  CHECK(j["re"][0].size() == 3);
  CHECK(j["im"].size() == 3);

  auto tms = two_mode_squeezed(3, 4.0, 10.0);
  auto js = to_json(tms);
  CHECK(js["dim"] == 9);
  CHECK(js["local_dims"][0] == 3);
  CHECK(js["pure"] == true);
}

TEST_CASE("nelder_mead: convergence on standard objectives") {
  auto quadratic = [](const Eigen::VectorXd& x) {
    return (x - Eigen::VectorXd::Constant(x.size(), 2.0)).squaredNorm();
  };
  auto res = nelder_mead(quadratic, Eigen::VectorXd::Zero(4));
  CHECK(res.converged);
  CHECK(res.value < 1e-12);
  CHECK((res.x - Eigen::VectorXd::Constant(4, 2.0)).norm() < 1e-6);

  auto rosenbrock = [](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (int i = 0; i + 1 < x.size(); ++i) {
      s += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) +
           std::pow(1.0 - x(i), 2);
    }
    return s;
  };
  NelderMeadOptions opts;
  opts.max_iter = 20000;
  auto rb = nelder_mead(rosenbrock, Eigen::VectorXd::Zero(2), opts);
  CHECK(rb.value < 1e-10);
}

TEST_CASE("seed splitting: deterministic and stream-separated") {
  CHECK(split_seed(1, 2) == split_seed(1, 2));
  CHECK(split_seed(1, 2) != split_seed(1, 3));
  CHECK(split_seed(1, 2) != split_seed(2, 2));
  auto a = make_rng(9, 0);
  auto b = make_rng(9, 0);
  CHECK(a() == b());
}

TEST_CASE("parallel_for: covers the index range once, any thread count") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);

  // index-addressed results identical regardless of worker count
  std::vector<double> one(64), many(64);
  setenv("FINITEQP_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  parallel_for(one.size(), [&](std::size_t i) {
    auto rng = make_rng(3, i);
    one[i] = std::uniform_real_distribution<double>(0, 1)(rng);
  });
  setenv("FINITEQP_THREADS", "7", 1);
  CHECK(worker_count() == 7);
  parallel_for(many.size(), [&](std::size_t i) {
    auto rng = make_rng(3, i);
    many[i] = std::uniform_real_distribution<double>(0, 1)(rng);
  });
  unsetenv("FINITEQP_THREADS");
  CHECK(one == many);
}
