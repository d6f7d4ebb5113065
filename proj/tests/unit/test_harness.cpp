#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "pnglab/errors.hpp"
#include "pnglab/experiment.hpp"
#include "pnglab/special.hpp"
#include "pnglab/statistics.hpp"

using namespace pnglab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig config(ExperimentKind kind, std::map<std::string, std::string> params) {
  ExperimentConfig c;
  c.experiment = kind;
  c.parameters = std::move(params);
  return c;
}

std::string render(const Report& r, OutputFormat f) {
  std::ostringstream os;
  write_report(r, os, f);
  return os.str();
}

double summary(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.summary) {
    if (k == key) return v;
  }
  FAIL("missing summary key " << key);
  return 0.0;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pnglab_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("empirical distribution function") {
  const auto e = empirical_cdf({3.0, 1.0, 2.0});
  CHECK(e(2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(e(-1e300) == 0.0);
  CHECK(e(1e300) == 1.0);
  CHECK(e.left_limit(2.0) == doctest::Approx(1.0 / 3.0));
  const auto d = empirical_cdf({1.0, 1.0, 2.0});
  CHECK(d(1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(d.left_limit(1.0) == 0.0);
  CHECK_THROWS_AS(empirical_cdf({}), ConfigurationError);
  CHECK_THROWS_AS(empirical_cdf({1.0, std::nan("")}), DomainError);
}

TEST_CASE("Kolmogorov-Smirnov distance") {
  CHECK(ks_distance(empirical_cdf({0.0}), [](double) { return 0.5; }) == doctest::Approx(0.5));
  // a step function against itself
  const auto e = empirical_cdf({1.0, 2.0, 3.0, 4.0});
  CHECK(ks_distance(e, [&](double x) { return e(x); }) == 0.0);
  CHECK(ks_distance(e, [&](double x) { return e(x) - 0.125; }) == doctest::Approx(0.125));

  // sample at the normal quantiles i / (n + 1)
  std::vector<double> q;
  const int n = 1000000;
  for (int i = 1; i <= n; ++i) {
    const double u = static_cast<double>(i) / (n + 1);
    double lo = -8.0, hi = 8.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (special::std_normal_cdf(mid) < u ? lo : hi) = mid;
    }
    q.push_back(0.5 * (lo + hi));
  }
  CHECK(ks_distance(empirical_cdf(q), special::std_normal_cdf) < 0.002);
}

TEST_CASE("joint empirical distribution") {
  const std::vector<std::vector<double>> s = {{0.0, 1.0}, {1.0, 0.0}, {2.0, 2.0}, {0.5, 0.5}};
  CHECK(joint_ecdf(s, {1.0, 1.0}) == doctest::Approx(0.75));
  CHECK(joint_ecdf(s, {0.5, 1.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(joint_ecdf(s, {1.0}), ConfigurationError);
}

TEST_CASE("tabulated distribution functions") {
  const auto t = tabulate_cdf(special::std_normal_cdf, -6.0, 6.0, 0.05);
  for (double s : {-2.33, -0.51, 0.0, 0.77, 3.1}) CHECK(std::fabs(t(s) - special::std_normal_cdf(s)) < 1e-5);
  CHECK(t(-7.0) == 0.0);
  CHECK(t(7.0) == 1.0);
  CHECK_THROWS_AS(TabulatedCdf({0.0, 1.0}, {0.0, 1.0}), ConfigurationError);
  CHECK_THROWS_AS(TabulatedCdf({0.0, 1.0, 1.0, 2.0}, {0.0, 0.3, 0.6, 1.0}), ConfigurationError);
}

TEST_CASE("grid and list syntax") {
  const auto g = parse_grid("-6:3:0.05");
  CHECK(g.size() == 181);
  CHECK(g.front() == -6.0);
  CHECK(g.back() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(parse_grid("1:1:0.5").size() == 1);
  CHECK_THROWS_AS(parse_grid("1:0:0.5"), ConfigurationError);
  CHECK_THROWS_AS(parse_grid("0:1"), ConfigurationError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigurationError);
  CHECK(parse_list("0,0.7,1.5") == std::vector<double>{0.0, 0.7, 1.5});
  CHECK_THROWS_AS(parse_list("1,,2"), ConfigurationError);
  CHECK_THROWS_AS(parse_list("1,x"), ConfigurationError);
}

TEST_CASE("experiment names") {
  for (auto k : all_experiments()) CHECK(parse_experiment(to_string(k)) == k);
  CHECK(to_string(ExperimentKind::PngHeight) == "png-height");
  CHECK_THROWS_AS(parse_experiment("png"), ConfigurationError);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(config(ExperimentKind::DistEval, {{"s", "0:1:0.1"}}).validate(), ConfigurationError);
  CHECK_THROWS_AS(config(ExperimentKind::DistEval, {{"which", "F2"}, {"s", "0:1:0.1"}, {"bogus", "1"}}).validate(),
                  ConfigurationError);
  CHECK_THROWS_AS(config(ExperimentKind::PngHeight, {{"N", "abc"}}).validate(), ConfigurationError);
  CHECK_THROWS_AS(config(ExperimentKind::PngHeight, {{"N", "8"}, {"workers", "0"}}).validate(), ConfigurationError);
  CHECK_THROWS_AS(config(ExperimentKind::PngHeight, {{"N", "8"}, {"format", "xml"}}).validate(), ConfigurationError);
  const auto ok = config(ExperimentKind::PngHeight, {{"N", "8"}});
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.get_double("q") == 0.25);
  CHECK(ok.get_seed() == 1);
  CHECK(ok.workers() == 1);
  CHECK(ok.format() == OutputFormat::Csv);
  CHECK_THROWS_AS(run_experiment(config(ExperimentKind::PngHeight, {{"N", "8"}, {"alpha", "3"}})), ConfigurationError);
  CHECK_THROWS_AS(run_experiment(config(ExperimentKind::RmtEdge, {{"N", "8"}, {"ensemble", "gse"}})),
                  ConfigurationError);
}

TEST_CASE("config files") {
  TempDir dir;
  const auto path = (dir.path / "run.conf").string();
  {
    std::ofstream f(path);
    f << "# png run\nN = 16\n  alpha=1.2   # source\n\nsamples = 10\n";
  }
  const auto m = read_config_file(path);
  CHECK(m.at("N") == "16");
  CHECK(m.at("alpha") == "1.2");
  CHECK(m.at("samples") == "10");
  {
    std::ofstream f(path);
    f << "N 16\n";
  }
  CHECK_THROWS_AS(read_config_file(path), ConfigurationError);
  CHECK_THROWS_AS(read_config_file((dir.path / "missing").string()), ConfigurationError);
}

TEST_CASE("dist-eval emits the requested grid") {
  const auto r = run_experiment(config(ExperimentKind::DistEval, {{"which", "F2"}, {"s", "-6:3:0.05"}}));
  CHECK(r.certified);
  CHECK(r.table.rows.size() == 181);
  const auto f = r.table.numeric_column("F");
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] >= f[i - 1]);
  CHECK(summary(r, "max_discrepancy") < 1e-8);
}

TEST_CASE("reports round-trip through both formats") {
  TempDir dir;
  const auto r = run_experiment(config(ExperimentKind::PngHeight, {{"N", "16"}, {"samples", "50"}, {"seed", "3"}}));
  REQUIRE(r.table.rows.size() == 50);
  for (auto fmt : {OutputFormat::Csv, OutputFormat::Json}) {
    const auto path = (dir.path / (fmt == OutputFormat::Csv ? "h.csv" : "h.json")).string();
    write_report_file(r, path, fmt);
    const Table t = read_table(path);
    REQUIRE(t.columns.size() == r.table.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      CHECK(t.columns[c].name == r.table.columns[c].name);
      CHECK(t.columns[c].type == r.table.columns[c].type);
    }
    CHECK(t.numeric_column("scaled") == r.table.numeric_column("scaled"));
    CHECK(t.numeric_column("h") == r.table.numeric_column("h"));
  }
  const std::string csv = render(r, OutputFormat::Csv);
  CHECK(csv.rfind("# {", 0) == 0);
  CHECK(csv.find("\"experiment\":\"png-height\"") != std::string::npos);
  CHECK(csv.find("workers") == std::string::npos);

  // the compare reader consumes the file it just wrote
  const auto path = (dir.path / "h.csv").string();
  const auto c = run_experiment(config(ExperimentKind::Compare, {{"input", path}, {"against", "GOE2"}}));
  CHECK(summary(c, "samples") == 50.0);
  CHECK(summary(c, "ks") > 0.0);
  CHECK(summary(c, "ks") < 1.0);

  // schema violations
  const auto broken = (dir.path / "broken.csv").string();
  {
    std::ofstream f(broken);
    f << "# {\"columns\":[{\"name\":\"x\",\"type\":\"float\"}]}\nx\nnot-a-number\n";
  }
  CHECK_THROWS_AS(read_table(broken), ConfigurationError);
  {
    std::ofstream f(broken);
    f << "# {\"columns\":[{\"name\":\"x\",\"type\":\"float\"}]}\ny\n1.0\n";
  }
  CHECK_THROWS_AS(read_table(broken), ConfigurationError);
}

TEST_CASE("output does not depend on the worker count") {
  for (auto kind : {ExperimentKind::PngHeight, ExperimentKind::RmtEdge}) {
    std::map<std::string, std::string> p = {{"N", "24"}, {"samples", "300"}, {"seed", "5"}};
    p["workers"] = "1";
    const auto one = render(run_experiment(config(kind, p)), OutputFormat::Csv);
    p["workers"] = "4";
    const auto four = render(run_experiment(config(kind, p)), OutputFormat::Csv);
    CHECK(one == four);
  }
  std::map<std::string, std::string> d = {{"N", "3"}, {"times", "0,0.5"}, {"samples", "200"}, {"seed", "2"}};
  d["workers"] = "1";
  const auto a = render(run_experiment(config(ExperimentKind::RmtDyson, d)), OutputFormat::Json);
  d["workers"] = "3";
  CHECK(a == render(run_experiment(config(ExperimentKind::RmtDyson, d)), OutputFormat::Json));
}
