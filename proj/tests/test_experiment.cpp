#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "luf/experiment.hpp"

using namespace luf;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.decoder = DecoderChoice::Both;
  cfg.distances = {3, 5};
  cfg.p = 0.01;
  cfg.samples = 30;
  cfg.seed = 99;
  return cfg;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ufsim_test_" + name)).string();
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.distances = {4};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.samples = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.q = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  CHECK(cfg.q_value() == cfg.p);
  CHECK(parse_decoder_choice("aluf") == DecoderChoice::Aluf);
  CHECK_THROWS_AS(parse_decoder_choice("mwpm"), std::invalid_argument);
}

TEST_CASE("zero noise batch") {
  ExperimentConfig cfg = small_config();
  cfg.p = 0.0;
  cfg.samples = 10;
  const auto records = run_batch(cfg);
  CHECK(records.size() == 2 * 2 * 10);
  for (const RuntimeRecord& r : records) {
    CHECK(r.growth_rounds == 0);
    CHECK(!r.logical_error);
    CHECK(r.correction_valid);
  }
}

TEST_CASE("batch ordering and pairing") {
  const auto records = run_batch(small_config());
  REQUIRE(records.size() == 120);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    CHECK(std::tie(a.decoder, a.d, a.sample_index) < std::tie(b.decoder, b.d, b.sample_index));
  }
  // paired records agree on the decision-level outputs
  for (std::size_t i = 0; i < 60; ++i) {
    CHECK(records[i].decoder == "aluf");
    CHECK(records[i + 60].decoder == "sluf");
    CHECK(records[i].growth_rounds == records[i + 60].growth_rounds);
    CHECK(records[i].logical_error == records[i + 60].logical_error);
  }
}

TEST_CASE("worker count does not change the output") {
  ExperimentConfig cfg = small_config();
  const std::string one = records_to_csv(run_batch(cfg));
  cfg.workers = 3;
  CHECK(records_to_csv(run_batch(cfg)) == one);
  cfg.workers = 8;
  CHECK(records_to_csv(run_batch(cfg)) == one);
}

TEST_CASE("traces are attached on request") {
  ExperimentConfig cfg = small_config();
  cfg.samples = 2;
  cfg.trace = true;
  for (const RuntimeRecord& r : run_batch(cfg)) {
    // the strictly local trace continues while nodes drain into Done
    if (r.decoder == "aluf") CHECK(static_cast<int>(r.trace.size()) == r.total_timesteps);
    if (r.decoder == "sluf") CHECK(static_cast<int>(r.trace.size()) > r.total_timesteps);
  }
}

TEST_CASE("slope fit") {
  SUBCASE("exact power law") {
    std::vector<FitPoint> pts;
    for (double d : {5.0, 9.0, 13.0, 17.0}) pts.push_back({d, 3.5 * d * d, 0.01 * d * d});
    const SlopeFit f = fit_loglog_slope(pts);
    CHECK(std::abs(f.m - 2.0) < 1e-9);
    CHECK(std::abs(std::exp(f.intercept) - 3.5) < 1e-9);
    CHECK(f.weighted);
  }
  SUBCASE("zero stderr falls back to an unweighted fit") {
    const SlopeFit f = fit_loglog_slope({{3, 9, 0}, {5, 25, 0}, {7, 49, 0}});
    CHECK(std::abs(f.m - 2.0) < 1e-9);
    CHECK(!f.weighted);
    CHECK(f.stderr_m < 1e-6);
  }
  SUBCASE("weights favour precise points") {
    // a noisy outlier with a huge error bar barely moves the slope
    const SlopeFit f = fit_loglog_slope({{3, 3, 0.001}, {5, 5, 0.001}, {7, 7, 0.001}, {9, 50, 40}});
    CHECK(std::abs(f.m - 1.0) < 0.01);
    CHECK(f.stderr_m > 0);
  }
  SUBCASE("standard error against a hand computation") {
    // equal relative errors sigma: var(m) = sigma^2 / sum (x - xbar)^2
    const double sigma = 0.05;
    std::vector<FitPoint> pts;
    double sxx = 0;
    const double xbar = (std::log(3.0) + std::log(5.0) + std::log(7.0)) / 3;
    for (double d : {3.0, 5.0, 7.0}) {
      pts.push_back({d, d, sigma * d});
      sxx += (std::log(d) - xbar) * (std::log(d) - xbar);
    }
    CHECK(std::abs(fit_loglog_slope(pts).stderr_m - sigma / std::sqrt(sxx)) < 1e-12);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_loglog_slope({{3, 1, 0.1}, {5, 2, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope({{3, 1, 0.1}, {5, 0, 0.1}, {7, 3, 0.1}}), std::invalid_argument);
  }
}

TEST_CASE("histogram") {
  SUBCASE("single value") {
    const Histogram h = histogram(std::vector<long long>{42}, 21);
    REQUIRE(h.bins.size() == 1);
    CHECK(h.bins[0].lo == 42);
    CHECK(h.bins[0].count == 1);
    CHECK(h.mean == 42.0);
    CHECK(h.max == 42);
  }
  SUBCASE("bins are contiguous and cover every value") {
    const Histogram h = histogram(std::vector<long long>{1, 2, 2, 9, 30}, 5);
    CHECK(h.bins.front().lo == 0);
    CHECK(h.bins.back().lo == 30);
    CHECK(h.bins.size() == 7);
    int total = 0;
    for (const auto& b : h.bins) total += b.count;
    CHECK(total == 5);
    CHECK(h.bins[0].count == 3);
    CHECK(h.bins[1].count == 1);
    CHECK(h.bins[2].count == 0);
    CHECK(h.mean == doctest::Approx(8.8));
  }
  SUBCASE("default widths") {
    CHECK(default_bin_width("aluf") == 1);
    CHECK(default_bin_width("sluf") == 21);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(histogram(std::vector<long long>{}, 1), std::invalid_argument);
  }
}

TEST_CASE("mode finding") {
  std::vector<long long> v;
  for (int i = 0; i < 50; ++i) v.push_back(100 + i % 3);
  for (int i = 0; i < 30; ++i) v.push_back(280 + i % 5);
  v.push_back(900);
  const auto modes = find_modes(v, 20, 0.05);
  REQUIRE(modes.size() == 2);
  CHECK(modes[0].count == 50);
  CHECK(modes[0].peak == 100);
  CHECK(modes[1].location == doctest::Approx(282.0));
}

TEST_CASE("csv emission and parsing") {
  SUBCASE("empty record list gives a header-only file") {
    CHECK(records_to_csv({}) == std::string(kCsvHeader) + "\n");
    CHECK(records_from_csv(records_to_csv({})).empty());
  }
  SUBCASE("round trip") {
    const auto records = run_batch(small_config());
    const auto back = records_from_csv(records_to_csv(records));
    CHECK(back == records);
  }
  SUBCASE("doubles are written in shortest round-trip form") {
    CHECK(format_double(0.005) == "0.005");
    CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
    CHECK(format_double(0.0) == "0");
  }
  SUBCASE("malformed input") {
    CHECK_THROWS_AS(records_from_csv("a,b\n"), std::invalid_argument);
    CHECK_THROWS_AS(records_from_csv(std::string(kCsvHeader) + "\naluf,3,0.1\n"), std::invalid_argument);
    CHECK_THROWS_AS(records_from_csv(std::string(kCsvHeader) + "\naluf,3,x,0,0,0,0,0,0\n"),
                    std::invalid_argument);
  }
  SUBCASE("file row count") {
    ExperimentConfig cfg;
    cfg.decoder = DecoderChoice::Aluf;
    cfg.distances = {9};
    cfg.p = 0.005;
    cfg.samples = 1000;
    cfg.seed = 5;
    const auto records = run_batch(cfg);
    const std::string path = temp_path("rows.csv");
    emit(records, summarize(records), "csv", path);
    const std::string text = read_text_file(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
    CHECK(load_records(path) == records);
    std::remove(path.c_str());
  }
}

TEST_CASE("json emission") {
  const auto records = run_batch(small_config());
  const SummaryStats stats = summarize(records);
  CHECK(stats.groups.size() == 4);
  CHECK(stats.slopes.empty());  // only two distances
  const std::string path = temp_path("out.json");
  emit(records, stats, "json", path);
  const std::string first = read_text_file(path);
  emit(records, stats, "json", path);
  CHECK(read_text_file(path) == first);
  CHECK(load_records(path) == records);
  const json j = json::parse(first);
  CHECK(j["groups"][0]["decoder"] == "aluf");
  CHECK(j["groups"][0]["histogram"]["width"] == 1);
  CHECK(j["groups"][2]["histogram"]["width"] == 21);
  std::remove(path.c_str());
}

TEST_CASE("summary slopes need three distances") {
  ExperimentConfig cfg = small_config();
  cfg.decoder = DecoderChoice::Aluf;
  cfg.distances = {3, 5, 7};
  const SummaryStats stats = summarize(run_batch(cfg));
  REQUIRE(stats.slopes.size() == 1);
  CHECK(stats.slopes[0].decoder == "aluf");
  CHECK(stats.slopes[0].fit.m > 0);
}

TEST_CASE("io failures name the path") {
  try {
    write_text_file("/nonexistent-dir/x.csv", "x");
    FAIL("expected a throw");
  } catch (const std::runtime_error& ex) {
    CHECK(std::string(ex.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(load_records("/nonexistent-dir/x.csv"), std::runtime_error);
}

TEST_CASE("staging dominates the strictly local runtime at d = 15") {
  ExperimentConfig cfg;
  cfg.decoder = DecoderChoice::Both;
  cfg.distances = {15};
  cfg.p = 0.005;
  cfg.samples = 40;
  cfg.seed = 15;
  const SummaryStats stats = summarize(run_batch(cfg));
  REQUIRE(stats.groups.size() == 2);
  const double aluf = stats.groups[0].mean;
  const double sluf = stats.groups[1].mean;
  CAPTURE(aluf);
  CAPTURE(sluf);
  CHECK(1.0 - aluf / sluf > 0.8);
}

TEST_CASE("almost-local validation times are unimodal") {
  ExperimentConfig cfg;
  cfg.decoder = DecoderChoice::Aluf;
  cfg.distances = {9};
  cfg.p = 0.005;
  cfg.samples = 300;
  cfg.seed = 16;
  std::vector<long long> v;
  for (const RuntimeRecord& r : run_batch(cfg)) v.push_back(r.validation_timesteps);
  CHECK(find_modes(v, 10, 0.01).size() == 1);
}
