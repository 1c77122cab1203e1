#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coexsim/experiment.hpp"

using namespace coexsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("coexsim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig short_sweep() {
  ExperimentConfig cfg;
  cfg.base.duration = SimTime{10'000'000};
  return cfg;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults") {
  const auto cfg = parse_config({});
  CHECK(cfg.topologies == std::vector{Topology::Circular, Topology::Grid, Topology::Random});
  CHECK(cfg.mobility == std::vector{MobilityModel::Static, MobilityModel::RandomWaypoint});
  CHECK(cfg.intervals().size() == 10);
  CHECK(cfg.intervals().front() == SimTime{100'000});
  CHECK(cfg.intervals().back() == SimTime{1'000'000});
  CHECK(cfg.base.duration == SimTime{100'000'000});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{5});
}

TEST_CASE("single interval") {
  const auto cfg = parse_config({"--topology", "grid", "--interval", "0.5"});
  CHECK(cfg.topologies == std::vector{Topology::Grid});
  REQUIRE(cfg.intervals().size() == 1);
  CHECK(cfg.intervals()[0] == SimTime{500'000});
  const auto one = parse_config({"--topology", "grid", "--interval", "0.5", "--mobility", "static"});
  CHECK(one.mobility.size() * one.topologies.size() * one.intervals().size() == 1);
}

TEST_CASE("bad arguments") {
  CHECK_THROWS_AS(parse_config({"--interval-step", "0"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--interval-step", "-0.1"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--frobnicate"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--duration", "abc"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--topology", "star"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--interval-start", "2", "--interval-end", "1"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--duration", "0"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"--wlan-channel", "14"}), ConfigError);
}

TEST_CASE("flags override the scenario file") {
  const auto dir = scratch("cfg");
  const auto path = (dir / "run.cfg").string();
  std::ofstream(path) << "topology = random\nduration_s = 5\nseed = 3, 1\nwlan_channel = 6\n";
  const auto from_file = parse_config({"--config", path});
  CHECK(from_file.topologies == std::vector{Topology::Random});
  CHECK(from_file.base.duration == SimTime{5'000'000});
  CHECK(from_file.seeds == std::vector<std::uint64_t>{1, 3});
  CHECK(from_file.base.wlan_channel == 6);

  const auto flagged = parse_config({"--config", path, "--duration", "7", "--seed", "9"});
  CHECK(flagged.base.duration == SimTime{7'000'000});
  CHECK(flagged.seeds == std::vector<std::uint64_t>{9});
  CHECK(flagged.topologies == std::vector{Topology::Random});

  CHECK_THROWS(parse_config({"--config", (dir / "missing.cfg").string()}));
}

TEST_CASE("sweep cardinality and ordering") {
  const auto rows = run_sweep(short_sweep());
  CHECK(rows.size() == 60);
  CHECK(std::is_sorted(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.topology, a.mobility, a.interval, a.seed) <
           std::tie(b.topology, b.mobility, b.interval, b.seed);
  }));
  const auto csv = to_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
  CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);
}

TEST_CASE("parallel and serial sweeps write the same bytes") {
  auto cfg = short_sweep();
  cfg.seeds = {5, 11};
  cfg.jobs = 1;
  const auto serial = to_csv(run_sweep(cfg));
  cfg.jobs = 8;
  CHECK(to_csv(run_sweep(cfg)) == serial);
  CHECK(to_csv(run_sweep(cfg)) == serial);
}

TEST_CASE("failing cell is identified") {
  auto cfg = short_sweep();
  cfg.topologies = {Topology::Grid};
  cfg.base.wlan_transmitters = 20;  // leaves no receiver
  CHECK_THROWS_WITH_AS(run_sweep(cfg), doctest::Contains("topology=grid"), CellError);
}

TEST_CASE("CSV round trip and plot data") {
  const auto rows = run_sweep(short_sweep());
  const auto dir = scratch("plots");
  const auto csv_path = (dir / "sweep.csv").string();
  write_csv(rows, csv_path);
  const auto back = read_csv(csv_path);
  REQUIRE(back.size() == rows.size());
  CHECK(to_csv(back) == to_csv(rows));

  const auto files = emit_plot_data(rows, dir.string());
  CHECK(files.size() == 8);
  for (const auto& f : files) CHECK(fs::exists(f));
  CHECK(fs::exists(dir / "plots.gp"));
  for (auto metric : kPlotMetrics) {
    for (auto m : {MobilityModel::Static, MobilityModel::RandomWaypoint}) {
      CHECK(render_series(back, metric, m) == render_series(rows, metric, m));
    }
  }
  const auto series = render_series(rows, PlotMetric::Throughput, MobilityModel::Static);
  CHECK(series.find("circular grid random") != std::string::npos);
  CHECK(std::count(series.begin(), series.end(), '\n') == 12);
}

TEST_CASE("empty or unwritable output") {
  CHECK_THROWS_AS(write_csv({}, "/tmp/never.csv"), std::invalid_argument);
  CHECK_THROWS_AS(emit_plot_data({}, "/tmp"), std::invalid_argument);
  std::vector<SweepRow> one(1);
  CHECK_THROWS_AS(write_csv(one, "/nonexistent-dir/x/sweep.csv"), std::runtime_error);
  CHECK_THROWS_AS(parse_csv("wrong,header\n"), ConfigError);
}

}
