#include "coexsim/experiment.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace coexsim {

namespace {

SimTime seconds_to_us(double s, std::string_view what) {
  if (!std::isfinite(s)) throw ConfigError(fmt::format("{} is not finite", what));
  return SimTime{std::llround(s * 1e6)};
}

double us_to_seconds(SimTime t) { return static_cast<double>(t.count()) * 1e-6; }

}  // namespace

void ExperimentConfig::validate() const {
  if (topologies.empty()) throw ConfigError("no topology selected");
  if (mobility.empty()) throw ConfigError("no mobility model selected");
  if (seeds.empty()) throw ConfigError("no seed given");
  if (!(interval_step_s > 0.0)) throw ConfigError("interval step must be positive");
  if (!(interval_start_s > 0.0)) throw ConfigError("interval start must be positive");
  if (interval_start_s > interval_end_s) throw ConfigError("interval start exceeds interval end");
  if (intervals().front() <= SimTime{0}) throw ConfigError("interval rounds to zero microseconds");
  try {
    base.validate();
  } catch (const std::logic_error& e) {
    throw ConfigError(e.what());
  }
}

std::vector<SimTime> ExperimentConfig::intervals() const {
  std::vector<SimTime> out;
  // Tolerance absorbs binary representation error in start + i * step.
  const double tolerance = interval_step_s * 1e-9;
  for (std::int64_t i = 0;; ++i) {
    const double s = interval_start_s + static_cast<double>(i) * interval_step_s;
    if (s > interval_end_s + tolerance) break;
    out.push_back(seconds_to_us(s, "interval"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

void add_cli_options(CLI::App& app, CliOptions& o) {
  app.add_option("--topology", o.topology, "circular, grid, random (comma list)")
      ->delimiter(',')
      ->check(CLI::IsMember({"circular", "grid", "random"}));
  app.add_option("--mobility", o.mobility, "static, rwp (comma list)")
      ->delimiter(',')
      ->check(CLI::IsMember({"static", "rwp"}));
  app.add_option("--interval-start", o.interval_start, "first WPAN packet interval [s]");
  app.add_option("--interval-end", o.interval_end, "last WPAN packet interval [s]");
  app.add_option("--interval-step", o.interval_step, "sweep step [s]");
  app.add_option("--interval", o.interval, "single WPAN packet interval [s]");
  app.add_option("--seed", o.seed, "replication seeds (comma list)")->delimiter(',');
  app.add_option("--duration", o.duration, "simulated time per run [s]");
  app.add_option("--wlan-channel", o.wlan_channel, "802.11b channel 1..11");
  app.add_option("--wpan-channel", o.wpan_channel, "802.15.4 channel 1..16");
  app.add_option("--wlan-transmitters", o.wlan_transmitters, "active WLAN sources");
  app.add_option("--wpan-phase-offset", o.wpan_phase_offset, "first WPAN packet time [s]");
  app.add_option("--config", o.config, "scenario file (key = value)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
}

void apply_scenario_file(ExperimentConfig& cfg, const ScenarioFile& f) {
  SimulationConfig& b = cfg.base;
  if (f.topologies) cfg.topologies = *f.topologies;
  if (f.mobility) cfg.mobility = *f.mobility;
  if (f.seeds) cfg.seeds = *f.seeds;
  if (f.duration_s) b.duration = seconds_to_us(*f.duration_s, "duration_s");
  if (f.interval_start_s) cfg.interval_start_s = *f.interval_start_s;
  if (f.interval_end_s) cfg.interval_end_s = *f.interval_end_s;
  if (f.interval_step_s) cfg.interval_step_s = *f.interval_step_s;
  if (f.wpan_interval_s) cfg.interval_start_s = cfg.interval_end_s = *f.wpan_interval_s;
  if (f.wlan_interval_s) b.wlan_interval = seconds_to_us(*f.wlan_interval_s, "wlan_interval_s");
  if (f.wpan_phase_offset_s) {
    b.wpan_phase_offset = seconds_to_us(*f.wpan_phase_offset_s, "wpan_phase_offset_s");
  }
  if (f.wlan_phase_offset_s) {
    b.wlan_phase_offset = seconds_to_us(*f.wlan_phase_offset_s, "wlan_phase_offset_s");
  }
  if (f.wpan_payload_bytes) b.wpan_payload_bytes = *f.wpan_payload_bytes;
  if (f.wlan_payload_bytes) b.wlan_payload_bytes = *f.wlan_payload_bytes;
  if (f.wpan_tx_power_dbm) b.wpan_tx_power_dbm = *f.wpan_tx_power_dbm;
  if (f.wlan_tx_power_dbm) b.wlan_tx_power_dbm = *f.wlan_tx_power_dbm;
  if (f.wpan_channel) b.wpan_channel = *f.wpan_channel;
  if (f.wlan_channel) b.wlan_channel = *f.wlan_channel;
  if (f.speed_mps) b.speed_mps = *f.speed_mps;
  if (f.wlan_transmitters) b.wlan_transmitters = *f.wlan_transmitters;
  if (f.path_loss_exponent) b.path_loss_exponent = *f.path_loss_exponent;
  if (f.sinr_threshold_db) b.sinr_threshold_db = *f.sinr_threshold_db;
  if (f.noise_floor_dbm) b.noise_floor_dbm = *f.noise_floor_dbm;
}

ExperimentConfig resolve_config(const CliOptions& o) {
  ExperimentConfig cfg;
  if (o.config) apply_scenario_file(cfg, load_scenario_file(*o.config));

  SimulationConfig& b = cfg.base;
  if (!o.topology.empty()) {
    cfg.topologies.clear();
    for (const auto& t : o.topology) cfg.topologies.push_back(parse_topology(t));
  }
  if (!o.mobility.empty()) {
    cfg.mobility.clear();
    for (const auto& m : o.mobility) cfg.mobility.push_back(parse_mobility(m));
  }
  if (o.interval_start) cfg.interval_start_s = *o.interval_start;
  if (o.interval_end) cfg.interval_end_s = *o.interval_end;
  if (o.interval_step) cfg.interval_step_s = *o.interval_step;
  if (o.interval) cfg.interval_start_s = cfg.interval_end_s = *o.interval;
  if (!o.seed.empty()) cfg.seeds = o.seed;
  if (o.duration) b.duration = seconds_to_us(*o.duration, "--duration");
  if (o.wlan_channel) b.wlan_channel = *o.wlan_channel;
  if (o.wpan_channel) b.wpan_channel = *o.wpan_channel;
  if (o.wlan_transmitters) b.wlan_transmitters = *o.wlan_transmitters;
  if (o.wpan_phase_offset) {
    b.wpan_phase_offset = seconds_to_us(*o.wpan_phase_offset, "--wpan-phase-offset");
  }
  if (o.out) cfg.out_dir = *o.out;
  if (o.jobs) cfg.jobs = *o.jobs;

  std::sort(cfg.topologies.begin(), cfg.topologies.end());
  cfg.topologies.erase(std::unique(cfg.topologies.begin(), cfg.topologies.end()),
                       cfg.topologies.end());
  std::sort(cfg.mobility.begin(), cfg.mobility.end());
  cfg.mobility.erase(std::unique(cfg.mobility.begin(), cfg.mobility.end()), cfg.mobility.end());
  std::sort(cfg.seeds.begin(), cfg.seeds.end());
  cfg.seeds.erase(std::unique(cfg.seeds.begin(), cfg.seeds.end()), cfg.seeds.end());

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"coexsim"};
  CliOptions opts;
  add_cli_options(app, opts);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  try {
    return resolve_config(opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Sweep

SimulationConfig cell_config(const ExperimentConfig& cfg, Topology topology,
                             MobilityModel mobility, SimTime interval, std::uint64_t seed) {
  SimulationConfig c = cfg.base;
  c.topology = topology;
  c.mobility = mobility;
  c.wpan_interval = interval;
  c.seed = seed;
  return c;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (Topology t : cfg.topologies) {
    for (MobilityModel m : cfg.mobility) {
      for (SimTime interval : cfg.intervals()) {
        for (std::uint64_t seed : cfg.seeds) rows.push_back({t, m, interval, seed, {}});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.topology, a.mobility, a.interval, a.seed) <
           std::tie(b.topology, b.mobility, b.interval, b.seed);
  });

  std::vector<std::string> errors(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      try {
        row.metrics =
            run_simulation(cell_config(cfg, row.topology, row.mobility, row.interval, row.seed))
                .metrics;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  unsigned jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, rows.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (errors[i].empty()) continue;
    const SweepRow& r = rows[i];
    throw CellError(fmt::format("cell topology={} mobility={} interval_s={:.6f} seed={}: {}",
                                to_string(r.topology), to_string(r.mobility),
                                us_to_seconds(r.interval), r.seed, errors[i]));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

std::string to_csv(std::span<const SweepRow> rows) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const SweepRow& r : rows) {
    const MetricsSummary& m = r.metrics;
    out += fmt::format("{},{},{:.6f},{},{},{},{},{},{:.6f},{:.6f},{:.6f}\n", to_string(r.topology),
                       to_string(r.mobility), us_to_seconds(r.interval), r.seed, m.sent,
                       m.delivered, m.frames_with_errors, m.bytes_with_errors, m.throughput_bps,
                       m.avg_e2e_delay_s, m.avg_jitter_s);
  }
  return out;
}

void write_csv(std::span<const SweepRow> rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("no sweep rows to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << to_csv(rows);
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1) {
      if (line != kCsvHeader) throw ConfigError("CSV header mismatch");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 11) throw ConfigError(fmt::format("CSV line {}: expected 11 fields", line_no));
    const auto what = fmt::format("CSV line {}", line_no);
    SweepRow r;
    r.topology = parse_topology(f[0]);
    r.mobility = parse_mobility(f[1]);
    r.interval = seconds_to_us(parse_number(f[2], what), what);
    r.seed = static_cast<std::uint64_t>(parse_integer(f[3], what));
    r.metrics.sent = static_cast<std::uint64_t>(parse_integer(f[4], what));
    r.metrics.delivered = static_cast<std::uint64_t>(parse_integer(f[5], what));
    r.metrics.frames_with_errors = static_cast<std::uint64_t>(parse_integer(f[6], what));
    r.metrics.bytes_with_errors = static_cast<std::uint64_t>(parse_integer(f[7], what));
    r.metrics.throughput_bps = parse_number(f[8], what);
    r.metrics.avg_e2e_delay_s = parse_number(f[9], what);
    r.metrics.avg_jitter_s = parse_number(f[10], what);
    r.metrics.empty = r.metrics.delivered == 0;
    rows.push_back(r);
  }
  return rows;
}

std::vector<SweepRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

// ---------------------------------------------------------------------------
// Plot data

std::string_view to_string(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::Errors: return "errors";
    case PlotMetric::Throughput: return "throughput";
    case PlotMetric::Delay: return "delay";
    case PlotMetric::Jitter: return "jitter";
  }
  return "unknown";
}

namespace {

std::string_view column_of(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::Errors: return "bytes_with_errors";
    case PlotMetric::Throughput: return "throughput_bps";
    case PlotMetric::Delay: return "avg_e2e_delay_s";
    case PlotMetric::Jitter: return "avg_jitter_s";
  }
  return "";
}

/// The value as it appears in the CSV, so series derive from the CSV exactly.
double csv_value(const MetricsSummary& m, PlotMetric metric) {
  auto rounded = [](double v) { return std::stod(fmt::format("{:.6f}", v)); };
  switch (metric) {
    case PlotMetric::Errors: return static_cast<double>(m.bytes_with_errors);
    case PlotMetric::Throughput: return rounded(m.throughput_bps);
    case PlotMetric::Delay: return rounded(m.avg_e2e_delay_s);
    case PlotMetric::Jitter: return rounded(m.avg_jitter_s);
  }
  return 0.0;
}

}  // namespace

std::string render_series(std::span<const SweepRow> rows, PlotMetric metric,
                          MobilityModel mobility) {
  std::vector<Topology> topologies;
  std::map<SimTime, std::map<Topology, std::pair<double, int>>> table;
  for (const SweepRow& r : rows) {
    if (r.mobility != mobility) continue;
    if (std::find(topologies.begin(), topologies.end(), r.topology) == topologies.end()) {
      topologies.push_back(r.topology);
    }
    auto& cell = table[r.interval][r.topology];
    cell.first += csv_value(r.metrics, metric);
    cell.second += 1;
  }
  std::sort(topologies.begin(), topologies.end());

  std::string out = fmt::format("# {} ({}), mean over seeds\n# interval_s", column_of(metric),
                                to_string(mobility));
  for (Topology t : topologies) out += fmt::format(" {}", to_string(t));
  out += '\n';
  for (const auto& [interval, cells] : table) {
    out += fmt::format("{:.6f}", us_to_seconds(interval));
    for (Topology t : topologies) {
      const auto it = cells.find(t);
      if (it == cells.end()) {
        out += " NaN";
      } else {
        out += fmt::format(" {:.6f}", it->second.first / it->second.second);
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> emit_plot_data(std::span<const SweepRow> rows, const std::string& dir) {
  if (rows.empty()) throw std::invalid_argument("no sweep rows to plot");
  std::filesystem::create_directories(dir);

  std::vector<MobilityModel> present;
  for (const SweepRow& r : rows) {
    if (std::find(present.begin(), present.end(), r.mobility) == present.end()) {
      present.push_back(r.mobility);
    }
  }
  std::sort(present.begin(), present.end());

  std::vector<std::string> written;
  std::string script = "set terminal pngcairo size 800,600\nset xlabel 'WPAN packet interval (s)'\n";
  for (PlotMetric metric : kPlotMetrics) {
    for (MobilityModel m : present) {
      const std::string name = fmt::format("{}_{}", to_string(metric), to_string(m));
      const std::string path = (std::filesystem::path(dir) / (name + ".dat")).string();
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
      out << render_series(rows, metric, m);
      written.push_back(path);

      script += fmt::format(
          "set output '{0}.png'\nset ylabel '{1}'\n"
          "plot for [c=2:4] '{0}.dat' using 1:c with linespoints title columnheader(c)\n",
          name, column_of(metric));
    }
  }
  const std::string gp = (std::filesystem::path(dir) / "plots.gp").string();
  std::ofstream(gp, std::ios::binary) << script;
  return written;
}

}  // namespace coexsim
