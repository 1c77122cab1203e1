#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coexsim/metrics.hpp"
#include "coexsim/scenario.hpp"
#include "coexsim/simulation.hpp"

namespace CLI {
class App;
}

namespace coexsim {

/// One sweep: the cross product of topologies, mobility models, WPAN packet
/// intervals and seeds, each cell a full simulation built from `base`.
struct ExperimentConfig {
  std::vector<Topology> topologies{Topology::Circular, Topology::Grid, Topology::Random};
  std::vector<MobilityModel> mobility{MobilityModel::Static, MobilityModel::RandomWaypoint};
  double interval_start_s = 0.1;
  double interval_end_s = 1.0;
  double interval_step_s = 0.1;
  std::vector<std::uint64_t> seeds{5};
  std::string out_dir = "coexsim-out";
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;
  SimulationConfig base;

  /// Throws ConfigError.
  void validate() const;
  /// start, start + step, ... <= end, rounded to whole microseconds.
  std::vector<SimTime> intervals() const;
};

/// Raw command-line values; unset flags leave the file/default value alone.
struct CliOptions {
  std::vector<std::string> topology;
  std::vector<std::string> mobility;
  std::optional<double> interval_start;
  std::optional<double> interval_end;
  std::optional<double> interval_step;
  std::optional<double> interval;
  std::vector<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<int> wlan_channel;
  std::optional<int> wpan_channel;
  std::optional<int> wlan_transmitters;
  std::optional<double> wpan_phase_offset;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
};

/// Registers every flag on `app`, bound to `opts`.
void add_cli_options(CLI::App& app, CliOptions& opts);

/// Defaults, then the --config file, then flags. Throws ConfigError.
ExperimentConfig resolve_config(const CliOptions& opts);

/// Parses `args` (without the program name). Throws ConfigError for unknown
/// flags, malformed numbers, or an invalid sweep.
ExperimentConfig parse_config(const std::vector<std::string>& args);

void apply_scenario_file(ExperimentConfig& cfg, const ScenarioFile& file);

struct SweepRow {
  Topology topology = Topology::Circular;
  MobilityModel mobility = MobilityModel::Static;
  SimTime interval{0};
  std::uint64_t seed = 0;
  MetricsSummary metrics;
};

class CellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SimulationConfig for one cell of the sweep.
SimulationConfig cell_config(const ExperimentConfig& cfg, Topology topology,
                             MobilityModel mobility, SimTime interval, std::uint64_t seed);

/// Runs every cell (in parallel when jobs != 1) and returns rows ordered by
/// (topology, mobility, interval, seed). Throws CellError naming the first
/// failing cell.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "topology,mobility,interval_s,seed,sent,delivered,frames_with_errors,bytes_with_errors,"
    "throughput_bps,avg_e2e_delay_s,avg_jitter_s";

/// Header plus one line per row; reals in fixed 6-decimal notation.
std::string to_csv(std::span<const SweepRow> rows);
/// Throws std::invalid_argument for an empty row set and std::runtime_error
/// when the file cannot be written.
void write_csv(std::span<const SweepRow> rows, const std::string& path);
std::vector<SweepRow> parse_csv(std::string_view text);
std::vector<SweepRow> read_csv(const std::string& path);

enum class PlotMetric { Errors, Throughput, Delay, Jitter };

std::string_view to_string(PlotMetric metric);
inline constexpr PlotMetric kPlotMetrics[] = {PlotMetric::Errors, PlotMetric::Throughput,
                                              PlotMetric::Delay, PlotMetric::Jitter};

/// Whitespace-separated series for one figure panel: interval_s followed by
/// one column per topology, each the mean over seeds of the CSV value.
std::string render_series(std::span<const SweepRow> rows, PlotMetric metric,
                          MobilityModel mobility);

/// Writes <metric>_<mobility>.dat for every metric and mobility model
/// present, plus a gnuplot script. Returns the data file paths.
std::vector<std::string> emit_plot_data(std::span<const SweepRow> rows, const std::string& dir);

}  // namespace coexsim
