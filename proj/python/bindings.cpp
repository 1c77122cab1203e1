#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "coexsim/experiment.hpp"
#include "coexsim/radio.hpp"
#include "coexsim/spectrum.hpp"

namespace py = pybind11;
using namespace coexsim;

namespace {

SimTime from_seconds(double s) { return SimTime{std::llround(s * 1e6)}; }
double to_seconds(SimTime t) { return static_cast<double>(t.count()) * 1e-6; }

py::dict summary_dict(const MetricsSummary& m) {
  py::dict d;
  d["sent"] = m.sent;
  d["delivered"] = m.delivered;
  d["frames_with_errors"] = m.frames_with_errors;
  d["bytes_with_errors"] = m.bytes_with_errors;
  d["not_received"] = m.not_received;
  d["access_failures"] = m.access_failures;
  d["queue_drops"] = m.queue_drops;
  d["delivered_bytes"] = m.delivered_bytes;
  d["throughput_bps"] = m.throughput_bps;
  d["avg_e2e_delay_s"] = m.avg_e2e_delay_s;
  d["avg_jitter_s"] = m.avg_jitter_s;
  d["empty"] = m.empty;
  return d;
}

/// Seconds-valued property over a SimTime member.
template <SimTime SimulationConfig::*Member>
void seconds_property(py::class_<SimulationConfig>& cls, const char* name) {
  cls.def_property(
      name, [](const SimulationConfig& c) { return to_seconds(c.*Member); },
      [](SimulationConfig& c, double s) { c.*Member = from_seconds(s); });
}

}  // namespace

PYBIND11_MODULE(_coexsim, m) {
  m.doc() = "802.15.4 / 802.11b coexistence simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CellError>(m, "CellError", PyExc_RuntimeError);

  m.attr("CSV_HEADER") = std::string(kCsvHeader);

  m.def("wpan_center", &wpan_center, py::arg("channel"), "802.15.4 channel center in MHz.");
  m.def(
      "wlan_span",
      [](int n) {
        const Band b = wlan_span(n);
        return py::make_tuple(b.low_mhz, b.high_mhz);
      },
      py::arg("channel"), "(low, high) MHz of an 802.11b channel.");

  py::class_<Overlap>(m, "Overlap")
      .def_readonly("overlapping", &Overlap::overlapping)
      .def_readonly("mhz", &Overlap::mhz)
      .def("__bool__", [](const Overlap& o) { return o.overlapping; })
      .def("__repr__", [](const Overlap& o) {
        return "Overlap(overlapping=" + std::string(o.overlapping ? "True" : "False") +
               ", mhz=" + std::to_string(o.mhz) + ")";
      });
  m.def("overlaps", &overlaps, py::arg("wlan_channel"), py::arg("wpan_channel"));

  m.def("path_loss_db", &path_loss_db, py::arg("distance_m"), py::arg("exponent") = 2.0);
  m.def(
      "airtime_us",
      [](std::int64_t payload, std::int64_t overhead, std::int64_t rate) {
        return airtime(payload, overhead, rate).count();
      },
      py::arg("payload_bytes"), py::arg("overhead_bytes"), py::arg("rate_bps"));

  py::class_<SimulationConfig> cfg(m, "SimulationConfig");
  cfg.def(py::init<>())
      .def_property(
          "topology", [](const SimulationConfig& c) { return std::string(to_string(c.topology)); },
          [](SimulationConfig& c, const std::string& s) { c.topology = parse_topology(s); })
      .def_property(
          "mobility", [](const SimulationConfig& c) { return std::string(to_string(c.mobility)); },
          [](SimulationConfig& c, const std::string& s) { c.mobility = parse_mobility(s); })
      .def_readwrite("seed", &SimulationConfig::seed)
      .def_readwrite("wpan_payload_bytes", &SimulationConfig::wpan_payload_bytes)
      .def_readwrite("wlan_payload_bytes", &SimulationConfig::wlan_payload_bytes)
      .def_readwrite("wpan_tx_power_dbm", &SimulationConfig::wpan_tx_power_dbm)
      .def_readwrite("wlan_tx_power_dbm", &SimulationConfig::wlan_tx_power_dbm)
      .def_readwrite("wpan_channel", &SimulationConfig::wpan_channel)
      .def_readwrite("wlan_channel", &SimulationConfig::wlan_channel)
      .def_readwrite("wlan_transmitters", &SimulationConfig::wlan_transmitters)
      .def_readwrite("speed_mps", &SimulationConfig::speed_mps)
      .def_readwrite("path_loss_exponent", &SimulationConfig::path_loss_exponent)
      .def_readwrite("noise_floor_dbm", &SimulationConfig::noise_floor_dbm)
      .def_readwrite("sinr_threshold_db", &SimulationConfig::sinr_threshold_db);
  seconds_property<&SimulationConfig::duration>(cfg, "duration_s");
  seconds_property<&SimulationConfig::wpan_interval>(cfg, "wpan_interval_s");
  seconds_property<&SimulationConfig::wlan_interval>(cfg, "wlan_interval_s");
  seconds_property<&SimulationConfig::wpan_phase_offset>(cfg, "wpan_phase_offset_s");
  seconds_property<&SimulationConfig::wlan_phase_offset>(cfg, "wlan_phase_offset_s");

  m.def(
      "run_simulation",
      [](const SimulationConfig& c) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_simulation(c);
        }
        py::dict out = summary_dict(r.metrics);
        out["events"] = r.events;
        out["wlan_frames"] = r.wlan.frames_generated;
        out["wlan_delivered"] = r.wlan.delivered;
        return out;
      },
      py::arg("config"), "Runs one simulation and returns its WPAN metrics.");

  m.def(
      "build_scenario",
      [](const std::string& topology, std::uint64_t seed) {
        const Scenario s = build_scenario(parse_topology(topology), seed);
        py::list nodes;
        for (const NodeSpec& n : s.nodes) {
          py::dict d;
          d["id"] = n.id;
          d["role"] = std::string(to_string(n.role));
          d["x"] = n.position.x;
          d["y"] = n.position.y;
          d["transmitter"] = n.transmitter;
          d["destination"] = n.destination ? py::cast(*n.destination) : py::none();
          nodes.append(d);
        }
        return nodes;
      },
      py::arg("topology"), py::arg("seed") = 5);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_property_readonly("topologies",
                             [](const ExperimentConfig& c) {
                               std::vector<std::string> out;
                               for (auto t : c.topologies) out.emplace_back(to_string(t));
                               return out;
                             })
      .def_property_readonly("mobility",
                             [](const ExperimentConfig& c) {
                               std::vector<std::string> out;
                               for (auto t : c.mobility) out.emplace_back(to_string(t));
                               return out;
                             })
      .def_property_readonly("intervals_s",
                             [](const ExperimentConfig& c) {
                               std::vector<double> out;
                               for (auto t : c.intervals()) out.push_back(to_seconds(t));
                               return out;
                             })
      .def_readonly("seeds", &ExperimentConfig::seeds)
      .def_readonly("out_dir", &ExperimentConfig::out_dir)
      .def_property_readonly("duration_s",
                             [](const ExperimentConfig& c) { return to_seconds(c.base.duration); });

  m.def("parse_config", &parse_config, py::arg("args") = std::vector<std::string>{},
        "Builds a sweep from command-line style arguments.");

  py::class_<SweepRow>(m, "SweepRow")
      .def_property_readonly("topology",
                             [](const SweepRow& r) { return std::string(to_string(r.topology)); })
      .def_property_readonly("mobility",
                             [](const SweepRow& r) { return std::string(to_string(r.mobility)); })
      .def_property_readonly("interval_s", [](const SweepRow& r) { return to_seconds(r.interval); })
      .def_readonly("seed", &SweepRow::seed)
      .def_property_readonly("metrics", [](const SweepRow& r) { return summary_dict(r.metrics); });

  m.def(
      "run_sweep",
      [](const ExperimentConfig& c) {
        py::gil_scoped_release release;
        return run_sweep(c);
      },
      py::arg("config"));
  m.def("to_csv", [](const std::vector<SweepRow>& rows) { return to_csv(rows); });
  m.def(
      "write_csv", [](const std::vector<SweepRow>& rows, const std::string& path) {
        write_csv(rows, path);
      },
      py::arg("rows"), py::arg("path"));
  m.def(
      "emit_plot_data",
      [](const std::vector<SweepRow>& rows, const std::string& dir) {
        return emit_plot_data(rows, dir);
      },
      py::arg("rows"), py::arg("directory"));
}
