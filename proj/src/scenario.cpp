#include "coexsim/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <set>

#include "coexsim/random.hpp"

namespace coexsim {

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::Circular: return "circular";
    case Topology::Grid: return "grid";
    case Topology::Random: return "random";
  }
  return "unknown";
}

Topology parse_topology(std::string_view name) {
  if (name == "circular") return Topology::Circular;
  if (name == "grid") return Topology::Grid;
  if (name == "random") return Topology::Random;
  throw std::invalid_argument(fmt::format("unknown topology '{}'", name));
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Rfd: return "rfd";
    case Role::Coordinator: return "coordinator";
    case Role::Wlan: return "wlan";
  }
  return "unknown";
}

std::string_view to_string(MobilityModel model) {
  return model == MobilityModel::Static ? "static" : "rwp";
}

MobilityModel parse_mobility(std::string_view name) {
  if (name == "static" || name == "off") return MobilityModel::Static;
  if (name == "rwp" || name == "on") return MobilityModel::RandomWaypoint;
  throw std::invalid_argument(fmt::format("unknown mobility model '{}'", name));
}

std::vector<SimTime> cbr_fire_times(const TrafficSpec& spec, SimTime duration) {
  if (spec.interval <= SimTime{0}) throw std::invalid_argument("CBR interval must be positive");
  std::vector<SimTime> times;
  if (duration == SimTime{0}) {
    if (spec.start_offset == SimTime{0} && spec.max_packets.value_or(1) > 0) {
      times.push_back(SimTime{0});
    }
    return times;
  }
  for (SimTime t = spec.start_offset; t < duration; t += spec.interval) {
    if (spec.max_packets && times.size() >= *spec.max_packets) break;
    times.push_back(t);
  }
  return times;
}

// ---------------------------------------------------------------------------
// Topologies

std::vector<EntityId> Scenario::wlan_transmitters() const {
  std::vector<EntityId> out;
  for (const NodeSpec& n : nodes) {
    if (n.role == Role::Wlan && n.transmitter) out.push_back(n.id);
  }
  return out;
}

namespace {

constexpr EntityId kRfd = 0;
constexpr EntityId kCoordinator = 1;
constexpr EntityId kFirstWlan = 2;

Scenario wpan_pair(Topology topology, std::uint64_t seed, const ScenarioParams& p,
                   Position coordinator, Position rfd) {
  Scenario s;
  s.topology = topology;
  s.seed = seed;
  s.bed = p.bed;
  s.rfd = kRfd;
  s.coordinator = kCoordinator;

  NodeSpec end_device{kRfd, Role::Rfd, rfd, p.wpan_radio, true, kCoordinator, p.wpan_traffic};
  NodeSpec pan{kCoordinator, Role::Coordinator, coordinator, p.wpan_radio, false, {}, {}};
  s.nodes.push_back(end_device);
  s.nodes.push_back(pan);
  return s;
}

void add_wlan(Scenario& s, const ScenarioParams& p, Position where) {
  NodeSpec n;
  n.id = static_cast<EntityId>(s.nodes.size());
  n.role = Role::Wlan;
  n.position = where;
  n.radio = p.wlan_radio;
  s.nodes.push_back(n);
}

/// Flags the given WLAN indices as transmitters, each aimed at its nearest
/// silent WLAN station (lowest id on ties).
void assign_transmitters(Scenario& s, const ScenarioParams& p,
                         const std::vector<std::size_t>& wlan_indices) {
  for (std::size_t i : wlan_indices) s.nodes.at(kFirstWlan + i).transmitter = true;

  for (NodeSpec& tx : s.nodes) {
    if (tx.role != Role::Wlan || !tx.transmitter) continue;
    double best = std::numeric_limits<double>::infinity();
    std::optional<EntityId> target;
    for (const NodeSpec& rx : s.nodes) {
      if (rx.role != Role::Wlan || rx.transmitter) continue;
      const double d = distance(tx.position, rx.position);
      if (d < best) {
        best = d;
        target = rx.id;
      }
    }
    if (!target) throw std::invalid_argument("no silent WLAN station left to receive");
    tx.destination = target;
    tx.traffic = p.wlan_traffic;
  }
}

std::vector<std::size_t> seeded_pick(std::uint64_t seed, Topology topology, std::size_t pool,
                                     std::size_t count) {
  Rng rng = make_rng(mix_key({seed, static_cast<std::uint64_t>(Stream::Layout),
                              static_cast<std::uint64_t>(topology), 0x7478}));
  std::vector<std::size_t> idx(pool);
  for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_below(rng, pool - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void check_counts(const ScenarioParams& p) {
  if (p.wlan_nodes < 0 || p.wlan_transmitters < 0 || p.wlan_transmitters > p.wlan_nodes) {
    throw std::invalid_argument(fmt::format("cannot pick {} transmitters from {} WLAN stations",
                                            p.wlan_transmitters, p.wlan_nodes));
  }
  if (p.wlan_transmitters > 0 && p.wlan_transmitters == p.wlan_nodes) {
    throw std::invalid_argument("every WLAN station transmits; none is left to receive");
  }
}

}  // namespace

Scenario build_circular(std::uint64_t seed, const ScenarioParams& p) {
  check_counts(p);
  const Position c = p.bed.center();
  Scenario s = wpan_pair(Topology::Circular, seed, p, c, {c.x - p.wpan_separation_m, c.y});
  const int n = p.wlan_nodes;
  for (int i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / n;
    add_wlan(s, p, {c.x + p.circle_radius_m * std::cos(angle),
                    c.y + p.circle_radius_m * std::sin(angle)});
  }
  std::vector<std::size_t> tx;
  for (int i = 0; i < p.wlan_transmitters; ++i) {
    tx.push_back(static_cast<std::size_t>(i * n / p.wlan_transmitters));
  }
  assign_transmitters(s, p, tx);
  return s;
}

Scenario build_grid(std::uint64_t seed, const ScenarioParams& p) {
  check_counts(p);
  const auto per_row = static_cast<std::size_t>(std::floor(p.bed.width_m / p.grid_pitch_m)) + 1;
  const auto rows = static_cast<std::size_t>(std::floor(p.bed.height_m / p.grid_pitch_m)) + 1;
  const std::size_t needed = 2 + static_cast<std::size_t>(p.wlan_nodes);
  if (needed > per_row * rows) {
    throw std::invalid_argument(fmt::format("{} nodes do not fit a {}x{} lattice", needed,
                                            per_row, rows));
  }

  std::vector<Position> lattice;
  for (std::size_t k = 0; k < needed; ++k) {
    lattice.push_back({static_cast<double>(k % per_row) * p.grid_pitch_m,
                       static_cast<double>(k / per_row) * p.grid_pitch_m});
  }

  // Coordinator: filled point nearest the center whose +x neighbour is filled too.
  const Position c = p.bed.center();
  std::size_t coord = needed;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < needed; ++k) {
    if ((k + 1) % per_row == 0) continue;
    const double d = distance(lattice[k], c);
    if (d < best) {
      best = d;
      coord = k;
    }
  }

  Scenario s = wpan_pair(Topology::Grid, seed, p, lattice[coord], lattice[coord + 1]);
  for (std::size_t k = 0; k < needed; ++k) {
    if (k == coord || k == coord + 1) continue;
    add_wlan(s, p, lattice[k]);
  }
  assign_transmitters(s, p,
                      seeded_pick(seed, Topology::Grid, static_cast<std::size_t>(p.wlan_nodes),
                                  static_cast<std::size_t>(p.wlan_transmitters)));
  return s;
}

Scenario build_random(std::uint64_t seed, const ScenarioParams& p) {
  check_counts(p);
  const Position c = p.bed.center();
  Scenario s = wpan_pair(Topology::Random, seed, p, c, {c.x - p.wpan_separation_m, c.y});

  Rng rng = make_rng(mix_key({seed, static_cast<std::uint64_t>(Stream::Layout),
                              static_cast<std::uint64_t>(Topology::Random)}));
  for (int i = 0; i < p.wlan_nodes; ++i) {
    Position where;
    bool clash = true;
    while (clash) {
      where = {uniform01(rng) * p.bed.width_m, uniform01(rng) * p.bed.height_m};
      clash = std::any_of(s.nodes.begin(), s.nodes.end(),
                          [&](const NodeSpec& n) { return n.position == where; });
    }
    add_wlan(s, p, where);
  }
  assign_transmitters(s, p,
                      seeded_pick(seed, Topology::Random, static_cast<std::size_t>(p.wlan_nodes),
                                  static_cast<std::size_t>(p.wlan_transmitters)));
  return s;
}

Scenario build_scenario(Topology topology, std::uint64_t seed, const ScenarioParams& params) {
  switch (topology) {
    case Topology::Circular: return build_circular(seed, params);
    case Topology::Grid: return build_grid(seed, params);
    case Topology::Random: return build_random(seed, params);
  }
  throw std::invalid_argument("unknown topology");
}

// ---------------------------------------------------------------------------
// Mobility

MobilityPath MobilityPath::stationary(Position where) {
  MobilityPath path;
  path.model_ = MobilityModel::Static;
  path.initial_ = where;
  return path;
}

MobilityPath MobilityPath::random_waypoint(Position start, const MobilityParams& params,
                                           std::uint64_t key, SimTime horizon) {
  if (!(params.speed_mps > 0.0)) throw std::invalid_argument("RWP speed must be positive");
  if (!params.bed.contains(start)) throw std::invalid_argument("RWP start outside the bed");

  MobilityPath path;
  path.model_ = MobilityModel::RandomWaypoint;
  path.initial_ = start;

  Rng rng = make_rng(key);
  Position here = start;
  SimTime t{0};
  while (t < horizon) {
    const Position next{uniform01(rng) * params.bed.width_m, uniform01(rng) * params.bed.height_m};
    const double d = distance(here, next);
    if (d <= 0.0) continue;
    const auto travel = static_cast<std::int64_t>(std::ceil(d / params.speed_mps * 1e6));
    path.legs_.push_back({t, t + SimTime{travel}, here, next});
    t += SimTime{travel};
    here = next;
    if (params.pause > SimTime{0}) {
      path.legs_.push_back({t, t + params.pause, here, here});
      t += params.pause;
    }
  }
  return path;
}

Position MobilityPath::position_at(SimTime t) const {
  if (legs_.empty()) return initial_;
  auto it = std::upper_bound(legs_.begin(), legs_.end(), t,
                             [](SimTime v, const Leg& leg) { return v < leg.depart; });
  std::size_t cursor = it == legs_.begin() ? 0 : static_cast<std::size_t>(it - legs_.begin()) - 1;
  return position_at(t, &cursor);
}

Position MobilityPath::position_at(SimTime t, std::size_t* cursor) const {
  if (t < SimTime{0}) throw std::invalid_argument("position requested at negative time");
  if (legs_.empty()) return initial_;
  std::size_t i = std::min(*cursor, legs_.size() - 1);
  if (legs_[i].depart > t) i = 0;
  while (i + 1 < legs_.size() && legs_[i].arrive <= t) ++i;
  *cursor = i;

  const Leg& leg = legs_[i];
  if (t >= leg.arrive) return leg.to;
  if (t <= leg.depart) return leg.from;
  const double f = static_cast<double>((t - leg.depart).count()) /
                   static_cast<double>((leg.arrive - leg.depart).count());
  return {leg.from.x + f * (leg.to.x - leg.from.x), leg.from.y + f * (leg.to.y - leg.from.y)};
}

// ---------------------------------------------------------------------------
// Scenario files

namespace {

constexpr std::array<std::string_view, 22> kKeys = {
    "topology",           "mobility",          "seed",
    "duration_s",         "wpan_interval_s",   "interval_start_s",
    "interval_end_s",     "interval_step_s",   "wlan_interval_s",
    "wpan_phase_offset_s", "wlan_phase_offset_s", "wpan_payload_bytes",
    "wlan_payload_bytes", "wpan_tx_power_dbm", "wlan_tx_power_dbm",
    "wpan_channel",       "wlan_channel",      "speed_mps",
    "wlan_transmitters",  "path_loss_exponent", "sinr_threshold_db",
    "noise_floor_dbm",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::span<const std::string_view> scenario_file_keys() { return kKeys; }

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty() || !std::isfinite(value)) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return value;
}

std::int64_t parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, text));
  }
  return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

ScenarioFile parse_scenario_file(std::istream& in, std::string_view source) {
  ScenarioFile f;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const auto where = fmt::format("{}:{}", source, line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}: expected 'key = value'", where));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
    }
    if (!seen.emplace(key).second) {
      throw ConfigError(fmt::format("{}: duplicate key '{}'", where, key));
    }
    const auto what = fmt::format("{}: {}", where, key);
    auto number = [&] { return parse_number(value, what); };
    auto integer = [&] { return static_cast<int>(parse_integer(value, what)); };

    try {
      if (key == "topology") {
        std::vector<Topology> list;
        for (auto item : split_list(value)) list.push_back(parse_topology(item));
        if (list.empty()) throw ConfigError(fmt::format("{}: empty list", what));
        f.topologies = list;
      } else if (key == "mobility") {
        if (value == "both") {
          f.mobility = {MobilityModel::Static, MobilityModel::RandomWaypoint};
        } else {
          std::vector<MobilityModel> list;
          for (auto item : split_list(value)) list.push_back(parse_mobility(item));
          if (list.empty()) throw ConfigError(fmt::format("{}: empty list", what));
          f.mobility = list;
        }
      } else if (key == "seed") {
        std::vector<std::uint64_t> list;
        for (auto item : split_list(value)) {
          const auto v = parse_integer(item, what);
          if (v < 0) throw ConfigError(fmt::format("{}: seeds must be non-negative", what));
          list.push_back(static_cast<std::uint64_t>(v));
        }
        if (list.empty()) throw ConfigError(fmt::format("{}: empty list", what));
        f.seeds = list;
      } else if (key == "duration_s") {
        f.duration_s = number();
      } else if (key == "wpan_interval_s") {
        f.wpan_interval_s = number();
      } else if (key == "interval_start_s") {
        f.interval_start_s = number();
      } else if (key == "interval_end_s") {
        f.interval_end_s = number();
      } else if (key == "interval_step_s") {
        f.interval_step_s = number();
      } else if (key == "wlan_interval_s") {
        f.wlan_interval_s = number();
      } else if (key == "wpan_phase_offset_s") {
        f.wpan_phase_offset_s = number();
      } else if (key == "wlan_phase_offset_s") {
        f.wlan_phase_offset_s = number();
      } else if (key == "wpan_payload_bytes") {
        f.wpan_payload_bytes = integer();
      } else if (key == "wlan_payload_bytes") {
        f.wlan_payload_bytes = integer();
      } else if (key == "wpan_tx_power_dbm") {
        f.wpan_tx_power_dbm = number();
      } else if (key == "wlan_tx_power_dbm") {
        f.wlan_tx_power_dbm = number();
      } else if (key == "wpan_channel") {
        f.wpan_channel = integer();
      } else if (key == "wlan_channel") {
        f.wlan_channel = integer();
      } else if (key == "speed_mps") {
        f.speed_mps = number();
      } else if (key == "wlan_transmitters") {
        f.wlan_transmitters = integer();
      } else if (key == "path_loss_exponent") {
        f.path_loss_exponent = number();
      } else if (key == "sinr_threshold_db") {
        f.sinr_threshold_db = number();
      } else if (key == "noise_floor_dbm") {
        f.noise_floor_dbm = number();
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("{}: {}", what, e.what()));
    }
  }
  return f;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open scenario file '{}'", path));
  return parse_scenario_file(in, path);
}

}  // namespace coexsim
