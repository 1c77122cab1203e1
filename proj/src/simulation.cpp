#include "coexsim/simulation.hpp"

#include <fmt/format.h>

#include <memory>
#include <stdexcept>

#include "coexsim/random.hpp"
#include "coexsim/radio.hpp"

namespace coexsim {

void SimulationConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (duration <= SimTime{0}) fail("duration must be positive");
  if (wpan_interval <= SimTime{0}) fail("WPAN packet interval must be positive");
  if (wlan_interval <= SimTime{0}) fail("WLAN packet interval must be positive");
  if (wpan_phase_offset < SimTime{0} || wlan_phase_offset < SimTime{0}) {
    fail("phase offsets must be non-negative");
  }
  if (wpan_payload_bytes < 0 || wlan_payload_bytes < 0) fail("payload sizes must be non-negative");
  if (wlan_transmitters < 0) fail("WLAN transmitter count must be non-negative");
  if (!(speed_mps > 0.0)) fail("speed must be positive");
  if (pause < SimTime{0}) fail("pause must be non-negative");
  if (!(path_loss_exponent > 0.0)) fail("path-loss exponent must be positive");
  wpan_band(wpan_channel);
  wlan_span(wlan_channel);
  csma.validate();
  dcf.validate();
}

ScenarioParams SimulationConfig::scenario_params() const {
  const LogDistance propagation{path_loss_exponent};
  ScenarioParams p;
  p.wpan_radio = RadioConfig::wpan(propagation);
  p.wpan_radio.tx_power_dbm = wpan_tx_power_dbm;
  p.wpan_radio.sinr_threshold_db = sinr_threshold_db;
  p.wpan_radio.cca_threshold_dbm = wpan_cca_threshold_dbm;
  p.wlan_radio = RadioConfig::wlan(propagation);
  p.wlan_radio.tx_power_dbm = wlan_tx_power_dbm;
  p.wlan_radio.sinr_threshold_db = sinr_threshold_db;
  p.wlan_radio.cca_threshold_dbm = wlan_cca_threshold_dbm;
  p.wpan_traffic = {wpan_payload_bytes, wpan_interval, wpan_phase_offset, wpan_max_packets};
  p.wlan_traffic = {wlan_payload_bytes, wlan_interval, wlan_phase_offset, std::nullopt};
  p.wlan_transmitters = wlan_transmitters;
  return p;
}

namespace {

class Network;

/// Common node behaviour: follows its trajectory cursor on mobility updates.
class NodeEntity : public EventHandler {
 public:
  NodeEntity(Network& net, EntityId id) : net_(net), id_(id) {}

  void handle(const SimEvent& ev) override;

  /// Carrier-sense edges; only WLAN stations react.
  virtual void on_medium_change(SimTime) {}

 protected:
  virtual void on_event(const SimEvent&) {}

  Network& net_;
  EntityId id_;
};

class WpanEndDevice;
class WlanStation;

class Network {
 public:
  Network(const SimulationConfig& cfg, const Scenario& scenario);

  RunResult run();

  Simulator& sim() { return sim_; }
  const SimulationConfig& cfg() const { return cfg_; }
  const NodeSpec& node(EntityId id) const { return scenario_.nodes[id]; }
  MetricsCollector& metrics() { return metrics_; }
  WlanStats& wlan_stats() { return wlan_stats_; }

  Position position(EntityId id, SimTime t) {
    return paths_[id].position_at(t, &cursors_[id]);
  }
  void advance_cursor(EntityId id, std::size_t leg) { cursors_[id] = leg; }

  bool sense_busy(EntityId id, const ChannelSpec& channel, SimTime now) {
    return medium_.busy(position(id, now), channel.band, node(id).radio.cca_threshold_dbm, now, id);
  }

  /// Puts `frame` on air from `id` and schedules its end.
  void start_transmission(EntityId id, const Frame& frame);
  /// Takes the frame off air and judges it at its destination.
  Reception finish_transmission(EntityId id, std::uint64_t frame_id, Transmission* out);
  void notify_medium_change(SimTime now);

  ChannelSpec wpan_channel() const { return wpan_channel_; }
  ChannelSpec wlan_channel() const { return wlan_channel_; }

 private:
  SimulationConfig cfg_;
  Scenario scenario_;
  ChannelSpec wpan_channel_;
  ChannelSpec wlan_channel_;
  Simulator sim_;
  Medium medium_;
  MetricsCollector metrics_;
  WlanStats wlan_stats_;
  std::vector<MobilityPath> paths_;
  std::vector<std::size_t> cursors_;
  std::vector<std::unique_ptr<NodeEntity>> entities_;
};

void NodeEntity::handle(const SimEvent& ev) {
  if (ev.kind == EventKind::MobilityUpdate) {
    net_.advance_cursor(id_, static_cast<std::size_t>(ev.payload));
    return;
  }
  on_event(ev);
}

/// Keeps one engine event in step with a MAC's deadline().
class MacTimer {
 public:
  template <class KindFn>
  void sync(Simulator& sim, EntityId owner, std::optional<SimTime> due, KindFn kind) {
    if (!due) {
      cancel(sim);
      return;
    }
    if (live_ && at_ == *due) return;
    cancel(sim);
    id_ = sim.schedule_at(*due, owner, kind(), kTimerPayload);
    at_ = *due;
    live_ = true;
  }

  /// True when `ev` is this timer firing; marks it spent.
  bool fired(const SimEvent& ev) {
    if (ev.payload != kTimerPayload || !live_ || ev.seq != id_) return false;
    live_ = false;
    return true;
  }

  static constexpr std::uint64_t kTimerPayload = ~std::uint64_t{0};

 private:
  void cancel(Simulator& sim) {
    if (live_) sim.cancel(id_);
    live_ = false;
  }

  EventId id_ = 0;
  SimTime at_{0};
  bool live_ = false;
};

std::uint64_t frame_key(const SimulationConfig& cfg, EntityId node, SimTime created) {
  return mix_key({cfg.seed, static_cast<std::uint64_t>(Stream::Mac), node,
                  static_cast<std::uint64_t>(created.count())});
}

class WpanEndDevice final : public NodeEntity {
 public:
  WpanEndDevice(Network& net, EntityId id)
      : NodeEntity(net, id), mac_(net.cfg().csma) {}

 protected:
  void on_event(const SimEvent& ev) override {
    Simulator& sim = net_.sim();
    const SimTime now = sim.now();
    switch (ev.kind) {
      case EventKind::TrafficFire: {
        const NodeSpec& spec = net_.node(id_);
        Frame f;
        f.id = ev.payload;
        f.src = id_;
        f.dst = *spec.destination;
        f.payload_bytes = spec.traffic->payload_bytes;
        f.channel = net_.wpan_channel();
        f.created_at = now;
        f.rng_key = frame_key(net_.cfg(), id_, now);
        net_.metrics().note_sent();
        if (!mac_.enqueue(f, now)) net_.metrics().note_queue_drop();
        break;
      }
      case EventKind::TxEnd: {
        Transmission tx;
        const Reception r = net_.finish_transmission(id_, ev.payload, &tx);
        net_.metrics().record({tx.frame.id, r.outcome, tx.frame.payload_bytes,
                               tx.frame.created_at, tx.end});
        mac_.on_transmission_done(now);
        net_.notify_medium_change(now);
        break;
      }
      default:
        if (!timer_.fired(ev)) return;
        step(now);
        break;
    }
    sync();
  }

 private:
  void step(SimTime now) {
    switch (mac_.phase()) {
      case CsmaPhase::Backoff:
        mac_.on_backoff_expired(now);
        break;
      case CsmaPhase::Cca: {
        const auto failures = mac_.access_failures();
        const bool busy = net_.sense_busy(id_, net_.wpan_channel(), now);
        mac_.on_cca(busy ? CcaResult::Busy : CcaResult::Clear, now);
        if (mac_.access_failures() != failures) net_.metrics().note_access_failure();
        break;
      }
      case CsmaPhase::Transmit:
        net_.start_transmission(id_, mac_.begin_transmission(now));
        break;
      case CsmaPhase::Idle:
        break;
    }
  }

  void sync() {
    timer_.sync(net_.sim(), id_, mac_.deadline(), [this] {
      switch (mac_.phase()) {
        case CsmaPhase::Cca: return EventKind::CcaSample;
        case CsmaPhase::Transmit: return EventKind::TxStart;
        default: return EventKind::BackoffExpire;
      }
    });
  }

  SlottedCsma mac_;
  MacTimer timer_;
};

class WlanStation final : public NodeEntity {
 public:
  WlanStation(Network& net, EntityId id) : NodeEntity(net, id), mac_(net.cfg().dcf) {}

  void on_medium_change(SimTime now) override {
    const bool busy = net_.sense_busy(id_, net_.wlan_channel(), now);
    if (busy == busy_) return;
    busy_ = busy;
    if (busy) {
      mac_.on_medium_busy(now);
    } else {
      mac_.on_medium_idle(now);
    }
    sync();
  }

 protected:
  void on_event(const SimEvent& ev) override {
    const SimTime now = net_.sim().now();
    switch (ev.kind) {
      case EventKind::TrafficFire: {
        const NodeSpec& spec = net_.node(id_);
        Frame f;
        f.id = ev.payload;
        f.src = id_;
        f.dst = *spec.destination;
        f.payload_bytes = spec.traffic->payload_bytes;
        f.channel = net_.wlan_channel();
        f.created_at = now;
        f.rng_key = frame_key(net_.cfg(), id_, now);
        ++net_.wlan_stats().frames_generated;
        busy_ = net_.sense_busy(id_, net_.wlan_channel(), now);
        if (!mac_.enqueue(f, now, !busy_)) ++net_.wlan_stats().queue_drops;
        break;
      }
      case EventKind::TxEnd: {
        Transmission tx;
        const Reception r = net_.finish_transmission(id_, ev.payload, &tx);
        WlanStats& stats = net_.wlan_stats();
        stats.airtime += tx.end - tx.start;
        busy_ = net_.sense_busy(id_, net_.wlan_channel(), now);
        const auto drops = mac_.retry_drops();
        mac_.on_transmission_done(r.outcome == Outcome::Delivered, now, !busy_);
        if (r.outcome == Outcome::Delivered) ++stats.delivered;
        stats.retry_drops += mac_.retry_drops() - drops;
        sync();
        net_.notify_medium_change(now);
        return;
      }
      default:
        if (!timer_.fired(ev)) return;
        ++net_.wlan_stats().attempts;
        net_.start_transmission(id_, mac_.begin_transmission(now));
        break;
    }
    sync();
  }

 private:
  void sync() {
    timer_.sync(net_.sim(), id_, mac_.deadline(), [] { return EventKind::BackoffExpire; });
  }

  DcfMac mac_;
  MacTimer timer_;
  bool busy_ = false;
};

/// Receivers and silent stations: only follow their trajectory.
class PassiveNode final : public NodeEntity {
 public:
  using NodeEntity::NodeEntity;
};

Network::Network(const SimulationConfig& cfg, const Scenario& scenario)
    : cfg_(cfg),
      scenario_(scenario),
      wpan_channel_(coexsim::wpan_channel(cfg.wpan_channel)),
      wlan_channel_(coexsim::wlan_channel(cfg.wlan_channel)),
      medium_(PhyEnvironment{LogDistance{cfg.path_loss_exponent}, cfg.noise_floor_dbm}) {
  const MobilityParams mobility{cfg.speed_mps, cfg.pause, scenario.bed};
  for (const NodeSpec& n : scenario_.nodes) {
    if (cfg.mobility == MobilityModel::RandomWaypoint) {
      const auto key = mix_key({cfg.seed, static_cast<std::uint64_t>(Stream::Mobility), n.id});
      paths_.push_back(MobilityPath::random_waypoint(n.position, mobility, key, cfg.duration));
    } else {
      paths_.push_back(MobilityPath::stationary(n.position));
    }
    cursors_.push_back(0);

    std::unique_ptr<NodeEntity> entity;
    if (n.role == Role::Rfd && n.traffic) {
      entity = std::make_unique<WpanEndDevice>(*this, n.id);
    } else if (n.role == Role::Wlan && n.transmitter) {
      entity = std::make_unique<WlanStation>(*this, n.id);
    } else {
      entity = std::make_unique<PassiveNode>(*this, n.id);
    }
    sim_.attach(n.id, *entity);
    entities_.push_back(std::move(entity));
  }

  // Traffic first, node by node, so simultaneous fires keep a fixed order.
  for (const NodeSpec& n : scenario_.nodes) {
    if (!n.traffic || !n.transmitter) continue;
    const auto times = cbr_fire_times(*n.traffic, cfg.duration);
    for (std::size_t i = 0; i < times.size(); ++i) {
      sim_.schedule_at(times[i], n.id, EventKind::TrafficFire, i);
    }
  }
  for (const NodeSpec& n : scenario_.nodes) {
    const auto legs = paths_[n.id].legs();
    for (std::size_t i = 1; i < legs.size(); ++i) {
      if (legs[i].depart >= cfg.duration) break;
      sim_.schedule_at(legs[i].depart, n.id, EventKind::MobilityUpdate, i);
    }
  }
  sim_.schedule_at(cfg.duration, scenario_.coordinator, EventKind::SimEnd);
}

void Network::start_transmission(EntityId id, const Frame& frame) {
  const SimTime now = sim_.now();
  const NodeSpec& spec = node(id);
  Transmission tx;
  tx.frame = frame;
  tx.transmitter = id;
  tx.start = now;
  tx.end = now + frame_airtime(spec.radio, frame.payload_bytes);
  tx.channel = frame.channel;
  tx.tx_position = position(id, now);
  tx.tx_power_dbm = spec.radio.tx_power_dbm;
  medium_.begin(tx);
  sim_.schedule_at(tx.end, id, EventKind::TxEnd, frame.id);
  notify_medium_change(now);
}

Reception Network::finish_transmission(EntityId id, std::uint64_t frame_id, Transmission* out) {
  const SimTime now = sim_.now();
  Transmission tx = medium_.end(id, frame_id, now);
  tx.frame.rx_end = now;
  const NodeSpec& rx = node(tx.frame.dst);
  const auto concurrent = medium_.concurrent_with(tx);
  const Reception r = assess_reception(position(rx.id, tx.start), rx.radio, tx, concurrent,
                                       medium_.environment());
  *out = tx;
  return r;
}

void Network::notify_medium_change(SimTime now) {
  for (auto& e : entities_) e->on_medium_change(now);
}

RunResult Network::run() {
  RunResult result;
  result.events = sim_.run_until(cfg_.duration);
  result.final_clock = sim_.now();
  result.metrics = metrics_.summarize(cfg_.duration);
  result.receptions = metrics_.records();
  result.wlan = wlan_stats_;
  return result;
}

}  // namespace

RunResult run_simulation(const SimulationConfig& cfg) {
  cfg.validate();
  const Scenario scenario = build_scenario(cfg.topology, cfg.seed, cfg.scenario_params());
  return run_simulation(cfg, scenario);
}

RunResult run_simulation(const SimulationConfig& cfg, const Scenario& scenario) {
  cfg.validate();
  Network net(cfg, scenario);
  return net.run();
}

}  // namespace coexsim
