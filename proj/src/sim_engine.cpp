#include "coexsim/sim_engine.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace coexsim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::TxStart: return "tx-start";
    case EventKind::TxEnd: return "tx-end";
    case EventKind::BackoffExpire: return "backoff-expire";
    case EventKind::CcaSample: return "cca-sample";
    case EventKind::TrafficFire: return "traffic-fire";
    case EventKind::MobilityUpdate: return "mobility-update";
    case EventKind::SimEnd: return "sim-end";
  }
  return "unknown";
}

void Simulator::attach(EntityId id, EventHandler& handler) {
  if (handlers_.size() <= id) handlers_.resize(id + 1, nullptr);
  handlers_[id] = &handler;
}

EventId Simulator::schedule(SimEvent event) {
  if (event.time < now_) {
    throw std::logic_error(fmt::format(
        "event {} for entity {} scheduled at {} us, before clock {} us",
        to_string(event.kind), event.target, event.time.count(), now_.count()));
  }
  event.seq = next_seq_++;
  dead_.push_back(false);
  queue_.push(event);
  ++live_;
  return event.seq;
}

EventId Simulator::schedule_at(SimTime time, EntityId target, EventKind kind,
                               std::uint64_t payload) {
  return schedule(SimEvent{time, 0, target, kind, payload});
}

void Simulator::cancel(EventId id) {
  if (id < dead_.size() && !dead_[id]) {
    dead_[id] = true;
    --live_;
  }
}

std::size_t Simulator::run_until(SimTime end) {
  std::size_t count = 0;
  while (!queue_.empty() && queue_.top().time <= end) {
    const SimEvent event = queue_.top();
    queue_.pop();
    if (dead_[event.seq]) continue;
    dead_[event.seq] = true;
    --live_;
    now_ = event.time;
    if (event.target >= handlers_.size() || handlers_[event.target] == nullptr) {
      throw std::logic_error(
          fmt::format("no handler attached for entity {}", event.target));
    }
    handlers_[event.target]->handle(event);
    ++count;
    ++dispatched_;
  }
  if (end > now_) now_ = end;
  return count;
}

}  // namespace coexsim
