#pragma once

#include <chrono>
#include <cstdint>
#include <queue>
#include <string_view>
#include <vector>

namespace coexsim {

/// Simulated time, in whole microseconds.
using SimTime = std::chrono::microseconds;

using EntityId = std::uint32_t;
using EventId = std::uint64_t;

enum class EventKind : std::uint8_t {
  TxStart,
  TxEnd,
  BackoffExpire,
  CcaSample,
  TrafficFire,
  MobilityUpdate,
  SimEnd,
};

std::string_view to_string(EventKind kind);

struct SimEvent {
  SimTime time{0};
  /// Insertion order; assigned by Simulator::schedule.
  std::uint64_t seq = 0;
  EntityId target = 0;
  EventKind kind = EventKind::SimEnd;
  std::uint64_t payload = 0;
};

class EventHandler {
 public:
  virtual ~EventHandler() = default;
  virtual void handle(const SimEvent& event) = 0;
};

/// Single-threaded discrete-event core.
///
/// Events are dispatched in (time, seq) order, where seq is the insertion
/// counter, so simultaneous events run FIFO. Cancelled events stay in the
/// heap and are skipped when popped.
class Simulator {
 public:
  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Routes events whose target is `id` to `handler`. The handler must
  /// outlive every run_until call.
  void attach(EntityId id, EventHandler& handler);

  /// Throws std::logic_error when event.time < now().
  EventId schedule(SimEvent event);
  EventId schedule_at(SimTime time, EntityId target, EventKind kind,
                      std::uint64_t payload = 0);

  /// No-op for ids that already ran or were cancelled.
  void cancel(EventId id);

  /// Dispatches every live event with time <= end. Later events stay queued.
  /// Leaves the clock at `end` and returns the number dispatched.
  std::size_t run_until(SimTime end);

  SimTime now() const { return now_; }
  std::size_t pending() const { return live_; }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::vector<bool> dead_;
  std::vector<EventHandler*> handlers_;
  SimTime now_{0};
  std::uint64_t next_seq_ = 0;
  std::size_t live_ = 0;
  std::uint64_t dispatched_ = 0;
};

}  // namespace coexsim
