#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string_view>

#include "coexsim/frame.hpp"
#include "coexsim/random.hpp"
#include "coexsim/sim_engine.hpp"

namespace coexsim {

/// 802.11b DSSS DCF timing and contention constants.
struct DcfParams {
  int cw_min = 31;
  int cw_max = 1023;
  SimTime slot{20};
  SimTime difs{50};
  SimTime sifs{10};
  int retry_limit = 7;
  std::size_t queue_depth = 8;

  void validate() const;
};

enum class DcfPhase { Idle, Difs, Backoff, Transmit };

std::string_view to_string(DcfPhase phase);

/// DCF basic access for one station, without ACK frames on air.
///
/// The owner reports medium edges (on_medium_busy / on_medium_idle), fires
/// begin_transmission() at deadline(), and reports whether the frame got
/// through in on_transmission_done(). A failed attempt doubles CW (capped at
/// cw_max) and retries until retry_limit, then the frame is dropped.
///
/// Backoff counts down only while the medium has been idle for DIFS and
/// freezes, keeping whole remaining slots, when it turns busy. A busy edge at
/// the exact instant the countdown ends does not stop the transmission.
class DcfMac {
 public:
  explicit DcfMac(DcfParams params = {});

  const DcfParams& params() const { return params_; }

  /// Returns false and counts a drop when the queue is full.
  bool enqueue(Frame frame, SimTime now, bool medium_idle);

  void on_medium_busy(SimTime now);
  void on_medium_idle(SimTime now);

  const Frame& begin_transmission(SimTime now);
  void on_transmission_done(bool delivered, SimTime now, bool medium_idle);

  std::optional<SimTime> deadline() const;
  DcfPhase phase() const { return phase_; }
  int cw() const { return cw_; }
  int retries() const { return retries_; }
  /// Remaining backoff slots as of the last freeze or draw.
  std::int64_t backoff_slots() const { return slots_; }
  bool frozen() const { return frozen_; }
  const std::optional<Frame>& pending() const { return pending_; }
  std::size_t queued() const { return queue_.size(); }

  std::size_t queue_drops() const { return queue_drops_; }
  std::size_t retry_drops() const { return retry_drops_; }
  std::size_t delivered() const { return delivered_; }
  std::size_t attempts() const { return attempts_; }

 private:
  void start_next(SimTime now, bool medium_idle, bool after_transmission);
  void enter_backoff(SimTime now, bool medium_idle);

  DcfParams params_;
  std::deque<Frame> queue_;
  std::optional<Frame> pending_;
  Rng rng_;
  DcfPhase phase_ = DcfPhase::Idle;
  int cw_;
  int retries_ = 0;
  std::int64_t slots_ = 0;
  bool frozen_ = false;
  bool on_air_ = false;
  /// Start of the current idle stretch (DIFS begins here).
  SimTime idle_since_{0};
  std::size_t queue_drops_ = 0;
  std::size_t retry_drops_ = 0;
  std::size_t delivered_ = 0;
  std::size_t attempts_ = 0;
};

}  // namespace coexsim
