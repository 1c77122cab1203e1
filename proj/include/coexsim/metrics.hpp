#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "coexsim/radio.hpp"
#include "coexsim/sim_engine.hpp"

namespace coexsim {

/// One frame as seen by the PAN coordinator.
struct RxRecord {
  std::uint64_t frame_id = 0;
  Outcome outcome = Outcome::NotReceived;
  int payload_bytes = 0;
  SimTime created_at{0};
  SimTime rx_end{0};

  SimTime delay() const { return rx_end - created_at; }
};

struct MetricsSummary {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t frames_with_errors = 0;
  std::uint64_t bytes_with_errors = 0;
  std::uint64_t not_received = 0;
  std::uint64_t access_failures = 0;
  std::uint64_t queue_drops = 0;
  std::uint64_t delivered_bytes = 0;
  double throughput_bps = 0.0;
  double avg_e2e_delay_s = 0.0;
  /// Mean |d_i - d_{i-1}| over delivered frames in arrival order.
  double avg_jitter_s = 0.0;
  /// No frame was delivered; delay and jitter are reported as 0.
  bool empty = true;
};

/// Per-run collector. Not thread-safe; owned by one simulation.
class MetricsCollector {
 public:
  void note_sent() { ++sent_; }
  void note_access_failure() { ++access_failures_; }
  void note_queue_drop() { ++queue_drops_; }

  /// Throws std::invalid_argument on a repeated frame_id or rx_end < created_at.
  void record(const RxRecord& rec);

  /// Throws std::invalid_argument for a non-positive duration.
  MetricsSummary summarize(SimTime duration) const;

  const std::vector<RxRecord>& records() const { return records_; }

 private:
  std::vector<RxRecord> records_;
  std::unordered_set<std::uint64_t> seen_;
  std::uint64_t sent_ = 0;
  std::uint64_t access_failures_ = 0;
  std::uint64_t queue_drops_ = 0;
};

}  // namespace coexsim
