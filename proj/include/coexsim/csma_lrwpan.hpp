#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string_view>

#include "coexsim/frame.hpp"
#include "coexsim/random.hpp"
#include "coexsim/sim_engine.hpp"

namespace coexsim {

/// Slotted CSMA/CA constants; defaults are the 802.15.4-2003 MAC PIB values.
struct CsmaParams {
  int mac_min_be = 3;
  int a_max_be = 5;
  int mac_max_csma_backoffs = 4;
  /// Consecutive clear CCAs required before transmitting.
  int cw0 = 2;
  /// aUnitBackoffPeriod: 20 symbols at 62.5 ksym/s.
  SimTime unit_backoff{320};
  std::size_t queue_depth = 8;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

enum class CsmaPhase { Idle, Backoff, Cca, Transmit };

std::string_view to_string(CsmaPhase phase);

enum class CcaResult { Clear, Busy };

/// 802.15.4 slotted CSMA/CA state machine for one device.
///
/// Backoff periods are aligned to a global slot grid anchored at t = 0.
/// The machine holds at most one pending frame plus a FIFO queue; the owner
/// polls deadline() after every call and fires the matching input at that
/// time: on_backoff_expired() in Backoff, on_cca() in Cca and
/// begin_transmission() in Transmit.
///
/// Random draws for a frame come from an Rng seeded with frame.rng_key.
class SlottedCsma {
 public:
  explicit SlottedCsma(CsmaParams params = {});

  const CsmaParams& params() const { return params_; }

  /// Returns false and counts a drop when the queue is full.
  bool enqueue(Frame frame, SimTime now);

  void on_backoff_expired(SimTime now);
  void on_cca(CcaResult result, SimTime now);
  /// Discards the pending frame after NB exceeded macMaxCSMABackoffs and
  /// starts on the next queued frame. Called by on_cca; exposed for tests.
  void on_channel_access_failure(SimTime now);

  /// Hands the pending frame to the PHY. Only valid at deadline() in Transmit.
  const Frame& begin_transmission(SimTime now);
  /// Called when the PHY finishes sending; moves on to the next frame.
  void on_transmission_done(SimTime now);

  std::optional<SimTime> deadline() const { return deadline_; }
  CsmaPhase phase() const { return phase_; }
  int nb() const { return nb_; }
  int be() const { return be_; }
  int cw() const { return cw_; }
  bool on_air() const { return on_air_; }
  const std::optional<Frame>& pending() const { return pending_; }
  std::size_t queued() const { return queue_.size(); }

  /// Backoff periods drawn most recently.
  std::int64_t last_backoff_periods() const { return last_backoff_; }

  std::size_t queue_drops() const { return queue_drops_; }
  std::size_t access_failures() const { return access_failures_; }

  /// First slot boundary at or after t.
  SimTime boundary_at_or_after(SimTime t) const;

 private:
  void start_next(SimTime now);
  void draw_backoff(SimTime from_boundary);

  CsmaParams params_;
  std::deque<Frame> queue_;
  std::optional<Frame> pending_;
  Rng rng_;
  CsmaPhase phase_ = CsmaPhase::Idle;
  int nb_ = 0;
  int be_ = 0;
  int cw_ = 0;
  bool on_air_ = false;
  std::optional<SimTime> deadline_;
  std::int64_t last_backoff_ = 0;
  std::size_t queue_drops_ = 0;
  std::size_t access_failures_ = 0;
};

}  // namespace coexsim
