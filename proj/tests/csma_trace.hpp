#pragma once

// Drives SlottedCsma with an arbitrary CCA oracle and checks every step
// against the slotted CSMA/CA rules. Shared by unit and acceptance tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coexsim/csma_lrwpan.hpp"

namespace trace {

struct Report {
  std::uint64_t transmissions = 0;
  std::uint64_t failures = 0;
  std::uint64_t draws = 0;
  std::vector<std::string> violations;
};

/// One trace: `frames` frames arriving at random times, CCA busy with
/// probability `p_busy`, all random choices from `seed`.
inline Report run(std::uint64_t seed, int frames, double p_busy) {
  using coexsim::CcaResult;
  using coexsim::CsmaPhase;
  using coexsim::SimTime;

  std::mt19937_64 gen(seed);
  std::bernoulli_distribution busy(p_busy);
  coexsim::CsmaParams params;
  coexsim::SlottedCsma mac(params);
  const std::int64_t unit = params.unit_backoff.count();

  Report rep;
  auto fail = [&](const std::string& what) {
    if (rep.violations.size() < 20) rep.violations.push_back(what);
  };

  SimTime now{static_cast<std::int64_t>(gen() % 5000)};
  int busy_for_frame = 0;
  int clear_run = 0;
  SimTime last_clear{-1};
  std::uint64_t next_id = 0;

  auto check_draw = [&] {
    ++rep.draws;
    const auto b = mac.last_backoff_periods();
    if (b < 0 || b > (std::int64_t{1} << mac.be()) - 1) fail("backoff outside [0, 2^BE - 1]");
    if (!mac.deadline() || mac.deadline()->count() % unit != 0) fail("backoff off the slot grid");
  };

  for (int f = 0; f < frames; ++f) {
    coexsim::Frame frame;
    frame.id = next_id++;
    frame.rng_key = gen();
    mac.enqueue(frame, now);
    busy_for_frame = 0;
    clear_run = 0;
    check_draw();

    int guard = 0;
    while (mac.phase() != CsmaPhase::Idle && ++guard < 1000) {
      if (mac.be() < params.mac_min_be || mac.be() > params.a_max_be) fail("BE outside [3, 5]");
      const SimTime at = *mac.deadline();
      if (at < now) fail("deadline in the past");
      now = at;
      switch (mac.phase()) {
        case CsmaPhase::Backoff:
          mac.on_backoff_expired(now);
          if (mac.phase() != CsmaPhase::Cca) fail("backoff did not lead to CCA");
          break;
        case CsmaPhase::Cca: {
          if (now.count() % unit != 0) fail("CCA off a slot boundary");
          const int nb_before = mac.nb();
          const auto failures_before = mac.access_failures();
          if (busy(gen)) {
            ++busy_for_frame;
            clear_run = 0;
            mac.on_cca(CcaResult::Busy, now);
            if (mac.access_failures() != failures_before) {
              ++rep.failures;
              if (busy_for_frame != params.mac_max_csma_backoffs + 1) {
                fail("access failure after " + std::to_string(busy_for_frame) + " busy CCAs");
              }
            } else {
              if (mac.nb() != nb_before + 1) fail("NB not incremented on busy CCA");
              if (mac.cw() != params.cw0) fail("CW not reset on busy CCA");
              if (busy_for_frame > params.mac_max_csma_backoffs) fail("NB exceeded without failure");
              check_draw();
            }
          } else {
            if (clear_run == 1 && now - last_clear != params.unit_backoff) {
              fail("clear CCAs not in consecutive slots");
            }
            ++clear_run;
            last_clear = now;
            mac.on_cca(CcaResult::Clear, now);
          }
          break;
        }
        case CsmaPhase::Transmit:
          if (clear_run != params.cw0) fail("transmission without exactly 2 clear CCAs");
          if (now - last_clear != params.unit_backoff) fail("transmission not in the next slot");
          mac.begin_transmission(now);
          ++rep.transmissions;
          now += SimTime{3904};
          mac.on_transmission_done(now);
          break;
        case CsmaPhase::Idle:
          break;
      }
    }
    if (guard >= 1000) fail("state machine did not settle");
    now += SimTime{static_cast<std::int64_t>(gen() % 100000)};
  }
  return rep;
}

}  // namespace trace
