#pragma once

#include <cstdint>

#include "coexsim/sim_engine.hpp"
#include "coexsim/spectrum.hpp"

namespace coexsim {

/// One MAC frame from generation to reception.
struct Frame {
  std::uint64_t id = 0;
  EntityId src = 0;
  EntityId dst = 0;
  int payload_bytes = 0;
  ChannelSpec channel;
  SimTime created_at{0};
  SimTime tx_start{0};
  SimTime rx_end{0};
  /// Seeds the MAC's random draws for this frame.
  std::uint64_t rng_key = 0;
};

}  // namespace coexsim
