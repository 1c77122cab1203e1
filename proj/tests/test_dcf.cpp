#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "coexsim/dcf_wlan.hpp"
#include "oracles.hpp"

using namespace coexsim;

namespace {

Frame frame_with(std::uint64_t id, std::uint64_t key) {
  Frame f;
  f.id = id;
  f.rng_key = key;
  return f;
}

/// Key whose first draw on a busy medium is `slots`.
std::uint64_t key_for_slots(std::int64_t slots) {
  for (std::uint64_t key = 0;; ++key) {
    DcfMac mac;
    mac.enqueue(frame_with(0, key), SimTime{0}, false);
    if (mac.backoff_slots() == slots) return key;
  }
}

}  // namespace

TEST_SUITE("dcf") {

TEST_CASE("idle medium transmits after DIFS") {
  DcfMac mac;
  mac.enqueue(frame_with(1, 1), SimTime{1000}, true);
  CHECK(mac.phase() == DcfPhase::Difs);
  CHECK(*mac.deadline() == SimTime{1050});
  const Frame& f = mac.begin_transmission(SimTime{1050});
  CHECK(f.id == 1);
  CHECK(mac.phase() == DcfPhase::Transmit);
  CHECK(mac.attempts() == 1);
}

TEST_CASE("busy medium defers with a frozen backoff in [0, 31]") {
  std::vector<std::int64_t> counts(32, 0);
  for (std::uint64_t key = 0; key < 32 * 300; ++key) {
    DcfMac mac;
    mac.enqueue(frame_with(0, key), SimTime{0}, false);
    REQUIRE(mac.phase() == DcfPhase::Backoff);
    REQUIRE(mac.frozen());
    REQUIRE_FALSE(mac.deadline());
    REQUIRE(mac.backoff_slots() >= 0);
    REQUIRE(mac.backoff_slots() <= 31);
    ++counts[static_cast<std::size_t>(mac.backoff_slots())];
  }
  CHECK(oracle::chi_square_uniform(counts) < oracle::kChi2Crit31);
}

TEST_CASE("enqueue during backoff is FIFO") {
  DcfMac mac;
  mac.enqueue(frame_with(1, 1), SimTime{0}, false);
  mac.enqueue(frame_with(2, 2), SimTime{1}, true);
  mac.enqueue(frame_with(3, 3), SimTime{2}, true);
  CHECK(mac.queued() == 2);
  CHECK(mac.pending()->id == 1);
  mac.on_medium_idle(SimTime{10});
  const SimTime t = *mac.deadline();
  mac.begin_transmission(t);
  mac.on_transmission_done(true, t + SimTime{1304}, true);
  CHECK(mac.pending()->id == 2);
  CHECK(mac.phase() == DcfPhase::Backoff);
}

TEST_CASE("busy period freezes the remaining slots") {
  DcfMac mac;
  mac.enqueue(frame_with(0, key_for_slots(10)), SimTime{0}, false);
  mac.on_medium_idle(SimTime{100});
  CHECK(*mac.deadline() == SimTime{100 + 50 + 10 * 20});
  mac.on_medium_busy(SimTime{130});
  CHECK(mac.frozen());
  CHECK(mac.backoff_slots() == 10);
  mac.on_medium_idle(SimTime{3130});
  CHECK(mac.backoff_slots() == 10);
  CHECK(*mac.deadline() == SimTime{3130 + 50 + 10 * 20});
}

TEST_CASE("freezing mid-countdown keeps whole remaining slots") {
  DcfMac mac;
  mac.enqueue(frame_with(0, key_for_slots(10)), SimTime{0}, false);
  mac.on_medium_idle(SimTime{0});
  mac.on_medium_busy(SimTime{50 + 3 * 20 + 7});
  CHECK(mac.backoff_slots() == 7);
  mac.on_medium_idle(SimTime{2000});
  CHECK(*mac.deadline() == SimTime{2000 + 50 + 7 * 20});
}

TEST_CASE("countdown reaching zero transmits") {
  DcfMac mac;
  mac.enqueue(frame_with(0, key_for_slots(3)), SimTime{0}, false);
  mac.on_medium_idle(SimTime{500});
  const SimTime due = *mac.deadline();
  CHECK(due == SimTime{500 + 50 + 60});
  mac.on_medium_busy(due);  // another station starting in the same slot
  CHECK_FALSE(mac.frozen());
  mac.begin_transmission(due);
  CHECK(mac.phase() == DcfPhase::Transmit);
}

TEST_CASE("failed attempts double CW up to the cap, then drop") {
  DcfMac mac;
  mac.enqueue(frame_with(0, 99), SimTime{0}, true);
  SimTime t = *mac.deadline();
  const int expected[] = {63, 127, 255, 511, 1023, 1023, 1023};
  for (int attempt = 0; attempt < 7; ++attempt) {
    mac.begin_transmission(t);
    t += SimTime{1304};
    mac.on_transmission_done(false, t, true);
    CHECK(mac.cw() == expected[attempt]);
    CHECK(mac.retries() == attempt + 1);
    CHECK(mac.backoff_slots() <= mac.cw());
    t = *mac.deadline();
  }
  mac.begin_transmission(t);
  mac.on_transmission_done(false, t + SimTime{1304}, true);
  CHECK(mac.retry_drops() == 1);
  CHECK(mac.cw() == 31);
  CHECK(mac.phase() == DcfPhase::Idle);
  CHECK(mac.attempts() == 8);
}

TEST_CASE("success resets CW") {
  DcfMac mac;
  mac.enqueue(frame_with(0, 4), SimTime{0}, true);
  SimTime t = *mac.deadline();
  mac.begin_transmission(t);
  mac.on_transmission_done(false, t + SimTime{1304}, true);
  CHECK(mac.cw() == 63);
  t = *mac.deadline();
  mac.begin_transmission(t);
  mac.on_transmission_done(true, t + SimTime{1304}, true);
  CHECK(mac.cw() == 31);
  CHECK(mac.delivered() == 1);
}

TEST_CASE("transmission outside the deadline is rejected") {
  DcfMac mac;
  mac.enqueue(frame_with(0, 4), SimTime{0}, true);
  CHECK_THROWS_AS(mac.begin_transmission(SimTime{49}), std::logic_error);
  CHECK_THROWS_AS(mac.on_transmission_done(true, SimTime{60}, true), std::logic_error);
}

}
