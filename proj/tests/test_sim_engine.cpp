#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "coexsim/sim_engine.hpp"

using namespace coexsim;
using namespace std::chrono_literals;

namespace {

struct Recorder : EventHandler {
  std::vector<SimEvent> seen;
  Simulator* sim = nullptr;
  std::vector<SimTime> clock_at_dispatch;
  void handle(const SimEvent& ev) override {
    seen.push_back(ev);
    if (sim) clock_at_dispatch.push_back(sim->now());
  }
};

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("t=0 runs before later events") {
  Simulator sim;
  Recorder r;
  sim.attach(0, r);
  sim.schedule_at(SimTime{10}, 0, EventKind::TrafficFire, 2);
  sim.schedule_at(SimTime{0}, 0, EventKind::TrafficFire, 1);
  sim.run_until(1s);
  REQUIRE(r.seen.size() == 2);
  CHECK(r.seen[0].payload == 1);
  CHECK(r.seen[1].payload == 2);
}

TEST_CASE("simultaneous events are FIFO") {
  Simulator sim;
  Recorder r;
  sim.attach(0, r);
  sim.schedule_at(SimTime{5000}, 0, EventKind::TrafficFire, 'A');
  sim.schedule_at(SimTime{5000}, 0, EventKind::TrafficFire, 'B');
  sim.run_until(1s);
  REQUIRE(r.seen.size() == 2);
  CHECK(r.seen[0].payload == 'A');
  CHECK(r.seen[1].payload == 'B');
}

TEST_CASE("events past the end stay queued") {
  Simulator sim;
  Recorder r;
  sim.attach(0, r);
  sim.schedule_at(99s, 0, EventKind::TrafficFire, 1);
  sim.schedule_at(101s, 0, EventKind::TrafficFire, 2);
  CHECK(sim.run_until(100s) == 1);
  REQUIRE(r.seen.size() == 1);
  CHECK(r.seen[0].payload == 1);
  CHECK(sim.pending() == 1);
}

TEST_CASE("empty run advances the clock") {
  Simulator sim;
  CHECK(sim.now() == SimTime{0});
  CHECK(sim.run_until(100s) == 0);
  CHECK(sim.now() == SimTime{100s});
}

TEST_CASE("single event") {
  Simulator sim;
  Recorder r;
  r.sim = &sim;
  sim.attach(3, r);
  sim.schedule_at(50s, 3, EventKind::SimEnd);
  CHECK(sim.run_until(100s) == 1);
  REQUIRE(r.clock_at_dispatch.size() == 1);
  CHECK(r.clock_at_dispatch[0] == SimTime{50s});
  CHECK(sim.now() <= SimTime{100s});
  CHECK(sim.dispatched() == 1);
}

TEST_CASE("cancelled events never dispatch") {
  Simulator sim;
  Recorder r;
  sim.attach(0, r);
  const auto a = sim.schedule_at(SimTime{1}, 0, EventKind::BackoffExpire, 1);
  sim.schedule_at(SimTime{2}, 0, EventKind::BackoffExpire, 2);
  sim.cancel(a);
  sim.cancel(a);
  CHECK(sim.pending() == 1);
  sim.run_until(1s);
  REQUIRE(r.seen.size() == 1);
  CHECK(r.seen[0].payload == 2);
}

TEST_CASE("scheduling into the past throws") {
  Simulator sim;
  Recorder r;
  sim.attach(0, r);
  sim.run_until(SimTime{10});
  CHECK_THROWS_AS(sim.schedule_at(SimTime{9}, 0, EventKind::TxEnd), std::logic_error);
}

TEST_CASE("dispatch order is the (time, seq) total order") {
  std::mt19937_64 gen(12345);
  for (int trial = 0; trial < 200; ++trial) {
    Simulator sim;
    Recorder r;
    sim.attach(0, r);
    const int n = 1 + static_cast<int>(gen() % 200);
    for (int i = 0; i < n; ++i) {
      sim.schedule_at(SimTime{static_cast<std::int64_t>(gen() % 50)}, 0, EventKind::TrafficFire,
                      static_cast<std::uint64_t>(i));
    }
    sim.run_until(1s);
    REQUIRE(r.seen.size() == static_cast<std::size_t>(n));
    for (std::size_t i = 1; i < r.seen.size(); ++i) {
      const auto& a = r.seen[i - 1];
      const auto& b = r.seen[i];
      CHECK((a.time < b.time || (a.time == b.time && a.seq < b.seq)));
      if (a.time == b.time) CHECK(a.payload < b.payload);
    }
  }
}

}
