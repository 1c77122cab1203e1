#include <doctest.h>

#include <stdexcept>

#include "coexsim/spectrum.hpp"
#include "oracles.hpp"

using namespace coexsim;

TEST_SUITE("spectrum") {

TEST_CASE("WPAN centers follow the band plan") {
  const double table[] = {2405, 2410, 2415, 2420, 2425, 2430, 2435, 2440,
                          2445, 2450, 2455, 2460, 2465, 2470, 2475, 2480};
  for (int k = 1; k <= 16; ++k) CHECK(wpan_center(k) == table[k - 1]);
  CHECK(wpan_band(3) == Band{2413.5, 2416.5});
  CHECK_THROWS_AS(wpan_center(0), std::out_of_range);
  CHECK_THROWS_AS(wpan_center(17), std::out_of_range);
}

TEST_CASE("WLAN spans") {
  CHECK(wlan_span(1) == Band{2401, 2423});
  CHECK(wlan_span(6) == Band{2426, 2448});
  CHECK(wlan_span(11) == Band{2451, 2473});
  CHECK_THROWS_AS(wlan_span(12), std::out_of_range);
  CHECK(wlan_channel(6).standard == Standard::Wlan);
  CHECK(wpan_channel(6).band.width_mhz() == doctest::Approx(3.0));
}

TEST_CASE("overlap examples") {
  const auto a = overlaps(1, 3);
  CHECK(a.overlapping);
  CHECK(a.mhz == doctest::Approx(3.0));
  CHECK_FALSE(overlaps(1, 16).overlapping);
  const auto touch = overlaps(1, 5);
  CHECK_FALSE(touch.overlapping);
  CHECK(touch.mhz == 0.0);
}

TEST_CASE("overlap matches brute-force intersection on all pairs") {
  for (int n = 1; n <= 11; ++n) {
    for (int k = 1; k <= 16; ++k) {
      const auto cells = oracle::overlap_cells(oracle::wlan_x2(n), oracle::wpan_x2(k));
      const auto got = overlaps(n, k);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(got.overlapping == (cells > 0));
      CHECK(got.mhz == doctest::Approx(cells * 0.5));
    }
  }
}

TEST_CASE("WPAN 15 and 16 are clear of WLAN 1, 6 and 11") {
  for (int n : {1, 6, 11}) {
    CHECK_FALSE(overlaps(n, 15).overlapping);
    CHECK_FALSE(overlaps(n, 16).overlapping);
  }
}

TEST_CASE("overlap_mhz is symmetric and zero for touching bands") {
  CHECK(overlap_mhz(Band{0, 1}, Band{1, 2}) == 0.0);
  CHECK(overlap_mhz(Band{0, 3}, Band{1, 2}) == 1.0);
  CHECK(overlap_mhz(Band{1, 2}, Band{0, 3}) == 1.0);
}

}
