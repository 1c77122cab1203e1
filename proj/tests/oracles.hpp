#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library: every value is re-derived from first principles.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

// Spectrum in half-MHz integer units, so edges like 2413.5 are exact.
struct HalfBand {
  std::int64_t lo;
  std::int64_t hi;
};

inline std::int64_t wpan_center_x2(int k) { return 2 * (2405 + 5 * (k - 1)); }
inline HalfBand wpan_x2(int k) { return {wpan_center_x2(k) - 3, wpan_center_x2(k) + 3}; }
inline HalfBand wlan_x2(int n) {
  const std::int64_t c = 2 * (2412 + 5 * (n - 1));
  return {c - 22, c + 22};
}

/// Brute force: count every half-MHz cell that lies inside both bands.
inline std::int64_t overlap_cells(HalfBand a, HalfBand b) {
  std::int64_t cells = 0;
  for (std::int64_t f = std::min(a.lo, b.lo); f < std::max(a.hi, b.hi); ++f) {
    const bool in_a = f >= a.lo && f + 1 <= a.hi;
    const bool in_b = f >= b.lo && f + 1 <= b.hi;
    if (in_a && in_b) ++cells;
  }
  return cells;
}

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;
inline constexpr long double kC = 299792458.0L;

inline long double free_space_db(long double d, long double f = 2.44e9L) {
  return 20.0L * std::log10(4.0L * kPi * d * f / kC);
}

inline long double log_distance_db(long double d, long double eta) {
  return free_space_db(1.0L) + 10.0L * eta * std::log10(d);
}

inline long double to_mw(long double dbm) { return std::pow(10.0L, dbm / 10.0L); }
inline long double to_dbm(long double mw) { return 10.0L * std::log10(mw); }

/// Airtime in microseconds, rounded up.
inline std::int64_t airtime_us(std::int64_t bytes, std::int64_t rate_bps) {
  const std::int64_t bits_us = bytes * 8 * 1'000'000;
  return (bits_us + rate_bps - 1) / rate_bps;
}

// Slotted CSMA/CA timing for one frame on an idle channel, arriving on a
// slot boundary: backoff b periods, two CCA periods, then the frame.
inline constexpr std::int64_t kUnit = 320;
inline constexpr std::int64_t kWpanFrameUs = 3904;  // (105 + 17) B at 250 kbps

inline std::int64_t min_idle_delay_us() { return 0 * kUnit + 2 * kUnit + kWpanFrameUs; }
inline std::int64_t max_idle_delay_us() {
  // Up to one period of alignment, 7 periods of backoff, 2 CCA periods.
  return kUnit + 7 * kUnit + 2 * kUnit + kWpanFrameUs;
}

/// Pearson chi-square statistic against a uniform expectation.
inline double chi_square_uniform(const std::vector<std::int64_t>& counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0LL));
  const double expected = total / static_cast<double>(counts.size());
  double chi = 0.0;
  for (auto c : counts) chi += (c - expected) * (c - expected) / expected;
  return chi;
}

// Upper 0.001 quantiles of chi-square with 7, 15 and 31 degrees of freedom.
inline constexpr double kChi2Crit7 = 24.322;
inline constexpr double kChi2Crit15 = 37.697;
inline constexpr double kChi2Crit31 = 61.098;

/// Coefficient of determination of the least-squares line y ~ a + b x.
inline double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

}  // namespace oracle
