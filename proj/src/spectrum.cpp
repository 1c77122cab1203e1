#include "coexsim/spectrum.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

namespace coexsim {

namespace {

void check_wlan(int n) {
  if (n < 1 || n > kWlanChannelCount) {
    throw std::out_of_range(fmt::format("WLAN channel {} outside 1..{}", n, kWlanChannelCount));
  }
}

void check_wpan(int k) {
  if (k < 1 || k > kWpanChannelCount) {
    throw std::out_of_range(fmt::format("WPAN channel {} outside 1..{}", k, kWpanChannelCount));
  }
}

}  // namespace

double overlap_mhz(const Band& a, const Band& b) {
  const double lo = std::max(a.low_mhz, b.low_mhz);
  const double hi = std::min(a.high_mhz, b.high_mhz);
  return hi > lo ? hi - lo : 0.0;
}

std::string_view to_string(Standard standard) {
  return standard == Standard::Wlan ? "wlan" : "wpan";
}

double wpan_center(int k) {
  check_wpan(k);
  return 2405.0 + 5.0 * (k - 1);
}

Band wpan_band(int k) {
  const double c = wpan_center(k);
  return {c - kWpanChannelWidthMhz / 2, c + kWpanChannelWidthMhz / 2};
}

Band wlan_span(int n) {
  check_wlan(n);
  const double c = 2412.0 + 5.0 * (n - 1);
  return {c - kWlanChannelWidthMhz / 2, c + kWlanChannelWidthMhz / 2};
}

ChannelSpec wlan_channel(int n) { return {Standard::Wlan, n, wlan_span(n)}; }

ChannelSpec wpan_channel(int k) { return {Standard::Wpan, k, wpan_band(k)}; }

Overlap overlaps(int wlan_id, int wpan_id) {
  const double mhz = overlap_mhz(wlan_span(wlan_id), wpan_band(wpan_id));
  return {mhz > 0.0, mhz};
}

}  // namespace coexsim
