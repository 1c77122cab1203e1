#pragma once

#include <string_view>

namespace coexsim {

/// A contiguous frequency interval in MHz.
struct Band {
  double low_mhz = 0.0;
  double high_mhz = 0.0;

  double width_mhz() const { return high_mhz - low_mhz; }
  double center_mhz() const { return 0.5 * (low_mhz + high_mhz); }
  friend bool operator==(const Band&, const Band&) = default;
};

/// Width of the intersection of two bands. Touching edges give zero.
double overlap_mhz(const Band& a, const Band& b);

enum class Standard { Wlan, Wpan };

std::string_view to_string(Standard standard);

struct ChannelSpec {
  Standard standard = Standard::Wpan;
  int id = 1;
  Band band;

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

inline constexpr int kWlanChannelCount = 11;
inline constexpr int kWpanChannelCount = 16;
inline constexpr double kWlanChannelWidthMhz = 22.0;
inline constexpr double kWpanChannelWidthMhz = 3.0;

// All channel lookups throw std::out_of_range for ids outside the band plan.

/// 802.15.4 channel k (1..16) center: 2405 + 5(k-1) MHz.
double wpan_center(int k);
Band wpan_band(int k);

/// 802.11b channel n (1..11): 22 MHz around 2412 + 5(n-1) MHz.
Band wlan_span(int n);

ChannelSpec wlan_channel(int n);
ChannelSpec wpan_channel(int k);

struct Overlap {
  bool overlapping = false;
  double mhz = 0.0;
};

/// Spectral overlap between WLAN channel n and WPAN channel k.
Overlap overlaps(int wlan_id, int wpan_id);

}  // namespace coexsim
