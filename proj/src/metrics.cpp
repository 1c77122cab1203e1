#include "coexsim/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace coexsim {

void MetricsCollector::record(const RxRecord& rec) {
  if (rec.rx_end < rec.created_at) {
    throw std::invalid_argument(fmt::format("frame {} received before it was created", rec.frame_id));
  }
  if (!seen_.insert(rec.frame_id).second) {
    throw std::invalid_argument(fmt::format("frame {} recorded twice", rec.frame_id));
  }
  records_.push_back(rec);
}

MetricsSummary MetricsCollector::summarize(SimTime duration) const {
  if (duration <= SimTime{0}) throw std::invalid_argument("summary needs a positive duration");

  MetricsSummary m;
  m.sent = sent_;
  m.access_failures = access_failures_;
  m.queue_drops = queue_drops_;

  std::vector<const RxRecord*> delivered;
  for (const RxRecord& r : records_) {
    switch (r.outcome) {
      case Outcome::Delivered:
        ++m.delivered;
        m.delivered_bytes += static_cast<std::uint64_t>(r.payload_bytes);
        delivered.push_back(&r);
        break;
      case Outcome::Corrupted:
        ++m.frames_with_errors;
        m.bytes_with_errors += static_cast<std::uint64_t>(r.payload_bytes);
        break;
      case Outcome::NotReceived:
        ++m.not_received;
        break;
    }
  }

  m.throughput_bps = 8.0 * static_cast<double>(m.delivered_bytes) * 1e6 /
                     static_cast<double>(duration.count());
  m.empty = delivered.empty();
  if (m.empty) return m;

  std::stable_sort(delivered.begin(), delivered.end(),
                   [](const RxRecord* a, const RxRecord* b) { return a->rx_end < b->rx_end; });

  std::int64_t delay_sum = 0;
  std::int64_t jitter_sum = 0;
  for (std::size_t i = 0; i < delivered.size(); ++i) {
    const auto d = delivered[i]->delay().count();
    delay_sum += d;
    if (i > 0) jitter_sum += std::llabs(d - delivered[i - 1]->delay().count());
  }
  m.avg_e2e_delay_s = static_cast<double>(delay_sum) / static_cast<double>(delivered.size()) * 1e-6;
  if (delivered.size() > 1) {
    m.avg_jitter_s =
        static_cast<double>(jitter_sum) / static_cast<double>(delivered.size() - 1) * 1e-6;
  }
  return m;
}

}  // namespace coexsim
