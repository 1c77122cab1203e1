#include "coexsim/dcf_wlan.hpp"

#include <algorithm>
#include <stdexcept>

namespace coexsim {

void DcfParams::validate() const {
  if (cw_min <= 0 || cw_max <= 0 || retry_limit < 0) {
    throw std::invalid_argument("DCF contention parameters must be positive");
  }
  if (cw_min >= cw_max) throw std::invalid_argument("cw_min must be below cw_max");
  if (slot <= SimTime{0} || difs <= SimTime{0} || sifs <= SimTime{0}) {
    throw std::invalid_argument("DCF durations must be positive");
  }
}

std::string_view to_string(DcfPhase phase) {
  switch (phase) {
    case DcfPhase::Idle: return "idle";
    case DcfPhase::Difs: return "difs";
    case DcfPhase::Backoff: return "backoff";
    case DcfPhase::Transmit: return "transmit";
  }
  return "unknown";
}

DcfMac::DcfMac(DcfParams params) : params_(params), cw_(params.cw_min) { params_.validate(); }

std::optional<SimTime> DcfMac::deadline() const {
  switch (phase_) {
    case DcfPhase::Difs:
      return idle_since_ + params_.difs;
    case DcfPhase::Backoff:
      if (frozen_) return std::nullopt;
      return idle_since_ + params_.difs + slots_ * params_.slot;
    default:
      return std::nullopt;
  }
}

bool DcfMac::enqueue(Frame frame, SimTime now, bool medium_idle) {
  if (pending_) {
    if (queue_.size() >= params_.queue_depth) {
      ++queue_drops_;
      return false;
    }
    queue_.push_back(frame);
    return true;
  }
  queue_.push_back(frame);
  start_next(now, medium_idle, false);
  return true;
}

void DcfMac::start_next(SimTime now, bool medium_idle, bool after_transmission) {
  if (queue_.empty()) {
    phase_ = DcfPhase::Idle;
    return;
  }
  pending_ = queue_.front();
  queue_.pop_front();
  rng_ = make_rng(pending_->rng_key);
  retries_ = 0;
  if (medium_idle && !after_transmission) {
    phase_ = DcfPhase::Difs;
    frozen_ = false;
    idle_since_ = now;
  } else {
    enter_backoff(now, medium_idle);
  }
}

void DcfMac::enter_backoff(SimTime now, bool medium_idle) {
  slots_ = uniform_int(rng_, 0, cw_);
  phase_ = DcfPhase::Backoff;
  frozen_ = !medium_idle;
  idle_since_ = now;
}

void DcfMac::on_medium_busy(SimTime now) {
  const auto due = deadline();
  if (due && *due <= now) return;  // countdown ends in this slot: transmit anyway
  if (phase_ == DcfPhase::Difs) {
    enter_backoff(now, false);
    return;
  }
  if (phase_ != DcfPhase::Backoff || frozen_) return;
  const SimTime counting_from = idle_since_ + params_.difs;
  if (now > counting_from) {
    const std::int64_t consumed = (now - counting_from) / params_.slot;
    slots_ = std::max<std::int64_t>(0, slots_ - consumed);
  }
  frozen_ = true;
}

void DcfMac::on_medium_idle(SimTime now) {
  if (phase_ == DcfPhase::Backoff && frozen_) {
    frozen_ = false;
    idle_since_ = now;
  }
}

const Frame& DcfMac::begin_transmission(SimTime now) {
  const auto due = deadline();
  if (!pending_ || on_air_ || !due || *due != now) {
    throw std::logic_error("DCF transmission requested outside its slot");
  }
  phase_ = DcfPhase::Transmit;
  on_air_ = true;
  ++attempts_;
  pending_->tx_start = now;
  return *pending_;
}

void DcfMac::on_transmission_done(bool delivered, SimTime now, bool medium_idle) {
  if (!on_air_) throw std::logic_error("DCF transmission done while not on air");
  on_air_ = false;
  if (delivered) {
    ++delivered_;
    cw_ = params_.cw_min;
    pending_.reset();
    start_next(now, medium_idle, true);
    return;
  }
  ++retries_;
  if (retries_ > params_.retry_limit) {
    ++retry_drops_;
    cw_ = params_.cw_min;
    pending_.reset();
    start_next(now, medium_idle, true);
    return;
  }
  cw_ = std::min(2 * cw_ + 1, params_.cw_max);
  enter_backoff(now, medium_idle);
}

}  // namespace coexsim
