#include "coexsim/csma_lrwpan.hpp"

#include <algorithm>
#include <stdexcept>

namespace coexsim {

void CsmaParams::validate() const {
  if (mac_min_be <= 0 || a_max_be <= 0 || mac_max_csma_backoffs <= 0 || cw0 <= 0) {
    throw std::invalid_argument("CSMA parameters must be positive");
  }
  if (mac_min_be > a_max_be) throw std::invalid_argument("macMinBE exceeds aMaxBE");
  if (unit_backoff <= SimTime{0}) throw std::invalid_argument("unit backoff must be positive");
  if (a_max_be > 30) throw std::invalid_argument("aMaxBE too large");
}

std::string_view to_string(CsmaPhase phase) {
  switch (phase) {
    case CsmaPhase::Idle: return "idle";
    case CsmaPhase::Backoff: return "backoff";
    case CsmaPhase::Cca: return "cca";
    case CsmaPhase::Transmit: return "transmit";
  }
  return "unknown";
}

SlottedCsma::SlottedCsma(CsmaParams params) : params_(params) { params_.validate(); }

SimTime SlottedCsma::boundary_at_or_after(SimTime t) const {
  const auto unit = params_.unit_backoff.count();
  const auto slots = (t.count() + unit - 1) / unit;
  return SimTime{slots * unit};
}

bool SlottedCsma::enqueue(Frame frame, SimTime now) {
  if (pending_) {
    if (queue_.size() >= params_.queue_depth) {
      ++queue_drops_;
      return false;
    }
    queue_.push_back(frame);
    return true;
  }
  queue_.push_back(frame);
  start_next(now);
  return true;
}

void SlottedCsma::start_next(SimTime now) {
  if (queue_.empty()) {
    phase_ = CsmaPhase::Idle;
    deadline_.reset();
    return;
  }
  pending_ = queue_.front();
  queue_.pop_front();
  rng_ = make_rng(pending_->rng_key);
  nb_ = 0;
  be_ = params_.mac_min_be;
  cw_ = params_.cw0;
  phase_ = CsmaPhase::Backoff;
  draw_backoff(boundary_at_or_after(now));
}

void SlottedCsma::draw_backoff(SimTime from_boundary) {
  const std::int64_t max_periods = (std::int64_t{1} << be_) - 1;
  last_backoff_ = uniform_int(rng_, 0, max_periods);
  deadline_ = from_boundary + last_backoff_ * params_.unit_backoff;
}

void SlottedCsma::on_backoff_expired(SimTime now) {
  if (phase_ != CsmaPhase::Backoff) throw std::logic_error("backoff expiry outside Backoff");
  phase_ = CsmaPhase::Cca;
  deadline_ = boundary_at_or_after(now);
}

void SlottedCsma::on_cca(CcaResult result, SimTime now) {
  if (phase_ != CsmaPhase::Cca) throw std::logic_error("CCA sample outside CCA phase");
  if (result == CcaResult::Clear) {
    --cw_;
    if (cw_ == 0) phase_ = CsmaPhase::Transmit;
    deadline_ = boundary_at_or_after(now + SimTime{1});
    return;
  }
  ++nb_;
  be_ = std::min(be_ + 1, params_.a_max_be);
  cw_ = params_.cw0;
  if (nb_ > params_.mac_max_csma_backoffs) {
    on_channel_access_failure(now);
    return;
  }
  phase_ = CsmaPhase::Backoff;
  draw_backoff(boundary_at_or_after(now + SimTime{1}));
}

void SlottedCsma::on_channel_access_failure(SimTime now) {
  if (nb_ <= params_.mac_max_csma_backoffs) {
    throw std::logic_error("channel access failure before NB exceeded its limit");
  }
  ++access_failures_;
  pending_.reset();
  start_next(now + SimTime{1});
}

const Frame& SlottedCsma::begin_transmission(SimTime now) {
  if (phase_ != CsmaPhase::Transmit || on_air_ || !deadline_ || *deadline_ != now) {
    throw std::logic_error("transmission requested outside its slot");
  }
  on_air_ = true;
  deadline_.reset();
  pending_->tx_start = now;
  return *pending_;
}

void SlottedCsma::on_transmission_done(SimTime now) {
  if (!on_air_) throw std::logic_error("transmission done while not on air");
  on_air_ = false;
  pending_.reset();
  start_next(now);
}

}  // namespace coexsim
