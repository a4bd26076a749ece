#include "etsyn/hybrid/types.hpp"

#include <cmath>
#include <sstream>

namespace etsyn::hybrid {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw MalformedLogError(what); }

}  // namespace

HybridTimeDomain::HybridTimeDomain(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) malformed("hybrid time domain has no intervals");
  if (intervals_.front().t_start != 0.0) malformed("hybrid time domain must start at t = 0");
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const Interval& iv = intervals_[k];
    if (iv.j != k) {
      std::ostringstream os;
      os << "interval " << k << " carries jump counter " << iv.j;
      malformed(os.str());
    }
    if (std::isnan(iv.t_start) || std::isnan(iv.t_end) || !(iv.t_start <= iv.t_end)) {
      std::ostringstream os;
      os << "interval j=" << k << " has t_start > t_end";
      malformed(os.str());
    }
    if (k > 0 && intervals_[k - 1].t_end != iv.t_start) {
      std::ostringstream os;
      os << "interval j=" << k << " does not start where j=" << k - 1 << " ends";
      malformed(os.str());
    }
    if (k + 1 < intervals_.size() && std::isinf(iv.t_end)) malformed("only the last interval may be unbounded");
  }
}

HybridTimeDomain HybridTimeDomain::single(double t_end) { return HybridTimeDomain({Interval{0.0, t_end, 0}}); }

double HybridTimeDomain::t_end() const { return intervals_.empty() ? 0.0 : intervals_.back().t_end; }

std::size_t HybridTimeDomain::j_end() const { return intervals_.empty() ? 0 : intervals_.back().j; }

double HybridTimeDomain::total_flow_time() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

HybridTimeDomain HybridTimeDomain::with_unbounded_tail() const {
  auto copy = intervals_;
  if (!copy.empty()) copy.back().t_end = kInfinity;
  return HybridTimeDomain(std::move(copy));
}

void HybridArc::validate() const {
  if (samples.size() != domain.size()) malformed("arc sample list does not match its domain");
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto& iv = domain[j];
    const auto& ss = samples[j];
    if (ss.empty()) {
      std::ostringstream os;
      os << "interval j=" << j << " has no samples";
      malformed(os.str());
    }
    for (std::size_t k = 0; k < ss.size(); ++k) {
      if (ss[k].t < iv.t_start || ss[k].t > iv.t_end) {
        std::ostringstream os;
        os << "sample t=" << ss[k].t << " lies outside interval j=" << j;
        malformed(os.str());
      }
      if (static_cast<std::size_t>(ss[k].x.size()) != dimension) malformed("sample dimension mismatch");
      if (k > 0 && !(ss[k - 1].t < ss[k].t)) {
        std::ostringstream os;
        os << "sample times not strictly increasing in interval j=" << j;
        malformed(os.str());
      }
    }
    if (ss.front().t != iv.t_start) malformed("missing sample at interval start");
    if (std::isfinite(iv.t_end) && ss.back().t != iv.t_end) malformed("missing sample at interval end");
  }
}

std::size_t HybridArc::sample_count() const {
  std::size_t n = 0;
  for (const auto& ss : samples) n += ss.size();
  return n;
}

char family_code(JumpFamily family) { return family == JumpFamily::Transmission ? 'T' : 'S'; }

JumpFamily family_from_code(char code) {
  switch (code) {
    case 'T':
      return JumpFamily::Transmission;
    case 'S':
      return JumpFamily::Synergistic;
    default:
      throw MalformedLogError(std::string("unknown jump family code '") + code + "'");
  }
}

std::string to_string(JumpFamily family) {
  return family == JumpFamily::Transmission ? "transmission" : "synergistic";
}

}  // namespace etsyn::hybrid
