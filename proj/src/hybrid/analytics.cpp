#include "etsyn/hybrid/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace etsyn::hybrid {

double otimes(double f1, double f2) {
  if (!std::isfinite(f1) || !std::isfinite(f2)) throw DomainError("otimes: non-finite argument");
  if (f1 < 0.0 && f2 < 0.0) return -f1 * f2;
  if (f1 > 0.0 || f2 > 0.0) return f1 * f2;
  return std::min(f1, f2);
}

std::vector<JumpRecord> sorted_records(std::span<const JumpRecord> records) {
  std::vector<JumpRecord> out(records.begin(), records.end());
  std::ranges::sort(out, [](const JumpRecord& a, const JumpRecord& b) { return a.j_pre < b.j_pre; });
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (out[k].j_pre == out[k - 1].j_pre) {
      std::ostringstream os;
      os << "two jump records share jump counter j=" << out[k].j_pre;
      throw MalformedLogError(os.str());
    }
    if (out[k].t < out[k - 1].t) {
      std::ostringstream os;
      os << "jump time decreases between j=" << out[k - 1].j_pre << " and j=" << out[k].j_pre;
      throw MalformedLogError(os.str());
    }
  }
  for (const auto& r : out) {
    if (!std::isfinite(r.t) || r.t < 0.0) throw MalformedLogError("jump record with invalid time");
  }
  return out;
}

JumpSets classify_jumps(std::span<const JumpRecord> records) {
  JumpSets sets;
  for (const auto& r : sorted_records(records)) {
    auto& target = r.family == JumpFamily::Transmission ? sets.transmission : sets.synergistic;
    target.push_back(r.time());
  }
  return sets;
}

double delta_t(std::span<const JumpRecord> records) {
  const auto sets = classify_jumps(records);
  // Sorted by j, hence by t: the infimum over pairs is the smallest consecutive gap.
  double best = kInfinity;
  const HybridTime* prev = nullptr;
  for (const auto& h : sets.transmission) {
    if (h.j == 0) continue;
    if (prev != nullptr) best = std::min(best, h.t - prev->t);
    prev = &h;
  }
  return best;
}

HybridTimeDomain domain_from_records(std::span<const JumpRecord> records, double t_end) {
  const auto sorted = sorted_records(records);
  std::vector<Interval> intervals;
  double start = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k].j_pre != k) {
      std::ostringstream os;
      os << "jump log skips counter j=" << k;
      throw MalformedLogError(os.str());
    }
    intervals.push_back({start, sorted[k].t, k});
    start = sorted[k].t;
  }
  if (t_end < start) throw MalformedLogError("log ends before its last jump");
  intervals.push_back({start, t_end, sorted.size()});
  return HybridTimeDomain(std::move(intervals));
}

HybridTimeDomain deparametrize(const HybridTimeDomain& domain, std::span<const JumpRecord> records) {
  const auto sorted = sorted_records(records);
  if (sorted.size() + 1 != domain.size()) {
    std::ostringstream os;
    os << "domain has " << domain.size() - 1 << " jumps but the log has " << sorted.size();
    throw MalformedLogError(os.str());
  }
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto& r = sorted[k];
    if (r.j_pre != k || domain[k].t_end != r.t || domain[k + 1].t_start != r.t) {
      std::ostringstream os;
      os << "jump record (" << r.t << ", " << r.j_pre << ") is not on a boundary of the domain";
      throw MalformedLogError(os.str());
    }
  }

  std::vector<Interval> merged;
  std::size_t counter = 0;
  for (std::size_t j = 0; j < domain.size(); ++j) {
    if (j > 0 && sorted[j - 1].family == JumpFamily::Transmission) ++counter;
    const auto& iv = domain[j];
    if (!merged.empty() && merged.back().j == counter) {
      merged.back().t_end = iv.t_end;
    } else {
      merged.push_back({iv.t_start, iv.t_end, counter});
    }
  }
  return HybridTimeDomain(std::move(merged));
}

DwellResult dwell_time(const HybridTimeDomain& domain) {
  double tau = kInfinity;
  for (std::size_t j = 1; j < domain.size(); ++j) tau = std::min(tau, domain[j].length());
  if (tau > 0.0) return {true, tau};
  return {false, 0.0};
}

bool weak_dwell_time(const HybridTimeDomain& domain, double tau) {
  if (!(tau > 0.0)) throw DomainError("weak_dwell_time: tau must be positive");
  // Walk backwards keeping the longest interval at or after j.
  double suffix_max = 0.0;
  for (std::size_t j = domain.size(); j-- > 1;) {
    suffix_max = std::max(suffix_max, domain[j].length());
    if (suffix_max < tau) return false;
  }
  return true;
}

std::size_t max_transmissions_per_instant(std::span<const JumpRecord> records) {
  std::map<double, std::size_t> per_instant;
  std::size_t best = 0;
  for (const auto& r : records) {
    if (r.family != JumpFamily::Transmission) continue;
    best = std::max(best, ++per_instant[r.t]);
  }
  return best;
}

DwellReport analyze(const HybridTimeDomain& domain, std::span<const JumpRecord> records,
                    bool unbounded_tail) {
  const HybridTimeDomain effective = unbounded_tail ? domain.with_unbounded_tail() : domain;
  const auto sets = classify_jumps(records);
  const auto deparam = deparametrize(effective, records);

  DwellReport report;
  report.delta_t = delta_t(records);
  for (const auto& iv : deparam.intervals()) report.deparam_interval_lengths.push_back(iv.length());
  const auto dwell = dwell_time(deparam);
  report.has_dwell = dwell.has_dwell;
  report.dwell_tau = dwell.tau;

  // Best weak-dwell candidate: min over j >= 1 of max_{k >= j} |I_k|.
  double candidate = kInfinity;
  double suffix_max = 0.0;
  for (std::size_t j = deparam.size(); j-- > 1;) {
    suffix_max = std::max(suffix_max, deparam[j].length());
    candidate = std::min(candidate, suffix_max);
  }
  if (std::isinf(candidate)) {
    report.has_weak_dwell = true;
  } else {
    report.has_weak_dwell = candidate > 0.0 && weak_dwell_time(deparam, candidate);
  }

  report.transmission_count = sets.transmission.size();
  report.synergistic_count = sets.synergistic.size();
  report.max_transmissions_per_instant = max_transmissions_per_instant(records);
  return report;
}

}  // namespace etsyn::hybrid
