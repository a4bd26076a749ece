#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "etsyn/hybrid/types.hpp"

namespace etsyn::hybrid {

/// Unified event-triggering combinator.
///
///   -f1*f2      if f1 < 0 and f2 < 0
///    f1*f2      if f1 > 0 or f2 > 0
///    min(f1,f2) otherwise
///
/// The result is nonnegative exactly when both arguments are nonnegative.
/// Throws DomainError for non-finite input.
[[nodiscard]] double otimes(double f1, double f2);

struct JumpSets {
  std::vector<HybridTime> transmission;  // E_D1
  std::vector<HybridTime> synergistic;   // E_D2
};

/// Records sorted by (t, j_pre). Throws MalformedLogError on a duplicate jump
/// counter or on jump times that decrease as j grows.
[[nodiscard]] std::vector<JumpRecord> sorted_records(std::span<const JumpRecord> records);

/// Partitions jump times by family. The two sets are disjoint by construction;
/// malformed logs throw.
[[nodiscard]] JumpSets classify_jumps(std::span<const JumpRecord> records);

/// Greatest lower bound of the elapsed time between transmissions, over pairs
/// (t1, j1), (t2, j2) with 0 < j1 < j2. A transmission at j = 0 is excluded.
/// Returns +inf when fewer than two qualifying transmissions exist.
[[nodiscard]] double delta_t(std::span<const JumpRecord> records);

/// Re-indexes the domain so the jump counter only counts transmissions.
/// Interval j of the original domain gets counter #(transmissions with j_pre < j);
/// intervals sharing a counter are merged. Throws MalformedLogError when the
/// records do not match the domain's jump boundaries.
[[nodiscard]] HybridTimeDomain deparametrize(const HybridTimeDomain& domain,
                                             std::span<const JumpRecord> records);

struct DwellResult {
  bool has_dwell = false;
  double tau = 0.0;  // inf_{j>=1} |I_j|; +inf when vacuous, 0 when no dwell
};

[[nodiscard]] DwellResult dwell_time(const HybridTimeDomain& domain);

/// True iff for every j >= 1 some k >= j has |I_k| >= tau. tau <= 0 throws DomainError.
[[nodiscard]] bool weak_dwell_time(const HybridTimeDomain& domain, double tau);

struct DwellReport {
  double delta_t = kInfinity;
  std::vector<double> deparam_interval_lengths;
  bool has_dwell = false;
  double dwell_tau = 0.0;
  bool has_weak_dwell = false;
  std::size_t transmission_count = 0;
  std::size_t synergistic_count = 0;
  /// Largest number of transmissions sharing one continuous time instant.
  std::size_t max_transmissions_per_instant = 0;
};

/// Full analysis of one execution. With unbounded_tail the last interval is
/// treated as infinite (the run was cut by the horizon, not by the dynamics).
[[nodiscard]] DwellReport analyze(const HybridTimeDomain& domain,
                                  std::span<const JumpRecord> records,
                                  bool unbounded_tail);

/// max over t of #(transmissions at t); the "at most one transmission per
/// instant" invariant holds iff this is <= 1.
[[nodiscard]] std::size_t max_transmissions_per_instant(std::span<const JumpRecord> records);

/// Rebuilds the hybrid time domain implied by a jump log ending at t_end.
[[nodiscard]] HybridTimeDomain domain_from_records(std::span<const JumpRecord> records,
                                                   double t_end);

}  // namespace etsyn::hybrid
