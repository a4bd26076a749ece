#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etsyn/attitude/trigger.hpp"
#include "etsyn/hybrid/types.hpp"

namespace etsyn::experiments {

inline constexpr std::string_view kTimeSeriesMagic = "# etsyn-timeseries v1";
inline constexpr std::string_view kInterTransmissionMagic = "# etsyn-intertransmission v1";
inline constexpr std::string_view kVerdictMagic = "# etsyn-verdicts v1";

/// One row per kept sample: t,j,V1,omega_norm,gamma,jump,x0..x{n-1}.
/// jump is T or S on the last sample before a jump of that family and '-' elsewhere.
struct TimeSeriesRow {
  double t = 0.0;
  std::size_t j = 0;
  double v1 = 0.0;
  double omega_norm = 0.0;
  double gamma = 0.0;
  char jump = '-';
  hybrid::State x;
};

struct TimeSeries {
  std::size_t dimension = 0;
  std::vector<TimeSeriesRow> rows;
};

/// Keeps every stride-th flow sample plus the first and last sample of each interval,
/// so the reloaded arc has the same hybrid time domain.
void write_timeseries(std::ostream& out, const hybrid::HybridArc& arc, std::span<const hybrid::JumpRecord> jumps,
                      const attitude::SynergisticParams& p, const attitude::TriggerParams& trigger,
                      std::size_t stride = 1);

/// Throws MalformedLogError with the offending line number.
[[nodiscard]] TimeSeries read_timeseries(std::istream& in);

/// Rebuilds the hybrid arc; throws MalformedLogError when rows are out of order.
[[nodiscard]] hybrid::HybridArc arc_from_timeseries(const TimeSeries& series);

/// Elapsed time between consecutive transmissions that occur at jump counters j ≥ 1.
struct InterTransmission {
  double t = 0.0;
  double elapsed = 0.0;
  std::size_t j_pre = 0;
};

[[nodiscard]] std::vector<InterTransmission> inter_transmissions(std::span<const hybrid::JumpRecord> jumps);
void write_inter_transmissions(std::ostream& out, std::span<const InterTransmission> rows);
[[nodiscard]] std::vector<InterTransmission> read_inter_transmissions(std::istream& in);

}  // namespace etsyn::experiments
