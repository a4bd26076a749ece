#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "etsyn/hybrid/types.hpp"

namespace etsyn::hybrid {

/// Shortest decimal text that parses back to exactly the same double.
[[nodiscard]] std::string format_double(double value);

/// Parses a full token as a double ("inf", "-inf" and "nan" accepted).
/// Throws MalformedLogError on trailing garbage.
[[nodiscard]] double parse_double(std::string_view token);

/// Run summary carried in the trailer of a jump log.
struct RunSummary {
  std::string termination;  // TerminationReason kind name
  double t_end = 0.0;
  std::size_t j_end = 0;
  std::size_t transmissions = 0;
  std::size_t synergistic = 0;
  double wall_seconds = 0.0;
};

struct JumpLog {
  std::size_t dimension = 0;
  std::vector<JumpRecord> records;
  std::optional<RunSummary> summary;
};

inline constexpr std::string_view kJumpLogMagic = "# etsyn-jump-log v1";

/// Line format, comma separated:
///   t,j_pre,family,pre_0..pre_{n-1},post_0..post_{n-1}
/// with family in {T, S}. Header lines start with '#':
///   # etsyn-jump-log v1
///   # dimension <n>
/// and an optional trailer
///   # summary termination=<kind> t_end=<t> j_end=<j> transmissions=<n> synergistic=<n> wall_s=<s>
void write_jump_log(std::ostream& out, const JumpLog& log);

/// Throws MalformedLogError with the offending line number.
[[nodiscard]] JumpLog read_jump_log(std::istream& in);

void save_jump_log(const std::string& path, const JumpLog& log);
[[nodiscard]] JumpLog load_jump_log(const std::string& path);

}  // namespace etsyn::hybrid
