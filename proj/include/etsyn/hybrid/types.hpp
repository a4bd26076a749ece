#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace etsyn::hybrid {

using State = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when a jump log or hybrid time domain violates its structural invariants.
class MalformedLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an analytic operation receives an argument outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One hybrid time (t, j).
struct HybridTime {
  double t = 0.0;
  std::size_t j = 0;

  friend bool operator==(const HybridTime&, const HybridTime&) = default;
  friend auto operator<=>(const HybridTime&, const HybridTime&) = default;
};

/// [t_start, t_end] x {j}. Zero-length intervals are legal (several jumps at one t).
struct Interval {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t j = 0;

  [[nodiscard]] double length() const { return t_end - t_start; }
};

/// Compact hybrid time domain: the union of intervals I_j x {j}, j = 0..J.
///
/// The last interval may have t_end = +inf, which represents a solution that
/// keeps flowing forever after its final jump.
class HybridTimeDomain {
 public:
  HybridTimeDomain() = default;

  /// Validates ordering, contiguity and t_start = 0; throws MalformedLogError.
  explicit HybridTimeDomain(std::vector<Interval> intervals);

  /// Domain of a solution that only flows on [0, t_end].
  static HybridTimeDomain single(double t_end);

  [[nodiscard]] const std::vector<Interval>& intervals() const { return intervals_; }
  [[nodiscard]] std::size_t size() const { return intervals_.size(); }
  [[nodiscard]] bool empty() const { return intervals_.empty(); }
  [[nodiscard]] const Interval& operator[](std::size_t j) const { return intervals_[j]; }

  [[nodiscard]] double t_end() const;
  [[nodiscard]] std::size_t j_end() const;
  [[nodiscard]] double total_flow_time() const;

  /// Copy whose last interval is open-ended (t_end = +inf).
  [[nodiscard]] HybridTimeDomain with_unbounded_tail() const;

 private:
  std::vector<Interval> intervals_;
};

struct Sample {
  double t = 0.0;
  State x;
};

/// A hybrid arc sampled densely on each interval of its domain.
struct HybridArc {
  HybridTimeDomain domain;
  std::vector<std::vector<Sample>> samples;  // samples[j] covers domain[j]
  std::size_t dimension = 0;

  /// Throws MalformedLogError when any arc invariant fails.
  void validate() const;

  [[nodiscard]] std::size_t sample_count() const;
};

enum class JumpFamily { Transmission, Synergistic };

[[nodiscard]] char family_code(JumpFamily family);
[[nodiscard]] JumpFamily family_from_code(char code);
[[nodiscard]] std::string to_string(JumpFamily family);

/// One jump of an execution. j_post = j_pre + 1.
struct JumpRecord {
  double t = 0.0;
  std::size_t j_pre = 0;
  JumpFamily family = JumpFamily::Transmission;
  State state_pre;
  State state_post;

  [[nodiscard]] HybridTime time() const { return {t, j_pre}; }
};

}  // namespace etsyn::hybrid
