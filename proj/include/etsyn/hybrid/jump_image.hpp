#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "etsyn/hybrid/types.hpp"

namespace etsyn::hybrid {

/// Set-valued jump map with finite branching.
using JumpMap = std::function<std::vector<State>(const State&)>;
using Membership = std::function<bool(const State&)>;

inline constexpr std::size_t kDefaultJumpDepthBound = 8;

class DepthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// G^k(v) for each seed, where G^0 = id, G^1 = G and G^{k+1}(v) = G(G^k(v) ∩ D).
/// G is only applied to points of D (dom G = D), so G^1(v) is empty for v outside D.
/// Throws DepthError when k exceeds depth_bound.
[[nodiscard]] std::vector<std::vector<State>> recursive_jump_image(
    const JumpMap& jump_map, const Membership& in_jump_set, std::size_t k,
    std::span<const State> seeds, std::size_t depth_bound = kDefaultJumpDepthBound);

/// Draws an unconstrained candidate state; rejection sampling narrows it to a jump set.
using Sampler = std::function<State(std::mt19937_64&)>;

struct JumpFamilyData {
  JumpMap map;
  Membership in_jump_set;
};

struct ConditionCheck {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::vector<State> witnesses;  // first few violating pre-jump states
  bool sampling_failed = false;

  [[nodiscard]] bool falsified() const { return violations > 0; }
};

/// Monte-Carlo falsification of the separation conditions
///   C1'(i): G_i(D_i) ∩ D_i = ∅
///   C2'(i): G_i(D_i \ D_{3-i}) ∩ (D_1 ∪ D_2) = ∅
/// Index 0 holds family 1, index 1 family 2.
struct SeparationReport {
  std::array<ConditionCheck, 2> c1;
  std::array<ConditionCheck, 2> c2;

  [[nodiscard]] std::size_t c1_violations() const { return c1[0].violations + c1[1].violations; }
  [[nodiscard]] std::size_t c2_violations() const { return c2[0].violations + c2[1].violations; }
  [[nodiscard]] std::string summary() const;
};

struct SeparationOptions {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
  std::size_t attempts_per_sample = 1000;  // rejection budget per accepted sample
  std::size_t max_witnesses = 5;
};

[[nodiscard]] SeparationReport check_separation(const std::array<JumpFamilyData, 2>& families,
                                                const Sampler& sampler,
                                                const SeparationOptions& options);

}  // namespace etsyn::hybrid
