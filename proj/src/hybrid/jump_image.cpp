#include "etsyn/hybrid/jump_image.hpp"

#include <sstream>

namespace etsyn::hybrid {

std::vector<std::vector<State>> recursive_jump_image(const JumpMap& jump_map,
                                                     const Membership& in_jump_set, std::size_t k,
                                                     std::span<const State> seeds,
                                                     std::size_t depth_bound) {
  if (k > depth_bound) {
    std::ostringstream os;
    os << "recursive jump image depth " << k << " exceeds bound " << depth_bound;
    throw DepthError(os.str());
  }
  std::vector<std::vector<State>> images;
  images.reserve(seeds.size());
  for (const auto& seed : seeds) {
    std::vector<State> current{seed};
    for (std::size_t step = 0; step < k; ++step) {
      std::vector<State> next;
      for (const auto& v : current) {
        if (!in_jump_set(v)) continue;
        auto branch = jump_map(v);
        next.insert(next.end(), std::make_move_iterator(branch.begin()),
                    std::make_move_iterator(branch.end()));
      }
      current = std::move(next);
    }
    images.push_back(std::move(current));
  }
  return images;
}

namespace {

// Draws until accept(x) holds or the budget runs out.
bool draw(const Sampler& sampler, const Membership& accept, std::mt19937_64& rng,
          std::size_t attempts, State& out) {
  for (std::size_t a = 0; a < attempts; ++a) {
    State x = sampler(rng);
    if (accept(x)) {
      out = std::move(x);
      return true;
    }
  }
  return false;
}

void run_check(ConditionCheck& check, const Sampler& sampler, const Membership& domain,
               const JumpMap& map, const Membership& forbidden, std::mt19937_64& rng,
               const SeparationOptions& options) {
  State x;
  for (std::size_t n = 0; n < options.n_samples; ++n) {
    if (!draw(sampler, domain, rng, options.attempts_per_sample, x)) {
      check.sampling_failed = true;
      return;
    }
    ++check.samples;
    for (const auto& g : map(x)) {
      if (forbidden(g)) {
        ++check.violations;
        if (check.witnesses.size() < options.max_witnesses) check.witnesses.push_back(x);
        break;
      }
    }
  }
}

}  // namespace

SeparationReport check_separation(const std::array<JumpFamilyData, 2>& families,
                                  const Sampler& sampler, const SeparationOptions& options) {
  std::mt19937_64 rng(options.seed);
  SeparationReport report;
  const Membership in_any = [&](const State& x) {
    return families[0].in_jump_set(x) || families[1].in_jump_set(x);
  };
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& own = families[i];
    const auto& other = families[1 - i];
    run_check(report.c1[i], sampler, own.in_jump_set, own.map, own.in_jump_set, rng, options);
    const Membership only_own = [&](const State& x) {
      return own.in_jump_set(x) && !other.in_jump_set(x);
    };
    run_check(report.c2[i], sampler, only_own, own.map, in_any, rng, options);
  }
  return report;
}

std::string SeparationReport::summary() const {
  std::ostringstream os;
  const auto line = [&os](const char* name, std::size_t i, const ConditionCheck& c) {
    os << name << "(" << i + 1 << "): " << c.violations << "/" << c.samples << " violations";
    if (c.sampling_failed) os << " [sampling failed]";
    os << '\n';
  };
  for (std::size_t i = 0; i < 2; ++i) line("C1'", i, c1[i]);
  for (std::size_t i = 0; i < 2; ++i) line("C2'", i, c2[i]);
  return os.str();
}

}  // namespace etsyn::hybrid
