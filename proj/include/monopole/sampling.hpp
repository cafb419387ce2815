#pragma once

#include <cstdint>
#include <optional>

#include "monopole/integrals.hpp"
#include "monopole/model.hpp"

namespace monopole {

/// Counter-based generator: every draw is a pure function of
/// (seed, index, dim), so parallel and serial sampling orders agree.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  double uniform(std::uint64_t index, std::uint64_t dim) const {
    const std::uint64_t bits =
        mix(mix(seed_ ^ mix(index * 0x9e3779b97f4a7c15ULL)) ^
            (dim + 1) * 0xbf58476d1ce4e5b9ULL);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t index, std::uint64_t dim, double lo,
                 double hi) const {
    return lo + (hi - lo) * uniform(index, dim);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

struct SampleBox {
  double p_min = -2.0;
  double p_max = 2.0;
};

/// Uniform draw inside the validated window, momenta in the sample box.
inline PhasePoint sample_point(const Model& mdl, const CounterRng& rng,
                               std::uint64_t index, const SampleBox& box = {}) {
  const auto& w = mdl.win;
  return {rng.uniform(index, 0, w.r_min, w.r_max),
          rng.uniform(index, 1, w.theta_margin,
                      std::numbers::pi - w.theta_margin),
          rng.uniform(index, 2, 0.0, mdl.phi_period),
          rng.uniform(index, 3, box.p_min, box.p_max),
          rng.uniform(index, 4, box.p_min, box.p_max),
          rng.uniform(index, 5, box.p_min, box.p_max)};
}

/// Draw with S > 0 (required wherever sqrt(S) appears); returns nullopt if
/// no admissible point shows up within max_tries consecutive indices.
inline std::optional<PhasePoint> sample_point_positive_S(
    const Model& mdl, const CounterRng& rng, std::uint64_t index,
    std::uint64_t stride, int max_tries = 64, const SampleBox& box = {}) {
  for (int t = 0; t < max_tries; ++t) {
    const PhasePoint z = sample_point(mdl, rng, index + t * stride, box);
    if (x2_at(mdl, z.state()) + mdl.k2m2 > 0.0) return z;
  }
  return std::nullopt;
}

}  // namespace monopole
