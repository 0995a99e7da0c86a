#pragma once

#include <cstdint>
#include <random>

#include "hkpot/types.hpp"

namespace hkpot {

/// One step of the SplitMix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seeded generator with deterministic stream splitting.
///
/// Every random quantity in the library is drawn from an Rng passed in
/// explicitly; the output is bit-reproducible across platforms because the
/// engine is mt19937_64 and normals come from our own Box-Muller transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  /// Independent child stream; the same (seed, stream) always gives the
  /// same child.
  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

  double uniform();  ///< in [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  ///< inclusive
  double normal();
  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_normal();

  CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols);
  RMatrix real_gaussian(Eigen::Index rows, Eigen::Index cols);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hkpot
