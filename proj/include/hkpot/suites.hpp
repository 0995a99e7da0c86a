#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hkpot/lie_classical.hpp"
#include "hkpot/quiver.hpp"
#include "hkpot/random.hpp"

namespace hkpot {

struct PropertyResult {
  std::string name;
  int passed = 0;
  int total = 0;
  double worst = 0.0;      ///< largest deviation seen
  double tolerance = 0.0;
  std::optional<std::uint64_t> failing_seed;  ///< first failing sample
  std::string failure;                        ///< its message
  bool ok() const { return total > 0 && passed == total; }
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<PropertyResult> properties;
  bool ok() const;
};

/// Sample i of a suite run with base seed s draws from Rng(s + i), so a
/// failure reproduces with --seed s+i --count 1.
SuiteResult run_suite(const std::string& name, std::uint64_t seed, int count);
std::vector<std::string> suite_names();

// Samplers shared with the tests.

/// Random partition of n valid for the family, longest part <= max_part.
JordanType random_partition(int n, Family f, int max_part, Rng& rng);
/// Random diagram of length 2 or 3 together with a random point on it.
std::pair<Diagram, DiagramPoint> random_diagram_point(Rng& rng);
CanonicalFiberParams random_fiber_params(FiberVariant variant, Rng& rng);

}  // namespace hkpot
