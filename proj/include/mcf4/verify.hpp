#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcf4/forms.hpp"

// Seeded batch verification of the forms module: eigen-pair identities,
// comass against the sampling oracle, adapted-basis normal forms. Shared by
// the `verify-forms` CLI subcommand and the test suite.

namespace mcf4::verify {

enum class Mutation {
  None,
  // Self-test hook: flips the relative sign inside the anti-self-dual input,
  // which must make the adapted-basis property fail.
  BetaSignFlip,
};

struct PropertyResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed deviation
  double tol = 0.0;
  std::string detail;
};

struct VerifyReport {
  int batch = 0;
  std::uint64_t seed = 0;
  bool vacuous = false;  // batch == 0
  std::vector<PropertyResult> properties;
  bool all_pass() const;
};

VerifyReport verify_forms(int batch = 1000, std::uint64_t seed = 42,
                          Mutation mutation = Mutation::None,
                          int oracle_samples = 1024);

/// Standard Kahler pair on R^4 with coordinates (x1, y1, x2, y2):
/// omega' = dx1^dy1 + dx2^dy2, omega'' = dx1^dy1 - dx2^dy2.
forms::TwoForm4 standard_omega_prime();
forms::TwoForm4 standard_omega_double_prime();

/// Haar-ish random rotation and random oriented plane, for tests.
Mat4 random_rotation4(std::uint64_t seed);
forms::OrientedPlane2 random_plane(std::uint64_t seed);

}  // namespace mcf4::verify
