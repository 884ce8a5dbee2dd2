#pragma once

#include "ftvn/core.hpp"

namespace ftvn {

// Verifies lambda(Ax) = lambda(x) on samples, invertibility, and that A fixes
// the center pointwise.
CheckReport is_automorphism(const System& sys, const LinearMap& map, long n_samples,
                            uint64_t seed, double tol = kDefaultTol, int jobs = 1);

// Draws from the instance's automorphism group.
LinearMap sample_automorphism(const System& sys, uint64_t seed);
LinearMap sample_automorphism(const System& sys, Rng& rng);

// Constructive A with Ax = y for two elements on the same orbit. Throws
// OrbitMismatchError when lambda(x) != lambda(y) and UnsupportedError when the
// instance ships no construction.
LinearMap orbit_transport(const System& sys, const Element& x, const Element& y,
                          double tol = kDefaultTol);

// Normal-decomposition-system characterization: with the declared W -> V
// embedding, lambda is idempotent and orbit transport reaches witness-built
// orbit mates.
CheckReport nds_check(const System& sys, long n_samples, uint64_t seed,
                      double tol = kDefaultTol, int jobs = 1);

} // namespace ftvn
