#pragma once

#include "ftvn/core.hpp"
#include "ftvn/majorization.hpp"

namespace ftvn {

// The companion system (W, W, mu) of a base system, with mu realized as the
// W-side system's own spectral map.
struct ReducedPair {
    System base;
    System reduced;

    Spectrum mu(const Spectrum& q) const { return reduced.lambda_of(Element{q.coords}); }
    bool range_w(const Spectrum& q, double tol) const { return reduced.range_contains(q, tol); }
};

// mu = sort-descending for RnDown/Sym/Spin, abs-then-sort for
// RnAbs/SingVal/FiniteSeq, identity for Discrete. Other instances are
// unsupported.
ReducedPair make_reduced_pair(const System& sys);

// (C1) mu(lambda(x)) = lambda(x), (C2) ran mu inside ran lambda, idempotence,
// and range equality, all on samples.
CheckReport check_reduced(const ReducedPair& pair, long n_samples, uint64_t seed,
                          double tol = 1e-10, int jobs = 1);

// Center dimensions match across the pair and lambda maps the V-side unit
// onto the W-side center line.
CheckReport center_correspondence(const ReducedPair& pair, double tol = kDefaultTol);

// Dual-cone majorization: u, v in F = ran lambda with u - v in F* forces
// v majorized by u in W. The F* test is exact for the decreasing and
// nonnegative-decreasing cones; SingVal falls back to sampled directions
// (noted in the report).
CheckReport dual_cone_majorization_check(const ReducedPair& pair, const Spectrum& u,
                                         const Spectrum& v, long n_dirs, uint64_t seed,
                                         double tol = kDefaultTol);

} // namespace ftvn
