#pragma once

#include "ftvn/core.hpp"

namespace ftvn {

// x is central iff lambda(-x) = -lambda(x).
bool in_center(const System& sys, const Element& x, double tol = kDefaultTol);

// Probes witness_a3(c, lambda(x)) for random c; the orbit is a singleton iff
// every maximizer is x itself.
bool orbit_singleton(const System& sys, const Element& x, int n_probe = 32,
                     uint64_t seed = 0, double tol = kDefaultTol);

// The designated unit when the center is a line; absent otherwise.
std::optional<Element> unit_element(const System& sys);

struct Decomposition {
    Element center_part;
    Element orthogonal_part;
};

// Orthogonal split x = x_c + x_perp along V = C + C^perp.
Decomposition decompose(const System& sys, const Element& x);

// Samples the lineality identity lambda(C) = lambda(V) cap -lambda(V): range
// membership of -lambda(x) and centrality of x must imply each other. Center
// directions are injected into the sample stream so the nontrivial direction
// is exercised.
CheckReport lineality_check(const System& sys, long n_samples, uint64_t seed,
                            double tol = kDefaultTol, int jobs = 1);

} // namespace ftvn
