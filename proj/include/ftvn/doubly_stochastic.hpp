#pragma once

#include "ftvn/core.hpp"
#include "ftvn/majorization.hpp"

namespace ftvn {

struct DsMatrix {
    Mat matrix;
};

struct BirkhoffTerm {
    double weight = 0.0;
    std::vector<int> permutation;  // row i carries weight at column permutation[i]
};

struct BirkhoffDecomposition {
    std::vector<BirkhoffTerm> terms;
};

bool is_ds_matrix(const Mat& m, double tol = 1e-12);

// Builds M with M y = x from at most n-1 T-transforms (plus the sorting
// permutations). Requires hlp_majorize(x, y) to hold.
DsMatrix construct_ds_witness(const Vec& x, const Vec& y, double tol = 1e-9);

// Greedy Birkhoff-von Neumann: repeatedly subtract a matched permutation at
// its minimal weight. Term count stays within (n-1)^2 + 1.
BirkhoffDecomposition birkhoff_decompose(const Mat& m, double tol = 1e-9);

Mat reconstruct(const BirkhoffDecomposition& decomposition, int n);

// Operational doubly stochastic test on a system: lambda(Dx) majorized by
// lambda(x) (reduced normal form) on samples.
CheckReport is_ds_transform(const System& sys, const LinearMap& map, long n_samples,
                            uint64_t seed, double tol = kDefaultTol, int jobs = 1);

// The algebra-style criteria where a unit exists: De = e, D*e = e, and
// sampled invariance of the nonnegative-spectrum cone.
CheckReport eja_ds_criteria(const System& sys, const LinearMap& map, long n_samples,
                            uint64_t seed, double tol = kDefaultTol, int jobs = 1);

struct TransitionMatrix {
    Mat matrix;
    bool degenerate_frames = false;  // repeated spectrum; M valid but not unique
};

// The doubly stochastic matrix m_ij = <D(e_j e_j^T), f_i f_i^T> built from the
// eigenframes of x and Dx; satisfies M lambda(x) = lambda(Dx).
TransitionMatrix extract_transition_matrix(const System& sys, const LinearMap& map,
                                           const Element& x);

// Convex combination of automorphisms (doubly stochastic by the hull
// proposition).
LinearMap ds_from_automorphisms(const System& sys, const Vec& weights,
                                const std::vector<LinearMap>& maps);

// D and D^T must fix every center basis vector.
CheckReport ds_fixed_points(const System& sys, const LinearMap& map,
                            double tol = kDefaultTol);

} // namespace ftvn
