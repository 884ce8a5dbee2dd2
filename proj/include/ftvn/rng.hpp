#pragma once

#include <cstdint>
#include <vector>

#include "ftvn/linalg.hpp"

namespace ftvn {

// Deterministic xoshiro256++ generator. The standard library distributions are
// implementation-defined, so all sampling goes through this class to keep
// reports byte-identical across platforms and across worker counts.
class Rng {
public:
    explicit Rng(uint64_t seed = 0);

    // Independent stream for sample `index` of a campaign started with `seed`.
    // Campaigns evaluate samples in any order (or concurrently) and still
    // produce the same per-sample draws.
    static Rng stream(uint64_t seed, uint64_t index);

    uint64_t next_u64();
    double uniform();                 // [0, 1)
    double uniform(double lo, double hi);
    double normal();                  // standard normal, Box-Muller
    int uniform_int(int n);           // {0, ..., n-1}, n >= 1

    Vec normal_vec(int n);
    std::vector<int> permutation(int n);

private:
    uint64_t s_[4];
};

// Dense samplers shared by the instance catalog.
Mat random_orthogonal(int n, Rng& rng);           // Gaussian + modified Gram-Schmidt
Mat permutation_matrix(const std::vector<int>& perm);
Mat random_permutation_matrix(int n, Rng& rng);
Mat random_signed_permutation_matrix(int n, Rng& rng);

} // namespace ftvn
