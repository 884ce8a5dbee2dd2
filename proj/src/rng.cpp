#include "ftvn/rng.hpp"

#include <cmath>

namespace ftvn {

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Rng::Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

Rng Rng::stream(uint64_t seed, uint64_t index) {
    // Mix the pair (seed, index) into one 64-bit state; splitmix decorrelates
    // neighboring indices.
    uint64_t sm = seed;
    uint64_t a = splitmix64(sm);
    sm = index + 0x632be59bd9b4e019ull;
    uint64_t b = splitmix64(sm);
    return Rng(a ^ rotl(b, 17));
}

uint64_t Rng::next_u64() {
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    // 53 random bits into [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    // Basic Box-Muller; the second value is discarded so draws are a pure
    // function of the stream position.
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

int Rng::uniform_int(int n) {
    // Rejection sampling to avoid modulo bias.
    uint64_t bound = static_cast<uint64_t>(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return static_cast<int>(v % bound);
}

Vec Rng::normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
}

std::vector<int> Rng::permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
        int j = uniform_int(i + 1);
        std::swap(p[i], p[j]);
    }
    return p;
}

Mat random_orthogonal(int n, Rng& rng) {
    // Orthogonalize a Gaussian matrix (modified Gram-Schmidt); retry a column
    // on the measure-zero event that it lands in the span of the others.
    Mat q(n, n);
    for (int j = 0; j < n; ++j) {
        Vec col(n);
        while (true) {
            for (int i = 0; i < n; ++i) col[i] = rng.normal();
            for (int k = 0; k < j; ++k) {
                double proj = 0.0;
                for (int i = 0; i < n; ++i) proj += col[i] * q(i, k);
                for (int i = 0; i < n; ++i) col[i] -= proj * q(i, k);
            }
            double nrm = norm(col);
            if (nrm > 1e-8) {
                for (int i = 0; i < n; ++i) q(i, j) = col[i] / nrm;
                break;
            }
        }
    }
    return q;
}

Mat permutation_matrix(const std::vector<int>& perm) {
    int n = static_cast<int>(perm.size());
    Mat p(n, n);
    for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
    return p;
}

Mat random_permutation_matrix(int n, Rng& rng) {
    return permutation_matrix(rng.permutation(n));
}

Mat random_signed_permutation_matrix(int n, Rng& rng) {
    Mat p = random_permutation_matrix(n, rng);
    for (int i = 0; i < n; ++i) {
        if (rng.uniform() < 0.5)
            for (int j = 0; j < n; ++j) p(i, j) = -p(i, j);
    }
    return p;
}

} // namespace ftvn
