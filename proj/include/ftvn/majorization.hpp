#pragma once

#include <optional>

#include "ftvn/core.hpp"
#include "ftvn/numerics.hpp"

namespace ftvn {

// Which reduced system (W, W, mu) backs the in-V majorization verdicts.
//  Sorted:   mu = sort-descending; orbits are permutations (full HLP).
//  Abs:      mu = abs-then-sort; orbits are signed permutations, so the
//            conv-orbit criterion drops the total-sum equality (weak HLP).
//  Identity: mu = id; orbits are singletons.
enum class ReducedFamily { Sorted, Abs, Identity, None };

ReducedFamily reduced_family(InstanceKind kind);

struct ConvexWitness {
    std::vector<Vec> vertices;
    Vec weights;
};

struct MajorizationVerdict {
    bool holds = false;
    bool weak_holds = false;
    // Decision distance: min slack of the binding inequalities when the
    // verdict holds, minus the largest violation otherwise.
    double margin = 0.0;
    std::optional<ConvexWitness> witness;
};

// Hardy-Littlewood-Polya partial sums on decreasing rearrangements; `holds`
// additionally requires equal totals. Tolerance is scaled by 1 + ||v||_1.
MajorizationVerdict hlp_majorize(const Vec& u, const Vec& v, double tol = 1e-9);

// x majorized by y in V, decided on the W side through the instance's reduced
// normal form. RnDown verdicts of dimension <= 6 attach a hull certificate.
MajorizationVerdict majorize_in_v(const System& sys, const Element& x, const Element& y,
                                  double tol = 1e-9);

// Independent oracle for R^n: enumerates the permutations of y (n <= 6) and
// runs the min-norm-point membership test.
MajorizationVerdict hull_oracle_rn(const Vec& x, const Vec& y, double tol = 1e-9);

// Violation of the two support inequalities for one direction c; zero when
// both hold.
double support_violation(const System& sys, const Element& x, const Element& y,
                         const Element& c);

// Samples directions and reports the worst support-inequality violation; a
// pass is a necessary-condition battery for x majorized by y.
CheckReport support_test(const System& sys, const Element& x, const Element& y,
                         long n_dirs, uint64_t seed, double tol = kDefaultTol,
                         int jobs = 1);

// x ~ y (mutual majorization), which must coincide with equal spectra.
bool mutual_majorization_check(const System& sys, const Element& x, const Element& y,
                               double tol = 1e-9);

// lambda(sum x_i) majorized by sum lambda(x_i) on the W side (Lidskii-type).
MajorizationVerdict lidskii_sum_check(const System& sys, const std::vector<Element>& xs,
                                      double tol = 1e-9);

// Scaled violation of the reduced-form majorization of u by v; <= 0 margin
// folded to a nonnegative number, shared by the doubly stochastic checks.
double reduced_majorization_violation(ReducedFamily family, const Vec& u, const Vec& v,
                                      double tol = 1e-9);

} // namespace ftvn
