#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftvn/linalg.hpp"
#include "ftvn/rng.hpp"

namespace ftvn {

// A point of V for a given system instance. Matrix-valued instances flatten
// row-major, so the standard dot product on coords is the trace inner product.
struct Element {
    Vec coords;
};

// A point of W; instances keep an instance-specific normal form (decreasing,
// decreasing nonnegative, ...).
struct Spectrum {
    Vec coords;
};

enum class InstanceKind {
    RnDown,
    RnAbs,
    NormSystem,
    Sym,
    SingVal,
    Spin,
    Discrete,
    Twisted,
    Product,
    FiniteSeq,
    SubspaceCounterexample,
};

enum class CenterKind { Trivial, Line, Full, Custom };

struct CenterDescriptor {
    CenterKind kind = CenterKind::Trivial;
    std::vector<Element> basis;  // orthonormal; empty for a trivial center
};

// Dense linear transformation V -> V (candidate automorphism or doubly
// stochastic map).
struct LinearMap {
    Mat matrix;
    std::string tag;
};

struct Counterexample {
    long sample_index = -1;
    std::string what;
    std::map<std::string, Vec> inputs;
    std::map<std::string, double> values;
};

// Outcome of a randomized property campaign. Invariant:
// passed <=> max_violation <= tol <=> counterexample absent.
struct CheckReport {
    bool passed = true;
    long samples = 0;
    double max_violation = 0.0;
    double tol = 0.0;
    std::optional<Counterexample> counterexample;
    uint64_t seed = 0;
    std::vector<std::string> notes;
};

// A system-instance descriptor. Everything is immutable after construction;
// the function members are pure, so a const System is safe to share across
// threads. Inner products on both sides are the standard dot product on
// coordinates for every shipped instance.
struct System {
    std::string name;
    InstanceKind kind = InstanceKind::RnDown;
    int dim_v = 0;
    int dim_w = 0;

    CenterDescriptor center;
    std::optional<Element> unit;

    std::function<void(const Element&)> validate_element;
    std::function<Spectrum(const Element&)> lambda_of;
    std::function<bool(const Spectrum&, double)> range_contains;
    std::function<Element(const Element&, const Spectrum&)> witness;
    std::function<Element(Rng&)> sample_element;
    std::function<LinearMap(Rng&)> sample_automorphism;
    // Orbit transport x -> y (requires lambda(x) == lambda(y)); empty when the
    // instance ships no construction.
    std::function<LinearMap(const Element&, const Element&, double)> transport;
    // Embedding of W into V used by the NDS characterization checks; empty
    // when no embedding is declared.
    std::function<Element(const Spectrum&)> embed_spectrum;

    // (c, u) pairs evaluated before random sampling in check_axioms; the
    // deliberate counterexample pins its designated failing triple here.
    std::vector<std::pair<Element, Element>> pinned_axiom_samples;
};

// ---------------------------------------------------------------------------
// Campaign runner

struct SampleOutcome {
    double violation = 0.0;  // scaled so that <= tol means pass
    std::optional<Counterexample> counterexample;
};

// Evaluates `fn` on per-sample RNG streams derived from (seed, index), in
// parallel when jobs > 1. Aggregation is order-independent: max violation,
// counterexample of the smallest failing index.
CheckReport run_campaign(long n_samples, uint64_t seed, double tol, int jobs,
                         const std::function<SampleOutcome(Rng&, long)>& fn);

// ---------------------------------------------------------------------------
// Core operations

constexpr double kDefaultTol = 1e-8;

Spectrum lambda(const System& sys, const Element& x);

// The A3 witness: an element x with lambda(x) = q attaining
// <c, x> = <lambda(c), q>. Throws RangeError when q is outside ran(lambda).
Element witness_a3(const System& sys, const Element& c, const Spectrum& q,
                   double tol = 1e-9);

struct OrbitSupport {
    double value = 0.0;
    Element maximizer;
};

// max{ <c, x> : x in [u] } together with the attaining element.
OrbitSupport orbit_support(const System& sys, const Element& c, const Element& u);

struct CommuteReport {
    bool verdict = false;    // criterion (i) within tol
    bool inner = false;      // <x,y> = <lambda(x), lambda(y)>
    bool additive = false;   // lambda(x+y) = lambda(x) + lambda(y)
    bool isometric = false;  // ||lambda(x)-lambda(y)|| = ||x-y||
    double gap_inner = 0.0;
    double gap_additive = 0.0;
    double gap_isometric = 0.0;

    // True when every criterion is decidable at the given guard band, i.e. no
    // residual falls in the indeterminate zone (tol, guard*tol).
    bool robust(double tol, double guard = 10.0) const;
};

CommuteReport commute(const System& sys, const Element& x, const Element& y,
                      double tol = kDefaultTol);

// Randomized (A1)-(A3) verification; failures are reported, not thrown.
CheckReport check_axioms(const System& sys, long n_samples, uint64_t seed,
                         double tol = kDefaultTol, int jobs = 1);

// <lambda(c), sum lambda(x_i)> - <lambda(c), lambda(sum x_i)>; nonnegative in
// a valid system.
double sublinearity_gap(const System& sys, const Element& c,
                        const std::vector<Element>& xs);

} // namespace ftvn
