#include "ftvn/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ftvn {

ReducedFamily reduced_family(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::RnDown:
        case InstanceKind::Sym:
        case InstanceKind::Spin:
            return ReducedFamily::Sorted;
        case InstanceKind::RnAbs:
        case InstanceKind::SingVal:
        case InstanceKind::FiniteSeq:
            return ReducedFamily::Abs;
        case InstanceKind::Discrete:
            return ReducedFamily::Identity;
        default:
            return ReducedFamily::None;
    }
}

MajorizationVerdict hlp_majorize(const Vec& u, const Vec& v, double tol) {
    if (u.size() != v.size())
        throw ValidationError("hlp_majorize: vectors must have equal length");
    size_t n = u.size();
    Vec ud = sort_desc(u);
    Vec vd = sort_desc(v);
    double tol_eff = tol * (1.0 + norm1(v));

    double su = 0.0, sv = 0.0;
    double min_slack = 0.0;        // over k = 1..n-1
    bool have_inner = false;
    double worst_violation = 0.0;  // over all k = 1..n
    for (size_t k = 0; k < n; ++k) {
        su += ud[k];
        sv += vd[k];
        double slack = sv - su;
        worst_violation = std::max(worst_violation, -slack);
        if (k + 1 < n) {
            min_slack = have_inner ? std::min(min_slack, slack) : slack;
            have_inner = true;
        }
    }
    double eq_gap = std::fabs(sv - su);

    MajorizationVerdict verdict;
    verdict.weak_holds = worst_violation <= tol_eff;
    verdict.holds = verdict.weak_holds && eq_gap <= tol_eff;
    if (verdict.holds)
        verdict.margin = have_inner ? min_slack : 0.0;
    else
        verdict.margin = -std::max(worst_violation, verdict.weak_holds ? eq_gap : 0.0);
    return verdict;
}

namespace {

// Min slack of the weak partial-sum inequalities (all k), the decision
// distance of a weak verdict.
double weak_margin(const Vec& u, const Vec& v) {
    Vec ud = sort_desc(u);
    Vec vd = sort_desc(v);
    double su = 0.0, sv = 0.0;
    double m = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < ud.size(); ++k) {
        su += ud[k];
        sv += vd[k];
        m = std::min(m, sv - su);
    }
    return m;
}

std::vector<Vec> permutation_orbit(const Vec& y) {
    Vec sorted = y;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Vec> orbit;
    do {
        orbit.push_back(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return orbit;
}

} // namespace

MajorizationVerdict hull_oracle_rn(const Vec& x, const Vec& y, double tol) {
    if (x.size() != y.size())
        throw ValidationError("hull_oracle_rn: vectors must have equal length");
    if (x.size() > 6)
        throw SizeGuardError("hull_oracle_rn: n > 6 would enumerate " +
                             std::to_string(x.size()) + "! vertices");
    std::vector<Vec> orbit = permutation_orbit(y);
    HullVerdict hull = hull_membership(x, orbit, tol);

    MajorizationVerdict verdict;
    verdict.holds = hull.inside;
    verdict.weak_holds = hull.inside;
    verdict.margin = hull.inside ? 0.0 : -hull.distance;
    if (hull.inside) verdict.witness = ConvexWitness{orbit, hull.weights};
    return verdict;
}

MajorizationVerdict majorize_in_v(const System& sys, const Element& x, const Element& y,
                                  double tol) {
    ReducedFamily family = reduced_family(sys.kind);
    if (family == ReducedFamily::None)
        throw UnsupportedError("majorize_in_v: no reduced pair for " + sys.name);

    Spectrum lx = lambda(sys, x);
    Spectrum ly = lambda(sys, y);

    MajorizationVerdict verdict;
    switch (family) {
        case ReducedFamily::Sorted:
            verdict = hlp_majorize(lx.coords, ly.coords, tol);
            break;
        case ReducedFamily::Abs: {
            // Signed-permutation orbits: conv[y] membership is the weak
            // partial-sum condition, no total equality.
            MajorizationVerdict h = hlp_majorize(lx.coords, ly.coords, tol);
            verdict.holds = h.weak_holds;
            verdict.weak_holds = h.weak_holds;
            verdict.margin = weak_margin(lx.coords, ly.coords);
            break;
        }
        case ReducedFamily::Identity: {
            double gap = dist(lx.coords, ly.coords);
            double scale = 1.0 + norm(ly.coords);
            verdict.holds = verdict.weak_holds = gap <= tol * scale;
            verdict.margin = verdict.holds ? 0.0 : -gap;
            break;
        }
        case ReducedFamily::None:
            break;
    }

    if (sys.kind == InstanceKind::RnDown && verdict.holds && sys.dim_v <= 6) {
        MajorizationVerdict oracle = hull_oracle_rn(x.coords, y.coords, tol);
        if (oracle.witness) verdict.witness = oracle.witness;
    }
    return verdict;
}

double support_violation(const System& sys, const Element& x, const Element& y,
                         const Element& c) {
    Spectrum lc = lambda(sys, c);
    Spectrum lx = lambda(sys, x);
    Spectrum ly = lambda(sys, y);
    double bound = dot(lc.coords, ly.coords);
    double scale = 1.0 + norm(c.coords) * std::max(norm(x.coords), norm(y.coords));
    double via_v = (dot(c.coords, x.coords) - bound) / scale;
    double via_w = (dot(lc.coords, lx.coords) - bound) / scale;
    return std::max({via_v, via_w, 0.0});
}

CheckReport support_test(const System& sys, const Element& x, const Element& y, long n_dirs,
                         uint64_t seed, double tol, int jobs) {
    return run_campaign(n_dirs, seed, tol, jobs, [&](Rng& rng, long index) {
        Element c = sys.sample_element(rng);
        SampleOutcome out;
        out.violation = support_violation(sys, x, y, c);
        if (out.violation > tol) {
            Counterexample ce;
            ce.sample_index = index;
            ce.what = "support inequality violated";
            ce.inputs["c"] = c.coords;
            ce.values["violation"] = out.violation;
            out.counterexample = ce;
        }
        return out;
    });
}

bool mutual_majorization_check(const System& sys, const Element& x, const Element& y,
                               double tol) {
    MajorizationVerdict xy = majorize_in_v(sys, x, y, tol);
    MajorizationVerdict yx = majorize_in_v(sys, y, x, tol);
    bool mutual = xy.holds && yx.holds;

    Spectrum lx = lambda(sys, x);
    Spectrum ly = lambda(sys, y);
    double gap = dist(lx.coords, ly.coords);
    double scale = 1.0 + std::max(norm(lx.coords), norm(ly.coords));
    bool same_orbit = gap <= tol * scale;

    // The two must agree; tolerate only knife-edge cases.
    if (mutual != same_orbit) {
        bool robust = std::fabs(xy.margin) > 10.0 * tol && std::fabs(yx.margin) > 10.0 * tol &&
                      (gap <= tol * scale || gap >= 10.0 * tol * scale);
        if (robust)
            throw NumericError("mutual_majorization_check: verdict disagrees with spectra equality");
    }
    return mutual;
}

MajorizationVerdict lidskii_sum_check(const System& sys, const std::vector<Element>& xs,
                                      double tol) {
    if (xs.empty()) throw ValidationError("lidskii_sum_check: xs must be nonempty");
    ReducedFamily family = reduced_family(sys.kind);
    if (family == ReducedFamily::None)
        throw UnsupportedError("lidskii_sum_check: no reduced pair for " + sys.name);

    Vec sum_elements(sys.dim_v, 0.0);
    Vec sum_spectra(sys.dim_w, 0.0);
    for (const Element& x : xs) {
        sum_elements = add(sum_elements, x.coords);
        sum_spectra = add(sum_spectra, lambda(sys, x).coords);
    }
    Spectrum lsum = lambda(sys, Element{sum_elements});

    MajorizationVerdict h = hlp_majorize(lsum.coords, sum_spectra, tol);
    if (family == ReducedFamily::Abs) {
        MajorizationVerdict verdict;
        verdict.holds = h.weak_holds;
        verdict.weak_holds = h.weak_holds;
        verdict.margin = weak_margin(lsum.coords, sum_spectra);
        return verdict;
    }
    if (family == ReducedFamily::Identity) {
        double gap = dist(lsum.coords, sum_spectra);
        MajorizationVerdict verdict;
        verdict.holds = verdict.weak_holds = gap <= tol * (1.0 + norm(sum_spectra));
        verdict.margin = verdict.holds ? 0.0 : -gap;
        return verdict;
    }
    return h;
}

double reduced_majorization_violation(ReducedFamily family, const Vec& u, const Vec& v,
                                      double tol) {
    double scale = 1.0 + norm1(v);
    switch (family) {
        case ReducedFamily::Sorted: {
            MajorizationVerdict h = hlp_majorize(u, v, tol);
            return h.holds ? 0.0 : -h.margin / scale;
        }
        case ReducedFamily::Abs: {
            MajorizationVerdict h = hlp_majorize(u, v, tol);
            return h.weak_holds ? 0.0 : -h.margin / scale;
        }
        case ReducedFamily::Identity: {
            double gap = dist(u, v) / scale;
            return gap <= tol ? 0.0 : gap;
        }
        case ReducedFamily::None:
            break;
    }
    throw UnsupportedError("reduced_majorization_violation: no reduced family");
}

} // namespace ftvn
