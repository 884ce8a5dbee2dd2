#include "ftvn/center.hpp"

#include <cmath>

namespace ftvn {

bool in_center(const System& sys, const Element& x, double tol) {
    Spectrum plus = lambda(sys, x);
    Spectrum minus = lambda(sys, Element{neg(x.coords)});
    double gap = norm(add(plus.coords, minus.coords));
    return gap <= tol * (1.0 + norm(x.coords));
}

bool orbit_singleton(const System& sys, const Element& x, int n_probe, uint64_t seed,
                     double tol) {
    Spectrum lx = lambda(sys, x);
    double scale = 1.0 + norm(x.coords);
    for (int i = 0; i < n_probe; ++i) {
        Rng rng = Rng::stream(seed, static_cast<uint64_t>(i));
        Element c = sys.sample_element(rng);
        Element probe = sys.witness(c, lx);
        if (dist(probe.coords, x.coords) > tol * scale) return false;
    }
    return true;
}

std::optional<Element> unit_element(const System& sys) {
    if (sys.center.kind != CenterKind::Line) return std::nullopt;
    return sys.unit;
}

Decomposition decompose(const System& sys, const Element& x) {
    sys.validate_element(x);
    if (sys.center.kind == CenterKind::Custom && sys.center.basis.empty())
        throw UnsupportedError("decompose: " + sys.name + " has no usable center basis");
    Vec xc(x.coords.size(), 0.0);
    for (const Element& b : sys.center.basis) {
        double w = dot(x.coords, b.coords);
        xc = add(xc, scale(w, b.coords));
    }
    return {Element{xc}, Element{sub(x.coords, xc)}};
}

CheckReport lineality_check(const System& sys, long n_samples, uint64_t seed, double tol,
                            int jobs) {
    bool has_center = !sys.center.basis.empty();
    return run_campaign(n_samples, seed, tol, jobs, [&](Rng& rng, long index) {
        Element x;
        if (has_center && index % 2 == 1) {
            // Random center element, so the forward direction is exercised.
            Vec v(sys.dim_v, 0.0);
            for (const Element& b : sys.center.basis) v = add(v, scale(rng.normal(), b.coords));
            x = Element{v};
        } else {
            x = sys.sample_element(rng);
        }
        Spectrum lx = sys.lambda_of(x);
        double scale_x = 1.0 + norm(x.coords);
        Spectrum lminus = sys.lambda_of(Element{neg(x.coords)});
        double center_gap = norm(add(lx.coords, lminus.coords)) / scale_x;

        SampleOutcome out;
        bool neg_in_range = sys.range_contains(Spectrum{neg(lx.coords)}, tol / 10.0);
        bool central = center_gap <= tol / 10.0;
        double violation = 0.0;
        std::string what;
        if (neg_in_range && center_gap > tol) {
            violation = center_gap;
            what = "-lambda(x) in range but x not central";
        }
        if (central && !sys.range_contains(Spectrum{neg(lx.coords)}, tol)) {
            violation = std::max(violation, 1.0);
            what = "x central but -lambda(x) outside range";
        }
        out.violation = violation;
        if (violation > tol) {
            Counterexample ce;
            ce.sample_index = index;
            ce.what = what;
            ce.inputs["x"] = x.coords;
            ce.inputs["lambda_x"] = lx.coords;
            ce.values["center_gap"] = center_gap;
            out.counterexample = ce;
        }
        return out;
    });
}

} // namespace ftvn
