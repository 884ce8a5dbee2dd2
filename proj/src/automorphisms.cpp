#include "ftvn/automorphisms.hpp"

#include <cmath>

namespace ftvn {

CheckReport is_automorphism(const System& sys, const LinearMap& map, long n_samples,
                            uint64_t seed, double tol, int jobs) {
    const Mat& a = map.matrix;
    if (!a.square() || a.rows != sys.dim_v)
        throw ValidationError("is_automorphism: map must be " + std::to_string(sys.dim_v) +
                              " x " + std::to_string(sys.dim_v));

    double det = determinant(a);
    double center_violation = 0.0;
    for (const Element& b : sys.center.basis)
        center_violation = std::max(center_violation,
                                    dist(matvec(a, b.coords), b.coords) / (1.0 + norm(b.coords)));

    CheckReport report = run_campaign(n_samples, seed, tol, jobs, [&](Rng& rng, long index) {
        Element x = sys.sample_element(rng);
        Spectrum lx = sys.lambda_of(x);
        Element ax{matvec(a, x.coords)};
        Spectrum lax = sys.lambda_of(ax);
        SampleOutcome out;
        out.violation = dist(lax.coords, lx.coords) / (1.0 + norm(x.coords));
        if (out.violation > tol) {
            Counterexample ce;
            ce.sample_index = index;
            ce.what = "lambda(Ax) != lambda(x)";
            ce.inputs["x"] = x.coords;
            ce.inputs["lambda_x"] = lx.coords;
            ce.inputs["lambda_Ax"] = lax.coords;
            out.counterexample = ce;
        }
        return out;
    });

    if (std::fabs(det) <= 1e-10) {
        report.passed = false;
        report.max_violation = std::max(report.max_violation, 1.0);
        Counterexample ce;
        ce.what = "map is not invertible";
        ce.values["det"] = det;
        report.counterexample = ce;
    }
    if (center_violation > tol) {
        report.passed = false;
        report.max_violation = std::max(report.max_violation, center_violation);
        if (!report.counterexample) {
            Counterexample ce;
            ce.what = "map moves a center element";
            ce.values["center_violation"] = center_violation;
            report.counterexample = ce;
        }
    }
    return report;
}

LinearMap sample_automorphism(const System& sys, uint64_t seed) {
    Rng rng(seed);
    return sys.sample_automorphism(rng);
}

LinearMap sample_automorphism(const System& sys, Rng& rng) {
    return sys.sample_automorphism(rng);
}

LinearMap orbit_transport(const System& sys, const Element& x, const Element& y, double tol) {
    Spectrum lx = lambda(sys, x);
    Spectrum ly = lambda(sys, y);
    double scale = 1.0 + std::max(norm(lx.coords), norm(ly.coords));
    if (dist(lx.coords, ly.coords) > tol * scale)
        throw OrbitMismatchError("orbit_transport: lambda(x) != lambda(y)");
    if (!sys.transport)
        throw UnsupportedError("orbit_transport: no construction for " + sys.name);
    LinearMap a = sys.transport(x, y, tol);
    double residual = dist(matvec(a.matrix, x.coords), y.coords) / (1.0 + norm(x.coords));
    if (residual > 100.0 * tol)
        throw NumericError("orbit_transport: construction missed the target (residual " +
                           std::to_string(residual) + ")");
    return a;
}

CheckReport nds_check(const System& sys, long n_samples, uint64_t seed, double tol, int jobs) {
    if (!sys.embed_spectrum)
        throw UnsupportedError("nds_check: " + sys.name + " declares no W -> V embedding");
    if (!sys.transport)
        throw UnsupportedError("nds_check: " + sys.name + " has no orbit transport");

    return run_campaign(n_samples, seed, tol, jobs, [&](Rng& rng, long index) {
        Element x = sys.sample_element(rng);
        Spectrum q = sys.lambda_of(x);
        double scale_q = 1.0 + norm(q.coords);

        // lambda^2 = lambda through the declared embedding.
        Element emb = sys.embed_spectrum(q);
        double idem = dist(sys.lambda_of(emb).coords, q.coords) / scale_q;

        // Orbit transitivity against a witness-generated mate.
        Element c = sys.sample_element(rng);
        Element mate = sys.witness(c, q);
        LinearMap a = sys.transport(x, mate, tol);
        double reach = dist(matvec(a.matrix, x.coords), mate.coords) / (1.0 + norm(x.coords));

        SampleOutcome out;
        out.violation = std::max(idem, reach);
        if (out.violation > tol) {
            Counterexample ce;
            ce.sample_index = index;
            ce.what = idem >= reach ? "lambda not idempotent through embedding"
                                    : "transport missed the orbit mate";
            ce.inputs["x"] = x.coords;
            ce.inputs["q"] = q.coords;
            ce.values["idempotence_gap"] = idem;
            ce.values["transport_gap"] = reach;
            out.counterexample = ce;
        }
        return out;
    });
}

} // namespace ftvn
