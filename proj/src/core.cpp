#include "ftvn/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace ftvn {

CheckReport run_campaign(long n_samples, uint64_t seed, double tol, int jobs,
                         const std::function<SampleOutcome(Rng&, long)>& fn) {
    if (n_samples < 1) throw ValidationError("campaign: n_samples must be >= 1");
    if (tol <= 0) throw ValidationError("campaign: tol must be positive");
    jobs = std::clamp(jobs, 1, 64);

    CheckReport report;
    report.samples = n_samples;
    report.seed = seed;
    report.tol = tol;

    double max_violation = 0.0;
    std::optional<Counterexample> best;

    // A throwing sample is reported as a failed sample rather than unwinding
    // (or terminating a worker thread), so jobs=1 and jobs=N agree.
    auto evaluate = [&](long i) {
        Rng rng = Rng::stream(seed, static_cast<uint64_t>(i));
        try {
            return fn(rng, i);
        } catch (const std::exception& e) {
            SampleOutcome out;
            out.violation = 1.0 + tol;
            Counterexample ce;
            ce.sample_index = i;
            ce.what = std::string("sample raised: ") + e.what();
            out.counterexample = ce;
            return out;
        }
    };

    if (jobs == 1) {
        for (long i = 0; i < n_samples; ++i) {
            SampleOutcome out = evaluate(i);
            max_violation = std::max(max_violation, out.violation);
            if (out.violation > tol && out.counterexample &&
                (!best || out.counterexample->sample_index < best->sample_index))
                best = out.counterexample;
        }
    } else {
        std::atomic<long> next{0};
        std::mutex merge_mutex;
        auto worker = [&]() {
            double local_max = 0.0;
            std::optional<Counterexample> local_best;
            for (long i = next.fetch_add(1); i < n_samples; i = next.fetch_add(1)) {
                SampleOutcome out = evaluate(i);
                local_max = std::max(local_max, out.violation);
                if (out.violation > tol && out.counterexample &&
                    (!local_best || out.counterexample->sample_index < local_best->sample_index))
                    local_best = out.counterexample;
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            max_violation = std::max(max_violation, local_max);
            if (local_best && (!best || local_best->sample_index < best->sample_index))
                best = local_best;
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    report.max_violation = max_violation;
    report.passed = max_violation <= tol;
    if (!report.passed) report.counterexample = best;
    return report;
}

Spectrum lambda(const System& sys, const Element& x) {
    sys.validate_element(x);
    return sys.lambda_of(x);
}

Element witness_a3(const System& sys, const Element& c, const Spectrum& q, double tol) {
    sys.validate_element(c);
    if (q.coords.size() != static_cast<size_t>(sys.dim_w))
        throw ValidationError("witness_a3: spectrum has wrong dimension");
    if (!sys.range_contains(q, tol))
        throw RangeError("witness_a3: q is not in ran(lambda) for " + sys.name);
    return sys.witness(c, q);
}

OrbitSupport orbit_support(const System& sys, const Element& c, const Element& u) {
    Spectrum lc = lambda(sys, c);
    Spectrum lu = lambda(sys, u);
    OrbitSupport out;
    out.value = dot(lc.coords, lu.coords);
    out.maximizer = witness_a3(sys, c, lu);
    return out;
}

bool CommuteReport::robust(double tol, double guard) const {
    for (double g : {gap_inner, gap_additive, gap_isometric})
        if (g > tol && g < guard * tol) return false;
    return true;
}

CommuteReport commute(const System& sys, const Element& x, const Element& y, double tol) {
    Spectrum lx = lambda(sys, x);
    Spectrum ly = lambda(sys, y);

    double nx = norm(x.coords), ny = norm(y.coords);

    CommuteReport r;
    r.gap_inner = std::fabs(dot(x.coords, y.coords) - dot(lx.coords, ly.coords)) /
                  (1.0 + nx * ny);

    Element sum{add(x.coords, y.coords)};
    Spectrum lsum = lambda(sys, sum);
    r.gap_additive = dist(lsum.coords, add(lx.coords, ly.coords)) / (1.0 + nx + ny);

    double dv = dist(x.coords, y.coords);
    double dw = dist(lx.coords, ly.coords);
    r.gap_isometric = std::fabs(dw - dv) / (1.0 + dv);

    r.inner = r.gap_inner <= tol;
    r.additive = r.gap_additive <= tol;
    r.isometric = r.gap_isometric <= tol;
    r.verdict = r.inner;
    return r;
}

namespace {

SampleOutcome axiom_sample(const System& sys, const Element& c, const Element& u, long index) {
    SampleOutcome out;
    Spectrum lc = sys.lambda_of(c);
    Spectrum lu = sys.lambda_of(u);
    double nc = norm(c.coords), nu = norm(u.coords);

    // A1 on both draws.
    double a1 = std::fabs(norm(lc.coords) - nc) / (1.0 + nc);
    a1 = std::max(a1, std::fabs(norm(lu.coords) - nu) / (1.0 + nu));

    // A2 (one-sided).
    double a2 = (dot(c.coords, u.coords) - dot(lc.coords, lu.coords)) / (1.0 + nc * nu);

    // A3 attainment against the witness.
    Element w = sys.witness(c, lu);
    Spectrum lw = sys.lambda_of(w);
    double a3_range = dist(lw.coords, lu.coords) / (1.0 + norm(lu.coords));
    double lhs = dot(c.coords, w.coords);
    double rhs = dot(lc.coords, lu.coords);
    double a3_gap = std::fabs(lhs - rhs) / (1.0 + nc * norm(lu.coords));

    out.violation = std::max({a1, std::max(a2, 0.0), a3_range, a3_gap});

    Counterexample ce;
    ce.sample_index = index;
    if (a3_gap >= std::max({a1, std::max(a2, 0.0), a3_range}))
        ce.what = "A3 equality gap";
    else if (a1 >= std::max(std::max(a2, 0.0), a3_range))
        ce.what = "A1 norm preservation";
    else if (a3_range >= std::max(a2, 0.0))
        ce.what = "A3 witness misses the orbit";
    else
        ce.what = "A2 inequality";
    ce.inputs["c"] = c.coords;
    ce.inputs["u"] = u.coords;
    ce.inputs["witness"] = w.coords;
    ce.values["a3_lhs"] = lhs;
    ce.values["a3_rhs"] = rhs;
    ce.values["a3_gap"] = std::fabs(lhs - rhs);
    out.counterexample = ce;
    return out;
}

} // namespace

CheckReport check_axioms(const System& sys, long n_samples, uint64_t seed, double tol, int jobs) {
    long pinned = static_cast<long>(sys.pinned_axiom_samples.size());
    return run_campaign(n_samples, seed, tol, jobs, [&](Rng& rng, long index) {
        if (index < pinned) {
            const auto& [c, u] = sys.pinned_axiom_samples[static_cast<size_t>(index)];
            return axiom_sample(sys, c, u, index);
        }
        Element c = sys.sample_element(rng);
        Element u = sys.sample_element(rng);
        return axiom_sample(sys, c, u, index);
    });
}

double sublinearity_gap(const System& sys, const Element& c, const std::vector<Element>& xs) {
    if (xs.empty()) throw ValidationError("sublinearity_gap: xs must be nonempty");
    Spectrum lc = lambda(sys, c);
    Vec spectral_sum(sys.dim_w, 0.0);
    Vec element_sum(sys.dim_v, 0.0);
    for (const Element& x : xs) {
        Spectrum lx = lambda(sys, x);
        spectral_sum = add(spectral_sum, lx.coords);
        element_sum = add(element_sum, x.coords);
    }
    Spectrum lsum = lambda(sys, Element{element_sum});
    return dot(lc.coords, spectral_sum) - dot(lc.coords, lsum.coords);
}

} // namespace ftvn
