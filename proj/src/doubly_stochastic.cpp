#include "ftvn/doubly_stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ftvn/numerics.hpp"

namespace ftvn {

bool is_ds_matrix(const Mat& m, double tol) {
    if (!m.square() || m.rows < 1) return false;
    int n = m.rows;
    for (double v : m.a)
        if (v < -tol) return false;
    for (int i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < n; ++j) {
            row += m(i, j);
            col += m(j, i);
        }
        if (std::fabs(row - 1.0) > tol || std::fabs(col - 1.0) > tol) return false;
    }
    return true;
}

DsMatrix construct_ds_witness(const Vec& x, const Vec& y, double tol) {
    if (x.size() != y.size())
        throw ValidationError("construct_ds_witness: vectors must have equal length");
    if (!hlp_majorize(x, y, tol).holds)
        throw NotMajorizedError("construct_ds_witness: x is not majorized by y");

    int n = static_cast<int>(x.size());
    Vec xd = sort_desc(x);
    Vec z = sort_desc(y);
    Mat px = permutation_matrix(argsort_desc(x));
    Mat py = permutation_matrix(argsort_desc(y));

    double eps = 1e-12 * (1.0 + std::max(max_abs(x), max_abs(y)));
    Mat core = Mat::identity(n);
    for (int step = 0; step < n; ++step) {
        // Largest index still above the target, then the first index after it
        // that is below; the classical constructive HLP proof.
        int j = -1;
        for (int i = n - 1; i >= 0; --i)
            if (z[i] > xd[i] + eps) { j = i; break; }
        if (j < 0) break;
        int k = -1;
        for (int i = j + 1; i < n; ++i)
            if (z[i] < xd[i] - eps) { k = i; break; }
        if (k < 0)
            throw NumericError("construct_ds_witness: no balancing index (sums drifted)");

        double delta = std::min(z[j] - xd[j], xd[k] - z[k]);
        double theta = delta / (z[j] - z[k]);
        Mat t = Mat::identity(n);
        t(j, j) = 1.0 - theta;
        t(j, k) = theta;
        t(k, j) = theta;
        t(k, k) = 1.0 - theta;
        z[j] -= delta;
        z[k] += delta;
        core = matmul(t, core);
    }
    if (dist(z, xd) > 1e-8 * (1.0 + norm1(xd)))
        throw NumericError("construct_ds_witness: T-transforms did not reach the target");

    return DsMatrix{matmul(transpose(px), matmul(core, py))};
}

namespace {

// Kuhn's augmenting-path matching on the boolean adjacency of admissible
// entries. Returns row -> column, or an empty vector if no perfect matching.
std::vector<int> perfect_matching(const Mat& m, double threshold) {
    int n = m.rows;
    std::vector<int> col_to_row(n, -1);

    std::vector<char> visited;
    std::function<bool(int)> try_row = [&](int row) -> bool {
        for (int col = 0; col < n; ++col) {
            if (m(row, col) <= threshold || visited[col]) continue;
            visited[col] = 1;
            if (col_to_row[col] < 0 || try_row(col_to_row[col])) {
                col_to_row[col] = row;
                return true;
            }
        }
        return false;
    };

    for (int row = 0; row < n; ++row) {
        visited.assign(n, 0);
        if (!try_row(row)) return {};
    }
    std::vector<int> row_to_col(n, -1);
    for (int col = 0; col < n; ++col) row_to_col[col_to_row[col]] = col;
    return row_to_col;
}

} // namespace

BirkhoffDecomposition birkhoff_decompose(const Mat& m, double tol) {
    if (!is_ds_matrix(m, std::max(tol, 1e-12)))
        throw ValidationError("birkhoff_decompose: input is not doubly stochastic");
    int n = m.rows;
    int max_terms = (n - 1) * (n - 1) + 1;

    Mat rest = m;
    BirkhoffDecomposition out;
    double remaining = 1.0;
    while (remaining > std::max(tol, 1e-12)) {
        if (static_cast<int>(out.terms.size()) >= max_terms)
            throw NumericError("birkhoff_decompose: exceeded the (n-1)^2+1 term bound");
        double threshold = 1e-9 * remaining / n;
        std::vector<int> perm = perfect_matching(rest, threshold);
        if (perm.empty())
            throw NumericError("birkhoff_decompose: no matching on the positive support "
                               "(tolerance too small for this input)");
        double w = rest(0, perm[0]);
        for (int i = 1; i < n; ++i) w = std::min(w, rest(i, perm[i]));
        for (int i = 0; i < n; ++i) rest(i, perm[i]) -= w;
        out.terms.push_back({w, perm});
        remaining -= w;
    }
    // Fold the residual into the closest weight so the total stays exactly 1.
    if (!out.terms.empty() && remaining != 0.0) out.terms.back().weight += remaining;
    return out;
}

Mat reconstruct(const BirkhoffDecomposition& decomposition, int n) {
    Mat m(n, n);
    for (const BirkhoffTerm& term : decomposition.terms)
        for (int i = 0; i < n; ++i) m(i, term.permutation[i]) += term.weight;
    return m;
}

CheckReport is_ds_transform(const System& sys, const LinearMap& map, long n_samples,
                            uint64_t seed, double tol, int jobs) {
    ReducedFamily family = reduced_family(sys.kind);
    if (family == ReducedFamily::None)
        throw UnsupportedError("is_ds_transform: no reduced pair for " + sys.name);
    if (!map.matrix.square() || map.matrix.rows != sys.dim_v)
        throw ValidationError("is_ds_transform: map has wrong shape");

    return run_campaign(n_samples, seed, tol, jobs, [&](Rng& rng, long index) {
        Element x = sys.sample_element(rng);
        Spectrum lx = sys.lambda_of(x);
        Element dx{matvec(map.matrix, x.coords)};
        Spectrum ldx = sys.lambda_of(dx);
        SampleOutcome out;
        out.violation = reduced_majorization_violation(family, ldx.coords, lx.coords, tol);
        if (out.violation > tol) {
            Counterexample ce;
            ce.sample_index = index;
            ce.what = "lambda(Dx) not majorized by lambda(x)";
            ce.inputs["x"] = x.coords;
            ce.inputs["lambda_x"] = lx.coords;
            ce.inputs["lambda_Dx"] = ldx.coords;
            out.counterexample = ce;
        }
        return out;
    });
}

CheckReport eja_ds_criteria(const System& sys, const LinearMap& map, long n_samples,
                            uint64_t seed, double tol, int jobs) {
    if (!sys.unit)
        throw UnsupportedError("eja_ds_criteria: " + sys.name + " has no unit element");
    ReducedFamily family = reduced_family(sys.kind);
    if (family != ReducedFamily::Sorted && family != ReducedFamily::Abs)
        throw UnsupportedError("eja_ds_criteria: no nonnegative-spectrum sampler for " + sys.name);
    const Vec& e = sys.unit->coords;
    double unit_scale = 1.0 + norm(e);
    double fix_e = dist(matvec(map.matrix, e), e) / unit_scale;
    double fix_e_adj = dist(matvec(transpose(map.matrix), e), e) / unit_scale;

    CheckReport report = run_campaign(n_samples, seed, tol, jobs, [&](Rng& rng, long index) {
        // Generic nonnegative-spectrum element: flip the spectrum of a random
        // draw to its absolute values on the same frame.
        Element z = sys.sample_element(rng);
        Spectrum lz = sys.lambda_of(z);
        Vec q = sort_desc(lz.coords);
        for (double& v : q) v = std::fabs(v);
        q = sort_desc(q);
        Element x = sys.witness(z, Spectrum{q});
        Element dx{matvec(map.matrix, x.coords)};
        Spectrum ldx = sys.lambda_of(dx);
        double min_val = ldx.coords.empty() ? 0.0 : ldx.coords.back();
        for (double v : ldx.coords) min_val = std::min(min_val, v);

        SampleOutcome out;
        out.violation = std::max(0.0, -min_val) / (1.0 + max_abs(ldx.coords));
        if (out.violation > tol) {
            Counterexample ce;
            ce.sample_index = index;
            ce.what = "cone invariance violated: lambda(Dx) has a negative entry";
            ce.inputs["x"] = x.coords;
            ce.inputs["lambda_Dx"] = ldx.coords;
            out.counterexample = ce;
        }
        return out;
    });

    double unit_violation = std::max(fix_e, fix_e_adj);
    if (unit_violation > tol) {
        report.passed = false;
        report.max_violation = std::max(report.max_violation, unit_violation);
        Counterexample ce;
        ce.what = fix_e >= fix_e_adj ? "De != e" : "D*e != e";
        ce.values["De_gap"] = fix_e;
        ce.values["D*e_gap"] = fix_e_adj;
        report.counterexample = ce;
    }
    return report;
}

TransitionMatrix extract_transition_matrix(const System& sys, const LinearMap& map,
                                           const Element& x) {
    if (sys.kind != InstanceKind::Sym)
        throw UnsupportedError("extract_transition_matrix: defined on the sym instance");
    int n = sys.dim_w;
    sys.validate_element(x);

    Mat xm = unflatten(x.coords, n);
    Vec y_coords = matvec(map.matrix, x.coords);
    Mat ym = unflatten(y_coords, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double avg = 0.5 * (ym(i, j) + ym(j, i));
            ym(i, j) = ym(j, i) = avg;
        }

    EigenResult ex = sym_eigen(xm);
    EigenResult ey = sym_eigen(ym);

    auto min_gap = [](const Vec& vals) {
        double g = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i + 1 < vals.size(); ++i)
            g = std::min(g, std::fabs(vals[i] - vals[i + 1]));
        return g;
    };
    double scale = 1.0 + std::max(max_abs(ex.values), max_abs(ey.values));
    bool degenerate = min_gap(ex.values) < 1e-6 * scale || min_gap(ey.values) < 1e-6 * scale;

    auto projector = [n](const Mat& frame, int k) {
        Vec p(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) p[static_cast<size_t>(i) * n + j] = frame(i, k) * frame(j, k);
        return p;
    };

    Mat m(n, n);
    for (int j = 0; j < n; ++j) {
        Vec image = matvec(map.matrix, projector(ex.frame, j));
        for (int i = 0; i < n; ++i) m(i, j) = dot(image, projector(ey.frame, i));
    }
    return TransitionMatrix{m, degenerate};
}

LinearMap ds_from_automorphisms(const System& sys, const Vec& weights,
                                const std::vector<LinearMap>& maps) {
    if (weights.size() != maps.size() || weights.empty())
        throw ValidationError("ds_from_automorphisms: one weight per map required");
    double total = 0.0;
    for (double w : weights) {
        if (w < -1e-12) throw ValidationError("ds_from_automorphisms: negative weight");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-10)
        throw ValidationError("ds_from_automorphisms: weights must sum to 1");

    Mat d(sys.dim_v, sys.dim_v);
    for (size_t i = 0; i < maps.size(); ++i) {
        if (!maps[i].matrix.square() || maps[i].matrix.rows != sys.dim_v)
            throw ValidationError("ds_from_automorphisms: map has wrong shape");
        d = mat_add(d, mat_scale(weights[i], maps[i].matrix));
    }
    return LinearMap{d, "automorphism hull"};
}

CheckReport ds_fixed_points(const System& sys, const LinearMap& map, double tol) {
    CheckReport report;
    report.samples = static_cast<long>(sys.center.basis.size());
    report.tol = tol;
    Mat adj = transpose(map.matrix);
    for (const Element& b : sys.center.basis) {
        double scale = 1.0 + norm(b.coords);
        double v = std::max(dist(matvec(map.matrix, b.coords), b.coords),
                            dist(matvec(adj, b.coords), b.coords)) /
                   scale;
        if (v > report.max_violation) {
            report.max_violation = v;
            if (v > tol) {
                Counterexample ce;
                ce.what = "center element not fixed by D or D*";
                ce.inputs["center_element"] = b.coords;
                ce.values["gap"] = v;
                report.counterexample = ce;
            }
        }
    }
    report.passed = report.max_violation <= tol;
    if (report.passed) report.counterexample.reset();
    if (sys.center.basis.empty()) report.notes.push_back("trivial center: vacuous pass");
    return report;
}

} // namespace ftvn
