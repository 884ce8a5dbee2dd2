#include "ftvn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ftvn {

Vec sort_desc(const Vec& v) {
    Vec r = v;
    std::stable_sort(r.begin(), r.end(), [](double a, double b) { return a > b; });
    return r;
}

std::vector<int> argsort_desc(const Vec& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
    return idx;
}

namespace {

double off_diagonal_mass(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

} // namespace

EigenResult sym_eigen(const Mat& matrix, double tol) {
    if (!matrix.square() || matrix.rows < 1)
        throw ValidationError("sym_eigen: expected a square matrix with n >= 1");
    int n = matrix.rows;
    double scale = 0.0;
    for (double v : matrix.a) scale = std::max(scale, std::fabs(v));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(matrix(i, j) - matrix(j, i)) > 1e-12 * (1.0 + scale))
                throw ValidationError("sym_eigen: matrix is not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");

    Mat a = matrix;
    // Exact symmetry keeps the sweep updates consistent.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = avg;
        }

    Mat v = Mat::identity(n);
    double stop = tol * (1.0 + frobenius(a));

    int sweep = 0;
    while (off_diagonal_mass(a) >= stop) {
        if (++sweep > 100)
            throw NumericError("sym_eigen: no convergence after 100 sweeps");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    Vec diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    std::vector<int> order = argsort_desc(diag);

    EigenResult out;
    out.values.resize(n);
    out.frame = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = diag[order[j]];
        for (int i = 0; i < n; ++i) out.frame(i, j) = v(i, order[j]);
    }
    return out;
}

SvdResult svd_values(const Mat& matrix, double tol) {
    if (!matrix.square() || matrix.rows < 1)
        throw ValidationError("svd_values: expected a square matrix with n >= 1");
    int n = matrix.rows;

    Mat gram = matmul(transpose(matrix), matrix);
    EigenResult eig = sym_eigen(gram, tol);

    SvdResult out;
    out.values.resize(n);
    out.right = eig.frame;
    out.left = Mat(n, n);

    double scale = frobenius(matrix);
    double cutoff = 1e-12 * (1.0 + scale);

    std::vector<bool> filled(n, false);
    for (int j = 0; j < n; ++j) {
        out.values[j] = std::sqrt(std::max(eig.values[j], 0.0));
        if (out.values[j] <= cutoff) {
            out.values[j] = std::max(out.values[j], 0.0);
            continue;
        }
        Vec col(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += matrix(i, k) * out.right(k, j);
            col[i] = s;
        }
        // Polish against columns already placed; the exact result is
        // orthogonal, so this only trims rounding.
        for (int k = 0; k < j; ++k) {
            if (!filled[k]) continue;
            double proj = 0.0;
            for (int i = 0; i < n; ++i) proj += col[i] * out.left(i, k);
            for (int i = 0; i < n; ++i) col[i] -= proj * out.left(i, k);
        }
        double nrm = norm(col);
        if (nrm <= cutoff) continue;
        for (int i = 0; i < n; ++i) out.left(i, j) = col[i] / nrm;
        filled[j] = true;
    }

    // Complete the left factor on the null space with orthonormalized
    // canonical directions.
    for (int j = 0; j < n; ++j) {
        if (filled[j]) continue;
        for (int cand = 0; cand < n; ++cand) {
            Vec col(n, 0.0);
            col[cand] = 1.0;
            for (int k = 0; k < n; ++k) {
                if (!filled[k]) continue;
                double proj = 0.0;
                for (int i = 0; i < n; ++i) proj += col[i] * out.left(i, k);
                for (int i = 0; i < n; ++i) col[i] -= proj * out.left(i, k);
            }
            double nrm = norm(col);
            if (nrm > 0.5) {  // canonical direction mostly outside current span
                for (int i = 0; i < n; ++i) out.left(i, j) = col[i] / nrm;
                filled[j] = true;
                break;
            }
        }
        if (!filled[j])
            throw NumericError("svd_values: failed to complete the left factor");
    }
    return out;
}

namespace {

// Affine min-norm subproblem of Wolfe's algorithm: minimize ||sum a_i w_i||
// subject to sum a_i = 1, solved through the KKT system with a tiny ridge so
// affinely dependent corrals do not break the elimination.
Vec affine_min_norm_weights(const std::vector<Vec>& pts, double ridge) {
    int k = static_cast<int>(pts.size());
    Mat kkt(k + 1, k + 1);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) kkt(i, j) = dot(pts[i], pts[j]);
        kkt(i, i) += ridge;
        kkt(i, k) = 1.0;
        kkt(k, i) = 1.0;
    }
    Vec rhs(k + 1, 0.0);
    rhs[k] = 1.0;
    Vec sol = solve_linear(kkt, rhs);
    sol.resize(k);
    return sol;
}

} // namespace

HullVerdict hull_membership(const Vec& point, const std::vector<Vec>& vertices, double tol) {
    if (vertices.empty()) throw ValidationError("hull_membership: empty vertex list");
    for (const Vec& v : vertices)
        if (v.size() != point.size())
            throw ValidationError("hull_membership: dimension mismatch between point and vertices");

    int m = static_cast<int>(vertices.size());
    std::vector<Vec> w(m);
    double wmax = 0.0;
    for (int i = 0; i < m; ++i) {
        w[i] = sub(vertices[i], point);
        wmax = std::max(wmax, norm(w[i]));
    }

    // Corral state: indices into the vertex list plus convex weights.
    std::vector<int> corral;
    Vec lambda;
    {
        int best = 0;
        for (int i = 1; i < m; ++i)
            if (norm(w[i]) < norm(w[best])) best = i;
        corral = {best};
        lambda = {1.0};
    }

    auto combine = [&](const std::vector<int>& idx, const Vec& wt) {
        Vec x(point.size(), 0.0);
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t d = 0; d < x.size(); ++d) x[d] += wt[i] * w[idx[i]][d];
        return x;
    };

    double ridge = 1e-13 * (1.0 + wmax * wmax);
    double eps_term = 1e-12 * (1.0 + wmax * wmax);
    Vec x = combine(corral, lambda);

    int max_iter = 10 * m;
    for (int iter = 0; iter < max_iter; ++iter) {
        // Most improving vertex.
        int j = 0;
        double best = dot(x, w[0]);
        for (int i = 1; i < m; ++i) {
            double d = dot(x, w[i]);
            if (d < best) {
                best = d;
                j = i;
            }
        }
        if (best >= dot(x, x) - eps_term) break;
        if (std::find(corral.begin(), corral.end(), j) == corral.end()) {
            corral.push_back(j);
            lambda.push_back(0.0);
        }

        // Minor cycle: move to the affine optimum, dropping vertices whose
        // weight would go negative.
        while (true) {
            std::vector<Vec> pts;
            pts.reserve(corral.size());
            for (int idx : corral) pts.push_back(w[idx]);
            Vec alpha = affine_min_norm_weights(pts, ridge);

            bool all_positive = true;
            for (double av : alpha)
                if (av <= 1e-12) { all_positive = false; break; }
            if (all_positive) {
                lambda = alpha;
                break;
            }

            double theta = 1.0;
            for (size_t i = 0; i < alpha.size(); ++i)
                if (alpha[i] <= 1e-12) {
                    double denom = lambda[i] - alpha[i];
                    if (denom > 1e-300) theta = std::min(theta, lambda[i] / denom);
                }
            std::vector<int> next_corral;
            Vec next_lambda;
            for (size_t i = 0; i < corral.size(); ++i) {
                double nl = (1.0 - theta) * lambda[i] + theta * alpha[i];
                if (nl > 1e-12) {
                    next_corral.push_back(corral[i]);
                    next_lambda.push_back(nl);
                }
            }
            if (next_corral.empty()) {
                // Numerical corner: keep the heaviest member.
                size_t keep = 0;
                for (size_t i = 1; i < lambda.size(); ++i)
                    if (lambda[i] > lambda[keep]) keep = i;
                next_corral = {corral[keep]};
                next_lambda = {1.0};
            }
            corral = next_corral;
            lambda = next_lambda;
            if (corral.size() == 1) break;
        }
        // Renormalize drift in the convex weights.
        double sum = 0.0;
        for (double lv : lambda) sum += lv;
        if (sum > 0) for (double& lv : lambda) lv /= sum;
        x = combine(corral, lambda);
    }

    HullVerdict verdict;
    verdict.distance = norm(x);
    verdict.inside = verdict.distance <= tol * (1.0 + norm(point));
    if (verdict.inside) {
        verdict.weights.assign(m, 0.0);
        for (size_t i = 0; i < corral.size(); ++i) verdict.weights[corral[i]] = lambda[i];
    }
    return verdict;
}

} // namespace ftvn
