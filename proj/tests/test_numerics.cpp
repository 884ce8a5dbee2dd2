#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ftvn/numerics.hpp"
#include "ftvn/rng.hpp"

using namespace ftvn;

namespace {

// Characteristic-polynomial eigenvalues for a symmetric 2x2, decreasing.
Vec eigen2_oracle(double a, double b, double c) {
    double mean = 0.5 * (a + c);
    double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return {mean + r, mean - r};
}

// Trigonometric closed form for a symmetric 3x3, decreasing.
Vec eigen3_oracle(const Mat& m) {
    double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
    if (p1 == 0.0) return sort_desc({m(0, 0), m(1, 1), m(2, 2)});
    double q = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
    double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
                (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    Mat b(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b(i, j) = (m(i, j) - (i == j ? q : 0.0)) / p;
    double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                  b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                  b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    double r = std::clamp(detb / 2.0, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double e1 = q + 2.0 * p * std::cos(phi);
    double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    double e2 = 3.0 * q - e1 - e3;
    return sort_desc({e1, e2, e3});
}

Mat random_symmetric(int n, Rng& rng) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.normal();
    return m;
}

Mat reconstruct_eigen(const EigenResult& e) {
    int n = e.frame.rows;
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += e.frame(i, k) * e.values[k] * e.frame(j, k);
            m(i, j) = s;
        }
    return m;
}

Mat reconstruct_svd(const SvdResult& s) {
    int n = s.left.rows;
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += s.left(i, k) * s.values[k] * s.right(j, k);
            m(i, j) = acc;
        }
    return m;
}

// LP-free membership certificate for up to 3 vertices in the plane.
bool barycentric_inside(const Vec& p, const std::vector<Vec>& verts, double tol) {
    if (verts.size() == 1) return dist(p, verts[0]) <= tol;
    if (verts.size() == 2) {
        Vec d = sub(verts[1], verts[0]);
        double len2 = dot(d, d);
        double t = len2 > 0 ? std::clamp(dot(sub(p, verts[0]), d) / len2, 0.0, 1.0) : 0.0;
        Vec proj = add(verts[0], scale(t, d));
        return dist(p, proj) <= tol;
    }
    // Triangle: solve for barycentric coordinates.
    const Vec &a = verts[0], &b = verts[1], &c = verts[2];
    double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    if (std::fabs(det) < 1e-12) {
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = i + 1; j < 3; ++j)
                if (barycentric_inside(p, {verts[i], verts[j]}, tol)) return true;
        return false;
    }
    double wb = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
    double wc = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
    double wa = 1.0 - wb - wc;
    return wa >= -tol && wb >= -tol && wc >= -tol;
}

} // namespace

TEST_CASE("sort_desc golden cases and idempotence") {
    CHECK(sort_desc({1, 3, 2}) == Vec{3, 2, 1});
    CHECK(sort_desc({0, 0}) == Vec{0, 0});
    CHECK(sort_desc({-1, -3, -2}) == Vec{-1, -2, -3});

    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Vec v = rng.normal_vec(1 + rng.uniform_int(10));
        Vec once = sort_desc(v);
        CHECK(sort_desc(once) == once);
    }
}

TEST_CASE("argsort_desc is stable among ties") {
    std::vector<int> idx = argsort_desc({2.0, 5.0, 2.0, 5.0});
    CHECK(idx == std::vector<int>{1, 3, 0, 2});
}

TEST_CASE("sym_eigen golden cases") {
    Mat m(2, 2);
    m(0, 0) = 2; m(0, 1) = 1; m(1, 0) = 1; m(1, 1) = 2;
    EigenResult e = sym_eigen(m);
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    // Columns match (1,1)/sqrt2 and (1,-1)/sqrt2 up to sign.
    double s = 1.0 / std::sqrt(2.0);
    CHECK(std::fabs(e.frame(0, 0) * s + e.frame(1, 0) * s) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(e.frame(0, 1) * s - e.frame(1, 1) * s) == doctest::Approx(1.0).epsilon(1e-9));

    EigenResult id3 = sym_eigen(Mat::identity(3));
    CHECK(id3.values == Vec{1, 1, 1});

    Mat d(3, 3);
    d(0, 0) = 5; d(1, 1) = 2; d(2, 2) = -1;
    EigenResult ed = sym_eigen(d);
    CHECK(ed.values == Vec{5, 2, -1});
    for (int j = 0; j < 3; ++j) {
        int hits = 0;
        for (int i = 0; i < 3; ++i)
            if (std::fabs(std::fabs(ed.frame(i, j)) - 1.0) < 1e-12) ++hits;
        CHECK(hits == 1);  // permutation of identity columns
    }
}

TEST_CASE("sym_eigen rejects non-symmetric input") {
    Mat m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(sym_eigen(m), ValidationError);
}

TEST_CASE("sym_eigen matches the characteristic-polynomial oracle (n <= 3)") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        if (trial % 2 == 0) {
            double a = rng.normal(), b = rng.normal(), c = rng.normal();
            Mat m(2, 2);
            m(0, 0) = a; m(0, 1) = b; m(1, 0) = b; m(1, 1) = c;
            Vec expected = eigen2_oracle(a, b, c);
            Vec got = sym_eigen(m).values;
            for (int i = 0; i < 2; ++i)
                CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-9));
        } else {
            Mat m = random_symmetric(3, rng);
            Vec expected = eigen3_oracle(m);
            Vec got = sym_eigen(m).values;
            for (int i = 0; i < 3; ++i)
                CHECK(std::fabs(got[i] - expected[i]) <= 1e-9 * (1.0 + std::fabs(expected[i])));
        }
    }
}

TEST_CASE("sym_eigen reconstruction and frame orthogonality up to n = 12") {
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + rng.uniform_int(12);
        Mat m = random_symmetric(n, rng);
        EigenResult e = sym_eigen(m);
        for (size_t i = 0; i + 1 < e.values.size(); ++i) CHECK(e.values[i] >= e.values[i + 1]);
        CHECK(orthogonality_defect(e.frame) <= 1e-10);
        CHECK(mat_max_abs_diff(reconstruct_eigen(e), m) <= 1e-9 * (1.0 + frobenius(m)));
    }
}

TEST_CASE("svd_values golden cases") {
    Mat nilpotent(2, 2);
    nilpotent(0, 1) = 1.0;
    SvdResult s = svd_values(nilpotent);
    CHECK(s.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.values[1] == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(svd_values(Mat::identity(2)).values == Vec{1, 1});

    Mat d(2, 2);
    d(0, 0) = -3; d(1, 1) = 2;
    CHECK(svd_values(d).values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(svd_values(d).values[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("svd_values reconstruction, orthogonality, and gram oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 80; ++trial) {
        int n = 1 + rng.uniform_int(8);
        Mat m(n, n);
        for (double& v : m.a) v = rng.normal();
        SvdResult s = svd_values(m);
        for (size_t i = 0; i + 1 < s.values.size(); ++i) CHECK(s.values[i] >= s.values[i + 1]);
        CHECK(s.values.back() >= 0.0);
        CHECK(orthogonality_defect(s.left) <= 1e-9);
        CHECK(orthogonality_defect(s.right) <= 1e-9);
        CHECK(mat_max_abs_diff(reconstruct_svd(s), m) <= 1e-9 * (1.0 + frobenius(m)));

        if (n <= 2) {
            // Independent route: singular values are square roots of the
            // characteristic-polynomial eigenvalues of A^T A.
            Mat g = matmul(transpose(m), m);
            Vec ev = n == 1 ? Vec{g(0, 0)} : eigen2_oracle(g(0, 0), g(0, 1), g(1, 1));
            for (int i = 0; i < n; ++i) {
                double expected = std::sqrt(std::max(ev[i], 0.0));
                CHECK(std::fabs(s.values[i] - expected) <= 1e-9 * (1.0 + expected));
            }
        }
    }
}

TEST_CASE("svd_values on rank-deficient and zero matrices") {
    Mat zero(3, 3);
    SvdResult sz = svd_values(zero);
    CHECK(sz.values == Vec{0, 0, 0});
    CHECK(orthogonality_defect(sz.left) <= 1e-12);
    CHECK(orthogonality_defect(sz.right) <= 1e-12);

    // Rank-one outer product u v^T with ||u|| ||v|| as its only singular value.
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        Vec u = rng.normal_vec(4);
        Vec v = rng.normal_vec(4);
        Mat m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = u[i] * v[j];
        SvdResult s = svd_values(m);
        CHECK(s.values[0] == doctest::Approx(norm(u) * norm(v)).epsilon(1e-9));
        for (int k = 1; k < 4; ++k) CHECK(std::fabs(s.values[k]) <= 1e-7);
        CHECK(mat_max_abs_diff(reconstruct_svd(s), m) <= 1e-8 * (1.0 + frobenius(m)));
        CHECK(orthogonality_defect(s.left) <= 1e-8);
    }
}

TEST_CASE("sym_eigen handles clustered spectra") {
    // Nearly-degenerate eigenvalues still reconstruct and stay ordered.
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        Mat q = random_orthogonal(4, rng);
        Vec vals = {2.0, 2.0 + 1e-13, -1.0, -1.0};
        Mat a(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += q(i, k) * vals[k] * q(j, k);
                a(i, j) = s;
            }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                double avg = 0.5 * (a(i, j) + a(j, i));
                a(i, j) = a(j, i) = avg;
            }
        EigenResult e = sym_eigen(a);
        CHECK(mat_max_abs_diff(reconstruct_eigen(e), a) <= 1e-9 * (1.0 + frobenius(a)));
        CHECK(orthogonality_defect(e.frame) <= 1e-10);
        for (int i = 0; i + 1 < 4; ++i) CHECK(e.values[i] >= e.values[i + 1]);
    }
}

TEST_CASE("hull_membership golden cases") {
    HullVerdict inside = hull_membership({1.5, 0.5}, {{2, 0}, {0, 2}});
    CHECK(inside.inside);
    CHECK(inside.weights[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(inside.weights[1] == doctest::Approx(0.25).epsilon(1e-9));

    HullVerdict outside = hull_membership({3, 0}, {{2, 0}, {0, 2}});
    CHECK_FALSE(outside.inside);
    CHECK(outside.distance == doctest::Approx(1.0).epsilon(1e-9));

    HullVerdict vertex = hull_membership({0, 2}, {{2, 0}, {0, 2}});
    CHECK(vertex.inside);
    CHECK(vertex.weights[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hull_membership validates dimensions") {
    CHECK_THROWS_AS(hull_membership({1.0, 2.0}, {{1.0}}), ValidationError);
    CHECK_THROWS_AS(hull_membership({1.0}, {}), ValidationError);
}

TEST_CASE("hull_membership agrees with the barycentric certificate in the plane") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        int k = 1 + rng.uniform_int(3);
        std::vector<Vec> verts;
        for (int i = 0; i < k; ++i) verts.push_back(rng.normal_vec(2));

        Vec p;
        if (trial % 2 == 0) {
            // Convex combination: robustly inside.
            Vec w(k);
            double total = 0.0;
            for (int i = 0; i < k; ++i) total += (w[i] = rng.uniform() + 0.05);
            p = Vec(2, 0.0);
            for (int i = 0; i < k; ++i) p = add(p, scale(w[i] / total, verts[i]));
        } else {
            // Push well away from the hull.
            p = add(rng.normal_vec(2), Vec{3.0 + rng.uniform(), 3.0 + rng.uniform()});
        }

        bool expected = barycentric_inside(p, verts, 1e-9);
        HullVerdict got = hull_membership(p, verts, 1e-9);
        // Skip knife-edge disagreements within 1e-7 of the boundary.
        if (!expected && got.inside) continue;
        if (expected != got.inside) CHECK(got.distance <= 1e-7);
        if (got.inside) {
            double sum = 0.0;
            Vec rebuilt(2, 0.0);
            for (int i = 0; i < k; ++i) {
                CHECK(got.weights[i] >= -1e-12);
                sum += got.weights[i];
                rebuilt = add(rebuilt, scale(got.weights[i], verts[i]));
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(dist(rebuilt, p) <= 1e-8 * (1.0 + norm(p)));
        }
    }
}

TEST_CASE("hull_membership survives degenerate vertex sets") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = 2 + rng.uniform_int(4);
        int base_count = 1 + rng.uniform_int(4);
        std::vector<Vec> verts;
        for (int i = 0; i < base_count; ++i) verts.push_back(rng.normal_vec(dim));
        // Duplicates and collinear fillers.
        int extra = rng.uniform_int(4);
        for (int i = 0; i < extra; ++i) {
            if (rng.uniform() < 0.5) {
                verts.push_back(verts[rng.uniform_int(base_count)]);
            } else {
                const Vec& a = verts[rng.uniform_int(static_cast<int>(verts.size()))];
                const Vec& b = verts[rng.uniform_int(static_cast<int>(verts.size()))];
                double t = rng.uniform();
                verts.push_back(add(scale(t, a), scale(1.0 - t, b)));
            }
        }

        // A guaranteed interior point: random convex combination.
        Vec weights(verts.size());
        double total = 0.0;
        for (double& w : weights) total += (w = rng.uniform() + 0.02);
        Vec inside_pt(dim, 0.0);
        for (size_t i = 0; i < verts.size(); ++i)
            inside_pt = add(inside_pt, scale(weights[i] / total, verts[i]));

        HullVerdict v = hull_membership(inside_pt, verts, 1e-9);
        CHECK(v.inside);
        if (v.inside) {
            Vec rebuilt(dim, 0.0);
            double sum = 0.0;
            for (size_t i = 0; i < verts.size(); ++i) {
                rebuilt = add(rebuilt, scale(v.weights[i], verts[i]));
                sum += v.weights[i];
                CHECK(v.weights[i] >= -1e-12);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(dist(rebuilt, inside_pt) <= 1e-7 * (1.0 + norm(inside_pt)));
        }

        // A point pushed far outside along a random direction.
        Vec dir = rng.normal_vec(dim);
        double len = norm(dir);
        if (len > 1e-6) {
            Vec far = add(verts[0], scale(20.0 / len, dir));
            HullVerdict out = hull_membership(far, verts, 1e-9);
            CHECK_FALSE(out.inside);
            CHECK(out.distance > 1.0);
        }
    }
}

TEST_CASE("hull_membership handles a 5-dimensional simplex face") {
    // Query on a face: the centroid of 3 of 6 simplex vertices.
    std::vector<Vec> verts;
    for (int i = 0; i < 6; ++i) {
        Vec e(5, 0.0);
        if (i < 5) e[i] = 1.0;
        verts.push_back(e);
    }
    Vec centroid(5, 0.0);
    for (int i = 0; i < 3; ++i) centroid = add(centroid, scale(1.0 / 3.0, verts[i]));
    HullVerdict v = hull_membership(centroid, verts);
    CHECK(v.inside);
    Vec rebuilt(5, 0.0);
    for (size_t i = 0; i < verts.size(); ++i) rebuilt = add(rebuilt, scale(v.weights[i], verts[i]));
    CHECK(dist(rebuilt, centroid) <= 1e-8);
}
