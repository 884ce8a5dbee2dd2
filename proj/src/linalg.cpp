#include "ftvn/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ftvn {

namespace {
void require_same_size(const Vec& x, const Vec& y, const char* op) {
    if (x.size() != y.size())
        throw ValidationError(std::string(op) + ": dimension mismatch (" +
                              std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
}
} // namespace

double dot(const Vec& x, const Vec& y) {
    require_same_size(x, y, "dot");
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

double norm1(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return s;
}

double max_abs(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

Vec add(const Vec& x, const Vec& y) {
    require_same_size(x, y, "add");
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vec sub(const Vec& x, const Vec& y) {
    require_same_size(x, y, "sub");
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vec scale(double t, const Vec& x) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = t * x[i];
    return r;
}

Vec neg(const Vec& x) { return scale(-1.0, x); }

double dist(const Vec& x, const Vec& y) { return norm(sub(x, y)); }

Vec matvec(const Mat& m, const Vec& x) {
    if (static_cast<size_t>(m.cols) != x.size())
        throw ValidationError("matvec: dimension mismatch");
    Vec r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw ValidationError("matmul: dimension mismatch");
    Mat r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Mat transpose(const Mat& m) {
    Mat r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
    return r;
}

Mat mat_add(const Mat& a, const Mat& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ValidationError("mat_add: shape mismatch");
    Mat r = a;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += b.a[i];
    return r;
}

Mat mat_scale(double t, const Mat& m) {
    Mat r = m;
    for (double& v : r.a) v *= t;
    return r;
}

double frobenius(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

double mat_max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ValidationError("mat_max_abs_diff: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::fabs(a.a[i] - b.a[i]));
    return m;
}

bool approx_eq(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

bool approx_eq(const Vec& a, const Vec& b, double tol) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!approx_eq(a[i], b[i], tol)) return false;
    return true;
}

double orthogonality_defect(const Mat& m) {
    if (!m.square()) return 1.0;
    Mat p = matmul(m, transpose(m));
    double worst = 0.0;
    for (int i = 0; i < p.rows; ++i)
        for (int j = 0; j < p.cols; ++j)
            worst = std::max(worst, std::fabs(p(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

double determinant(const Mat& m) {
    if (!m.square()) throw ValidationError("determinant: matrix not square");
    Mat lu = m;
    int n = m.rows;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(lu(r, col)) > std::fabs(lu(pivot, col))) pivot = r;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(lu(pivot, j), lu(col, j));
            det = -det;
        }
        double p = lu(col, col);
        det *= p;
        if (p == 0.0) return 0.0;
        for (int r = col + 1; r < n; ++r) {
            double f = lu(r, col) / p;
            for (int j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
        }
    }
    return det;
}

Vec solve_linear(Mat m, Vec b, double pivot_tol) {
    if (!m.square() || static_cast<size_t>(m.rows) != b.size())
        throw ValidationError("solve_linear: shape mismatch");
    int n = m.rows;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(m(r, col)) > std::fabs(m(pivot, col))) pivot = r;
        if (std::fabs(m(pivot, col)) < pivot_tol)
            throw NumericError("solve_linear: singular system (pivot " +
                               std::to_string(m(pivot, col)) + ")");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
            std::swap(b[pivot], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = m(r, col) / m(col, col);
            b[r] -= f * b[col];
            for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    Vec x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            double aij = a(i, j);
            if (aij == 0.0) continue;
            for (int k = 0; k < b.rows; ++k)
                for (int l = 0; l < b.cols; ++l)
                    r(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
        }
    return r;
}

Mat unflatten(const Vec& coords, int n) {
    if (coords.size() != static_cast<size_t>(n) * n)
        throw ValidationError("unflatten: expected " + std::to_string(n * n) +
                              " coordinates, got " + std::to_string(coords.size()));
    Mat m(n, n);
    m.a = coords;
    return m;
}

Vec flatten(const Mat& m) { return m.a; }

} // namespace ftvn
