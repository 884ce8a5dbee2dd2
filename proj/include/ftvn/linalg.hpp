#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftvn {

using Vec = std::vector<double>;

// Dense row-major matrix for desk-scale problems (n up to a few dozen);
// everything is O(n^3) or better.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    bool square() const { return rows == cols; }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class RangeError : public std::runtime_error {
public:
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

class OrbitMismatchError : public std::runtime_error {
public:
    explicit OrbitMismatchError(const std::string& what) : std::runtime_error(what) {}
};

class SizeGuardError : public std::runtime_error {
public:
    explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

class NotMajorizedError : public std::runtime_error {
public:
    explicit NotMajorizedError(const std::string& what) : std::runtime_error(what) {}
};

double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
double norm1(const Vec& x);
double max_abs(const Vec& x);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scale(double t, const Vec& x);
Vec neg(const Vec& x);
double dist(const Vec& x, const Vec& y);

Vec matvec(const Mat& m, const Vec& x);
Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_scale(double t, const Mat& m);
double frobenius(const Mat& m);
double mat_max_abs_diff(const Mat& a, const Mat& b);

// |a - b| <= tol * (1 + max(|a|,|b|)); the absolute-plus-relative rule used
// throughout the library.
bool approx_eq(double a, double b, double tol);
bool approx_eq(const Vec& a, const Vec& b, double tol);

// Largest |M M^T - I| entry; 0 for an exactly orthogonal matrix.
double orthogonality_defect(const Mat& m);

// Determinant via LU with partial pivoting. Used only as an invertibility
// probe, so no effort is spent on overflow scaling.
double determinant(const Mat& m);

// Solves a n x n linear system in place (Gaussian elimination, partial
// pivoting). Throws NumericError if a pivot falls below `pivot_tol`.
Vec solve_linear(Mat m, Vec b, double pivot_tol = 1e-13);

// Helpers for systems whose elements are flattened square matrices.
Mat unflatten(const Vec& coords, int n);
Vec flatten(const Mat& m);

// Kronecker product. For row-major flattening, vec(A X B^T) = kron(A, B) vec(X),
// so kron(Q, Q) is the conjugation X -> Q X Q^T acting on coordinates.
Mat kron(const Mat& a, const Mat& b);

} // namespace ftvn
