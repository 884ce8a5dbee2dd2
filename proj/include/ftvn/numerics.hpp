#pragma once

#include <vector>

#include "ftvn/linalg.hpp"

namespace ftvn {

// Eigendecomposition of a symmetric matrix: values sorted decreasing, frame
// columns are the matching orthonormal eigenvectors.
struct EigenResult {
    Vec values;
    Mat frame;
};

// SVD of a square matrix: values decreasing and nonnegative,
// A = left * diag(values) * right^T.
struct SvdResult {
    Vec values;
    Mat left;
    Mat right;
};

struct HullVerdict {
    bool inside = false;
    Vec weights;      // convex coefficients over the vertex list, filled when inside
    double distance = 0.0;
};

// Decreasing sort; stable among ties.
Vec sort_desc(const Vec& v);

// Index permutation p with v[p[0]] >= v[p[1]] >= ...; ties keep original order.
std::vector<int> argsort_desc(const Vec& v);

// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
// tol * (1 + ||A||_F). Throws ValidationError on a non-symmetric input and
// NumericError if 100 sweeps do not converge.
EigenResult sym_eigen(const Mat& matrix, double tol = 1e-12);

// SVD through the eigendecomposition of A^T A; left factor recovered as
// A v_i / sigma_i with orthonormal completion for the null space.
SvdResult svd_values(const Mat& matrix, double tol = 1e-12);

// Membership of `point` in the convex hull of `vertices` via Wolfe's
// min-norm-point iteration, capped at 10 * |vertices| major steps.
HullVerdict hull_membership(const Vec& point, const std::vector<Vec>& vertices,
                            double tol = 1e-9);

} // namespace ftvn
