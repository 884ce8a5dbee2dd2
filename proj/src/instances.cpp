#include "ftvn/instances.hpp"

#include <algorithm>
#include <cmath>

namespace ftvn {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

Vec abs_vec(const Vec& x) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = std::fabs(x[i]);
    return r;
}

bool is_decreasing(const Vec& q, double tol) {
    double scale = 1.0 + max_abs(q);
    for (size_t i = 0; i + 1 < q.size(); ++i)
        if (q[i + 1] > q[i] + tol * scale) return false;
    return true;
}

bool is_decreasing_nonneg(const Vec& q, double tol) {
    if (!is_decreasing(q, tol)) return false;
    double scale = 1.0 + max_abs(q);
    return q.empty() || q.back() >= -tol * scale;
}

std::function<void(const Element&)> size_validator(std::string name, int dim) {
    return [name = std::move(name), dim](const Element& x) {
        if (x.coords.size() != static_cast<size_t>(dim))
            throw ValidationError(name + ": element has " + std::to_string(x.coords.size()) +
                                  " coordinates, expected " + std::to_string(dim));
    };
}

std::function<Element(Rng&)> gaussian_sampler(int dim) {
    return [dim](Rng& rng) { return Element{rng.normal_vec(dim)}; };
}

Element ones_direction(int n) {
    Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    return Element{v};
}

// Places q on the |c|-ordering of coordinates with the signs of c; ties in |c|
// (zeros included) fall back to ascending index via the stable argsort. Used
// by the absolute-value style instances (RnAbs, FiniteSeq).
Element signed_placement_witness(const Element& c, const Spectrum& q) {
    std::vector<int> order = argsort_desc(abs_vec(c.coords));
    Vec x(c.coords.size(), 0.0);
    for (size_t i = 0; i < order.size(); ++i)
        x[order[i]] = sign_of(c.coords[order[i]]) * q.coords[i];
    return Element{x};
}

LinearMap abs_style_transport(const Element& x, const Element& y) {
    int n = static_cast<int>(x.coords.size());
    Mat sx(n, n), sy(n, n);
    for (int i = 0; i < n; ++i) {
        sx(i, i) = sign_of(x.coords[i]);
        sy(i, i) = sign_of(y.coords[i]);
    }
    Mat px = permutation_matrix(argsort_desc(abs_vec(x.coords)));
    Mat py = permutation_matrix(argsort_desc(abs_vec(y.coords)));
    // lambda(x) = Px Sx x, so  y = Sy Py^T Px Sx x.
    Mat a = matmul(sy, matmul(transpose(py), matmul(px, sx)));
    return LinearMap{a, "signed-permutation"};
}

// Householder reflection taking x to y (requires ||x|| == ||y||); identity when
// the two already coincide.
Mat householder_transport(const Vec& x, const Vec& y) {
    int n = static_cast<int>(x.size());
    Vec u = sub(x, y);
    double nu = norm(u);
    if (nu <= 1e-13 * (1.0 + norm(x))) return Mat::identity(n);
    Mat h = Mat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) -= 2.0 * u[i] * u[j] / (nu * nu);
    return h;
}

System make_rn_down(int n) {
    if (n < 1) throw ValidationError("rn-down: dimension must be >= 1");
    System sys;
    sys.name = "rn-down";
    sys.kind = InstanceKind::RnDown;
    sys.dim_v = sys.dim_w = n;
    sys.validate_element = size_validator(sys.name, n);
    sys.lambda_of = [](const Element& x) { return Spectrum{sort_desc(x.coords)}; };
    sys.range_contains = [](const Spectrum& q, double tol) { return is_decreasing(q.coords, tol); };
    sys.witness = [](const Element& c, const Spectrum& q) {
        std::vector<int> order = argsort_desc(c.coords);
        Vec x(c.coords.size(), 0.0);
        for (size_t i = 0; i < order.size(); ++i) x[order[i]] = q.coords[i];
        return Element{x};
    };
    sys.sample_element = gaussian_sampler(n);
    sys.sample_automorphism = [n](Rng& rng) {
        return LinearMap{random_permutation_matrix(n, rng), "permutation"};
    };
    sys.transport = [](const Element& x, const Element& y, double) {
        Mat px = permutation_matrix(argsort_desc(x.coords));
        Mat py = permutation_matrix(argsort_desc(y.coords));
        return LinearMap{matmul(transpose(py), px), "permutation"};
    };
    sys.embed_spectrum = [](const Spectrum& q) { return Element{q.coords}; };
    sys.center = {CenterKind::Line, {ones_direction(n)}};
    sys.unit = Element{Vec(n, 1.0)};
    return sys;
}

System make_abs_style(InstanceKind kind, const std::string& name, int n) {
    if (n < 1) throw ValidationError(name + ": dimension must be >= 1");
    System sys;
    sys.name = name;
    sys.kind = kind;
    sys.dim_v = sys.dim_w = n;
    sys.validate_element = size_validator(name, n);
    sys.lambda_of = [](const Element& x) { return Spectrum{sort_desc(abs_vec(x.coords))}; };
    sys.range_contains = [](const Spectrum& q, double tol) {
        return is_decreasing_nonneg(q.coords, tol);
    };
    sys.witness = [](const Element& c, const Spectrum& q) {
        return signed_placement_witness(c, q);
    };
    sys.sample_element = gaussian_sampler(n);
    sys.sample_automorphism = [n](Rng& rng) {
        return LinearMap{random_signed_permutation_matrix(n, rng), "signed-permutation"};
    };
    sys.transport = [](const Element& x, const Element& y, double) {
        return abs_style_transport(x, y);
    };
    sys.embed_spectrum = [](const Spectrum& q) { return Element{q.coords}; };
    sys.center = {CenterKind::Trivial, {}};
    return sys;
}

System make_norm_system(int n) {
    if (n < 1) throw ValidationError("norm: dimension must be >= 1");
    System sys;
    sys.name = "norm";
    sys.kind = InstanceKind::NormSystem;
    sys.dim_v = n;
    sys.dim_w = 1;
    sys.validate_element = size_validator(sys.name, n);
    sys.lambda_of = [](const Element& x) { return Spectrum{{norm(x.coords)}}; };
    sys.range_contains = [](const Spectrum& q, double tol) {
        return q.coords[0] >= -tol * (1.0 + std::fabs(q.coords[0]));
    };
    sys.witness = [n](const Element& c, const Spectrum& q) {
        double r = std::max(q.coords[0], 0.0);
        double nc = norm(c.coords);
        Vec x(n, 0.0);
        if (nc > 1e-300) {
            for (int i = 0; i < n; ++i) x[i] = r * c.coords[i] / nc;
        } else {
            x[0] = r;
        }
        return Element{x};
    };
    sys.sample_element = gaussian_sampler(n);
    sys.sample_automorphism = [n](Rng& rng) {
        return LinearMap{random_orthogonal(n, rng), "orthogonal"};
    };
    sys.transport = [](const Element& x, const Element& y, double) {
        return LinearMap{householder_transport(x.coords, y.coords), "householder"};
    };
    sys.embed_spectrum = [n](const Spectrum& q) {
        Vec x(n, 0.0);
        x[0] = q.coords[0];
        return Element{x};
    };
    sys.center = {CenterKind::Trivial, {}};
    return sys;
}

std::function<void(const Element&)> symmetric_validator(int n) {
    return [n](const Element& x) {
        if (x.coords.size() != static_cast<size_t>(n) * n)
            throw ValidationError("sym: element has " + std::to_string(x.coords.size()) +
                                  " coordinates, expected " + std::to_string(n * n));
        Mat m = unflatten(x.coords, n);
        double scale = 1.0 + max_abs(x.coords);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::fabs(m(i, j) - m(j, i)) > 1e-12 * scale)
                    throw ValidationError("sym: element is not a symmetric matrix");
    };
}

Element symmetrized(const Mat& m) {
    Mat s = m;
    for (int i = 0; i < s.rows; ++i)
        for (int j = i + 1; j < s.cols; ++j) {
            double avg = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = s(j, i) = avg;
        }
    return Element{flatten(s)};
}

System make_sym(int n) {
    if (n < 1) throw ValidationError("sym: matrix size must be >= 1");
    System sys;
    sys.name = "sym";
    sys.kind = InstanceKind::Sym;
    sys.dim_v = n * n;
    sys.dim_w = n;
    sys.validate_element = symmetric_validator(n);
    sys.lambda_of = [n](const Element& x) {
        return Spectrum{sym_eigen(unflatten(x.coords, n)).values};
    };
    sys.range_contains = [](const Spectrum& q, double tol) { return is_decreasing(q.coords, tol); };
    sys.witness = [n](const Element& c, const Spectrum& q) {
        EigenResult e = sym_eigen(unflatten(c.coords, n));
        Mat x(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += e.frame(i, k) * q.coords[k] * e.frame(j, k);
                x(i, j) = s;
            }
        return symmetrized(x);
    };
    sys.sample_element = [n](Rng& rng) {
        Mat g(n, n);
        for (double& v : g.a) v = rng.normal();
        return symmetrized(g);
    };
    sys.sample_automorphism = [n](Rng& rng) {
        Mat q = random_orthogonal(n, rng);
        return LinearMap{kron(q, q), "conjugation"};
    };
    sys.transport = [n](const Element& x, const Element& y, double) {
        Mat ux = sym_eigen(unflatten(x.coords, n)).frame;
        Mat uy = sym_eigen(unflatten(y.coords, n)).frame;
        Mat q = matmul(uy, transpose(ux));
        return LinearMap{kron(q, q), "conjugation"};
    };
    sys.embed_spectrum = [n](const Spectrum& q) {
        Mat d(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = q.coords[i];
        return Element{flatten(d)};
    };
    Mat id = Mat::identity(n);
    sys.center = {CenterKind::Line, {Element{scale(1.0 / std::sqrt(double(n)), flatten(id))}}};
    sys.unit = Element{flatten(id)};
    return sys;
}

System make_sing_val(int n) {
    if (n < 1) throw ValidationError("sing-val: matrix size must be >= 1");
    System sys;
    sys.name = "sing-val";
    sys.kind = InstanceKind::SingVal;
    sys.dim_v = n * n;
    sys.dim_w = n;
    sys.validate_element = size_validator(sys.name, n * n);
    sys.lambda_of = [n](const Element& x) {
        return Spectrum{svd_values(unflatten(x.coords, n)).values};
    };
    sys.range_contains = [](const Spectrum& q, double tol) {
        return is_decreasing_nonneg(q.coords, tol);
    };
    sys.witness = [n](const Element& c, const Spectrum& q) {
        SvdResult s = svd_values(unflatten(c.coords, n));
        Mat x(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += s.left(i, k) * std::max(q.coords[k], 0.0) * s.right(j, k);
                x(i, j) = acc;
            }
        return Element{flatten(x)};
    };
    sys.sample_element = gaussian_sampler(n * n);
    sys.sample_automorphism = [n](Rng& rng) {
        Mat u = random_orthogonal(n, rng);
        Mat v = random_orthogonal(n, rng);
        return LinearMap{kron(u, v), "rotation-pair"};
    };
    sys.transport = [n](const Element& x, const Element& y, double) {
        SvdResult sx = svd_values(unflatten(x.coords, n));
        SvdResult sy = svd_values(unflatten(y.coords, n));
        Mat u = matmul(sy.left, transpose(sx.left));
        Mat v = matmul(sy.right, transpose(sx.right));
        return LinearMap{kron(u, v), "rotation-pair"};
    };
    sys.embed_spectrum = [n](const Spectrum& q) {
        Mat d(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = q.coords[i];
        return Element{flatten(d)};
    };
    sys.center = {CenterKind::Trivial, {}};
    return sys;
}

System make_spin(int total_dim) {
    if (total_dim < 2) throw ValidationError("spin: dimension must be >= 2 (scalar plus vector part)");
    int d = total_dim - 1;
    System sys;
    sys.name = "spin";
    sys.kind = InstanceKind::Spin;
    sys.dim_v = total_dim;
    sys.dim_w = 2;
    sys.validate_element = size_validator(sys.name, total_dim);
    auto vpart_norm = [d](const Vec& x) {
        double s = 0.0;
        for (int i = 1; i <= d; ++i) s += x[i] * x[i];
        return std::sqrt(s);
    };
    sys.lambda_of = [vpart_norm](const Element& x) {
        double t = x.coords[0];
        double r = vpart_norm(x.coords);
        return Spectrum{{(t + r) / kSqrt2, (t - r) / kSqrt2}};
    };
    sys.range_contains = [](const Spectrum& q, double tol) {
        return q.coords[0] >= q.coords[1] - tol * (1.0 + max_abs(q.coords));
    };
    sys.witness = [d, vpart_norm](const Element& c, const Spectrum& q) {
        double t = (q.coords[0] + q.coords[1]) / kSqrt2;
        double r = std::max((q.coords[0] - q.coords[1]) / kSqrt2, 0.0);
        double rc = vpart_norm(c.coords);
        Vec x(d + 1, 0.0);
        x[0] = t;
        if (rc > 1e-300) {
            for (int i = 1; i <= d; ++i) x[i] = r * c.coords[i] / rc;
        } else {
            x[1] = r;
        }
        return Element{x};
    };
    sys.sample_element = gaussian_sampler(total_dim);
    sys.sample_automorphism = [d](Rng& rng) {
        Mat r = random_orthogonal(d, rng);
        Mat a = Mat::identity(d + 1);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i + 1, j + 1) = r(i, j);
        return LinearMap{a, "vector-part rotation"};
    };
    sys.transport = [d](const Element& x, const Element& y, double) {
        Vec vx(x.coords.begin() + 1, x.coords.end());
        Vec vy(y.coords.begin() + 1, y.coords.end());
        Mat h = householder_transport(vx, vy);
        Mat a = Mat::identity(d + 1);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i + 1, j + 1) = h(i, j);
        return LinearMap{a, "vector-part householder"};
    };
    sys.embed_spectrum = [d](const Spectrum& q) {
        Vec x(d + 1, 0.0);
        x[0] = (q.coords[0] + q.coords[1]) / kSqrt2;
        x[1] = (q.coords[0] - q.coords[1]) / kSqrt2;
        return Element{x};
    };
    Vec e(total_dim, 0.0);
    e[0] = 1.0;
    sys.center = {CenterKind::Line, {Element{e}}};
    sys.unit = Element{e};
    return sys;
}

System make_discrete(int n, const std::optional<Mat>& isometry) {
    if (n < 1) throw ValidationError("discrete: dimension must be >= 1");
    Mat s = isometry.value_or(Mat::identity(n));
    if (!s.square() || s.rows != n)
        throw ValidationError("discrete: isometry must be n x n");
    if (orthogonality_defect(s) > 1e-10)
        throw ValidationError("discrete: isometry is not orthogonal (S^T S != I)");
    Mat st = transpose(s);

    System sys;
    sys.name = "discrete";
    sys.kind = InstanceKind::Discrete;
    sys.dim_v = sys.dim_w = n;
    sys.validate_element = size_validator(sys.name, n);
    sys.lambda_of = [s](const Element& x) { return Spectrum{matvec(s, x.coords)}; };
    sys.range_contains = [](const Spectrum&, double) { return true; };
    sys.witness = [st](const Element&, const Spectrum& q) { return Element{matvec(st, q.coords)}; };
    sys.sample_element = gaussian_sampler(n);
    sys.sample_automorphism = [n](Rng&) { return LinearMap{Mat::identity(n), "identity"}; };
    sys.transport = [n](const Element&, const Element&, double) {
        // Orbits are singletons, so the only transport is the identity.
        return LinearMap{Mat::identity(n), "identity"};
    };
    sys.embed_spectrum = [st](const Spectrum& q) { return Element{matvec(st, q.coords)}; };
    std::vector<Element> basis;
    for (int i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        basis.push_back(Element{e});
    }
    sys.center = {CenterKind::Full, std::move(basis)};
    return sys;
}

System make_twisted(const InstanceSpec& inner_spec) {
    auto inner = std::make_shared<const System>(make_system(inner_spec));
    System sys;
    sys.name = "twisted(" + inner->name + ")";
    sys.kind = InstanceKind::Twisted;
    sys.dim_v = inner->dim_v;
    sys.dim_w = inner->dim_w;
    sys.validate_element = inner->validate_element;
    sys.lambda_of = [inner](const Element& x) {
        Spectrum s = inner->lambda_of(Element{neg(x.coords)});
        return Spectrum{neg(s.coords)};
    };
    sys.range_contains = [inner](const Spectrum& q, double tol) {
        return inner->range_contains(Spectrum{neg(q.coords)}, tol);
    };
    sys.witness = [inner](const Element& c, const Spectrum& q) {
        Element y = inner->witness(Element{neg(c.coords)}, Spectrum{neg(q.coords)});
        return Element{neg(y.coords)};
    };
    sys.sample_element = inner->sample_element;
    sys.sample_automorphism = inner->sample_automorphism;
    if (inner->transport) {
        sys.transport = [inner](const Element& x, const Element& y, double tol) {
            return inner->transport(Element{neg(x.coords)}, Element{neg(y.coords)}, tol);
        };
    }
    sys.center = inner->center;
    sys.unit = inner->unit;
    return sys;
}

System make_product(const InstanceSpec& first, const InstanceSpec& second) {
    auto a = std::make_shared<const System>(make_system(first));
    auto b = std::make_shared<const System>(make_system(second));

    System sys;
    sys.name = "product(" + a->name + "," + b->name + ")";
    sys.kind = InstanceKind::Product;
    sys.dim_v = a->dim_v + b->dim_v;
    sys.dim_w = a->dim_w + b->dim_w;

    auto split_v = [a, b](const Vec& x) {
        return std::pair<Vec, Vec>(Vec(x.begin(), x.begin() + a->dim_v),
                                   Vec(x.begin() + a->dim_v, x.end()));
    };
    auto split_w = [a, b](const Vec& q) {
        return std::pair<Vec, Vec>(Vec(q.begin(), q.begin() + a->dim_w),
                                   Vec(q.begin() + a->dim_w, q.end()));
    };
    auto concat = [](const Vec& u, const Vec& v) {
        Vec r = u;
        r.insert(r.end(), v.begin(), v.end());
        return r;
    };

    sys.validate_element = [a, b, split_v, name = sys.name](const Element& x) {
        if (x.coords.size() != static_cast<size_t>(a->dim_v + b->dim_v))
            throw ValidationError(name + ": wrong element dimension");
        auto [xa, xb] = split_v(x.coords);
        a->validate_element(Element{xa});
        b->validate_element(Element{xb});
    };
    sys.lambda_of = [a, b, split_v, concat](const Element& x) {
        auto [xa, xb] = split_v(x.coords);
        return Spectrum{concat(a->lambda_of(Element{xa}).coords, b->lambda_of(Element{xb}).coords)};
    };
    sys.range_contains = [a, b, split_w](const Spectrum& q, double tol) {
        auto [qa, qb] = split_w(q.coords);
        return a->range_contains(Spectrum{qa}, tol) && b->range_contains(Spectrum{qb}, tol);
    };
    sys.witness = [a, b, split_v, split_w, concat](const Element& c, const Spectrum& q) {
        auto [ca, cb] = split_v(c.coords);
        auto [qa, qb] = split_w(q.coords);
        return Element{concat(a->witness(Element{ca}, Spectrum{qa}).coords,
                              b->witness(Element{cb}, Spectrum{qb}).coords)};
    };
    sys.sample_element = [a, b, concat](Rng& rng) {
        return Element{concat(a->sample_element(rng).coords, b->sample_element(rng).coords)};
    };
    auto block_diag = [a, b](const Mat& ma, const Mat& mb) {
        Mat m(a->dim_v + b->dim_v, a->dim_v + b->dim_v);
        for (int i = 0; i < ma.rows; ++i)
            for (int j = 0; j < ma.cols; ++j) m(i, j) = ma(i, j);
        for (int i = 0; i < mb.rows; ++i)
            for (int j = 0; j < mb.cols; ++j) m(a->dim_v + i, a->dim_v + j) = mb(i, j);
        return m;
    };
    sys.sample_automorphism = [a, b, block_diag](Rng& rng) {
        LinearMap ma = a->sample_automorphism(rng);
        LinearMap mb = b->sample_automorphism(rng);
        return LinearMap{block_diag(ma.matrix, mb.matrix), "block(" + ma.tag + "," + mb.tag + ")"};
    };
    if (a->transport && b->transport) {
        sys.transport = [a, b, split_v, block_diag](const Element& x, const Element& y, double tol) {
            auto [xa, xb] = split_v(x.coords);
            auto [ya, yb] = split_v(y.coords);
            LinearMap ta = a->transport(Element{xa}, Element{ya}, tol);
            LinearMap tb = b->transport(Element{xb}, Element{yb}, tol);
            return LinearMap{block_diag(ta.matrix, tb.matrix), "block transport"};
        };
    }

    CenterDescriptor center;
    for (const Element& e : a->center.basis)
        center.basis.push_back(Element{concat(e.coords, Vec(b->dim_v, 0.0))});
    for (const Element& e : b->center.basis)
        center.basis.push_back(Element{concat(Vec(a->dim_v, 0.0), e.coords)});
    if (center.basis.empty())
        center.kind = CenterKind::Trivial;
    else if (a->center.kind == CenterKind::Full && b->center.kind == CenterKind::Full)
        center.kind = CenterKind::Full;
    else if (center.basis.size() == 1)
        center.kind = CenterKind::Line;
    else
        center.kind = CenterKind::Custom;
    sys.center = center;
    if (sys.center.kind == CenterKind::Line) {
        if (a->unit)
            sys.unit = Element{concat(a->unit->coords, Vec(b->dim_v, 0.0))};
        else if (b->unit)
            sys.unit = Element{concat(Vec(a->dim_v, 0.0), b->unit->coords)};
    }
    return sys;
}

// The span of (1,1,1) and (3,1,0) inside (R^3, R^3, sort-descending). Elements
// are stored in ambient coordinates; (alpha, beta) are recovered from them.
struct SubspaceCoords {
    double alpha;
    double beta;
};

SubspaceCoords subspace_coords(const Vec& x) {
    return {x[2], 0.5 * (x[0] - x[1])};
}

Vec subspace_point(double alpha, double beta) {
    return {alpha + 3.0 * beta, alpha + beta, alpha};
}

System make_subspace() {
    System sys;
    sys.name = "subspace-counterexample";
    sys.kind = InstanceKind::SubspaceCounterexample;
    sys.dim_v = 3;
    sys.dim_w = 3;
    sys.validate_element = [](const Element& x) {
        if (x.coords.size() != 3)
            throw ValidationError("subspace-counterexample: elements live in R^3");
        SubspaceCoords ab = subspace_coords(x.coords);
        Vec re = subspace_point(ab.alpha, ab.beta);
        if (dist(re, x.coords) > 1e-9 * (1.0 + max_abs(x.coords)))
            throw ValidationError("subspace-counterexample: element is outside span{(1,1,1),(3,1,0)}");
    };
    sys.lambda_of = [](const Element& x) {
        SubspaceCoords ab = subspace_coords(x.coords);
        if (ab.beta >= 0.0) return Spectrum{x.coords};
        return Spectrum{{ab.alpha, ab.alpha + ab.beta, ab.alpha + 3.0 * ab.beta}};
    };
    // The unique preimage of q under lambda, solved branch by branch; RangeError
    // when q is outside lambda(U).
    auto preimage = [](const Spectrum& q) -> Element {
        const Vec& c = q.coords;
        double scale = 1.0 + max_abs(c);
        {
            // beta >= 0: lambda(x) = x, so q itself must lie in U.
            double alpha = c[2];
            double beta = c[1] - c[2];
            if (beta >= -1e-9 && std::fabs(c[0] - (alpha + 3.0 * beta)) <= 1e-9 * scale)
                return Element{subspace_point(alpha, std::max(beta, 0.0))};
        }
        {
            // beta < 0: q = alpha (1,1,1) + beta (0,1,3).
            double alpha = c[0];
            double beta = c[1] - c[0];
            if (beta < 1e-9 && std::fabs(c[2] - (alpha + 3.0 * beta)) <= 1e-9 * scale)
                return Element{subspace_point(alpha, std::min(beta, 0.0))};
        }
        throw RangeError("subspace-counterexample: q is not in lambda(U)");
    };
    sys.range_contains = [preimage](const Spectrum& q, double) {
        try {
            preimage(q);
            return true;
        } catch (const RangeError&) {
            return false;
        }
    };
    // A3 "search": lambda is injective on U, so the preimage is the only
    // candidate; equality with <lambda(c), q> generally fails, which is the
    // point of the example.
    sys.witness = [preimage](const Element&, const Spectrum& q) { return preimage(q); };
    sys.sample_element = [](Rng& rng) {
        return Element{subspace_point(rng.normal(), rng.normal())};
    };
    sys.sample_automorphism = [](Rng&) { return LinearMap{Mat::identity(3), "identity"}; };
    double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    sys.center = {CenterKind::Custom, {Element{Vec(3, inv_sqrt3)}}};
    sys.pinned_axiom_samples = {
        {Element{{3.0, 1.0, 0.0}}, Element{{-3.0, -1.0, 0.0}}},
    };
    return sys;
}

} // namespace

InstanceSpec rn_down_spec(int n) { return {InstanceKind::RnDown, n, {}, nullptr, nullptr}; }
InstanceSpec rn_abs_spec(int n) { return {InstanceKind::RnAbs, n, {}, nullptr, nullptr}; }
InstanceSpec norm_system_spec(int n) { return {InstanceKind::NormSystem, n, {}, nullptr, nullptr}; }
InstanceSpec sym_spec(int n) { return {InstanceKind::Sym, n, {}, nullptr, nullptr}; }
InstanceSpec sing_val_spec(int n) { return {InstanceKind::SingVal, n, {}, nullptr, nullptr}; }
InstanceSpec spin_spec(int total_dim) { return {InstanceKind::Spin, total_dim, {}, nullptr, nullptr}; }

InstanceSpec discrete_spec(int n, std::optional<Mat> isometry) {
    return {InstanceKind::Discrete, n, std::move(isometry), nullptr, nullptr};
}

InstanceSpec twisted_spec(InstanceSpec inner) {
    InstanceSpec s{InstanceKind::Twisted, 0, {}, nullptr, nullptr};
    s.inner = std::make_shared<InstanceSpec>(std::move(inner));
    return s;
}

InstanceSpec product_spec(InstanceSpec first, InstanceSpec second) {
    InstanceSpec s{InstanceKind::Product, 0, {}, nullptr, nullptr};
    s.inner = std::make_shared<InstanceSpec>(std::move(first));
    s.inner2 = std::make_shared<InstanceSpec>(std::move(second));
    return s;
}

InstanceSpec finite_seq_spec(int n) { return {InstanceKind::FiniteSeq, n, {}, nullptr, nullptr}; }

InstanceSpec subspace_counterexample_spec() {
    return {InstanceKind::SubspaceCounterexample, 3, {}, nullptr, nullptr};
}

System make_system(const InstanceSpec& spec) {
    switch (spec.kind) {
        case InstanceKind::RnDown: return make_rn_down(spec.dim);
        case InstanceKind::RnAbs: return make_abs_style(InstanceKind::RnAbs, "rn-abs", spec.dim);
        case InstanceKind::NormSystem: return make_norm_system(spec.dim);
        case InstanceKind::Sym: return make_sym(spec.dim);
        case InstanceKind::SingVal: return make_sing_val(spec.dim);
        case InstanceKind::Spin: return make_spin(spec.dim);
        case InstanceKind::Discrete: return make_discrete(spec.dim, spec.isometry);
        case InstanceKind::Twisted:
            if (!spec.inner) throw ValidationError("twisted: missing inner spec");
            return make_twisted(*spec.inner);
        case InstanceKind::Product:
            if (!spec.inner || !spec.inner2) throw ValidationError("product: missing factor specs");
            return make_product(*spec.inner, *spec.inner2);
        case InstanceKind::FiniteSeq:
            return make_abs_style(InstanceKind::FiniteSeq, "finite-seq", spec.dim);
        case InstanceKind::SubspaceCounterexample: return make_subspace();
    }
    throw ValidationError("make_system: unknown instance kind");
}

RearrangementResult decreasing_rearrangement(const Vec& x) {
    std::vector<int> order = argsort_desc(abs_vec(x));
    RearrangementResult out;
    out.star.resize(x.size());
    out.permutation.assign(x.size(), -1);
    for (size_t i = 0; i < order.size(); ++i) {
        out.star[i] = std::fabs(x[order[i]]);
        if (out.star[i] != 0.0) out.permutation[i] = order[i];
    }
    return out;
}

long distribution_function(const Vec& x, double alpha) {
    if (alpha < 0.0) throw ValidationError("distribution_function: alpha must be >= 0");
    long count = 0;
    for (double v : x)
        if (std::fabs(v) > alpha) ++count;
    return count;
}

SubspaceScenario subspace_counterexample() {
    SubspaceScenario s;
    s.basis_a = {1.0, 1.0, 1.0};
    s.basis_b = {3.0, 1.0, 0.0};
    s.c = Element{{3.0, 1.0, 0.0}};
    s.u = Element{{-3.0, -1.0, 0.0}};
    s.q = Spectrum{{0.0, -1.0, -3.0}};
    return s;
}

} // namespace ftvn
