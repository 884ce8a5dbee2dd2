#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ftvn/automorphisms.hpp"
#include "ftvn/core.hpp"
#include "ftvn/doubly_stochastic.hpp"
#include "ftvn/instances.hpp"
#include "ftvn/majorization.hpp"

using namespace ftvn;

TEST_CASE("hlp_majorize golden cases") {
    MajorizationVerdict v1 = hlp_majorize({1, 1, 1}, {3, 0, 0});
    CHECK(v1.holds);
    CHECK(v1.weak_holds);
    CHECK(v1.margin == doctest::Approx(1.0));  // slacks 2 and 1 at k = 1, 2

    MajorizationVerdict v2 = hlp_majorize({2, 2, -1}, {3, 0, 0});
    CHECK_FALSE(v2.holds);
    CHECK_FALSE(v2.weak_holds);  // 4 > 3 at k = 2
    CHECK(v2.margin == doctest::Approx(-1.0));

    MajorizationVerdict v3 = hlp_majorize({2, 0.5}, {3, 0});
    CHECK(v3.weak_holds);
    CHECK_FALSE(v3.holds);  // totals differ

    CHECK(hlp_majorize({1, 5, 2}, {5, 1, 2}).holds);  // reflexive up to permutation
    CHECK_THROWS_AS(hlp_majorize({1, 2}, {1, 2, 3}), ValidationError);
}

TEST_CASE("majorize_in_v across families") {
    System sym = make_system(sym_spec(2));
    Element x{{2, 0, 0, 2}};
    Element y{{3, 0, 0, 1}};
    CHECK(majorize_in_v(sym, x, y).holds);
    CHECK_FALSE(majorize_in_v(sym, y, x).holds);

    System rn = make_system(rn_down_spec(2));
    MajorizationVerdict v = majorize_in_v(rn, Element{{1.5, 0.5}}, Element{{2, 0}});
    CHECK(v.holds);
    REQUIRE(v.witness.has_value());
    // Hull certificate: 0.75 (2,0) + 0.25 (0,2).
    Vec rebuilt(2, 0.0);
    for (size_t i = 0; i < v.witness->vertices.size(); ++i)
        rebuilt = add(rebuilt, scale(v.witness->weights[i], v.witness->vertices[i]));
    CHECK(dist(rebuilt, {1.5, 0.5}) <= 1e-8);

    Rng rng(3);
    Element z = sym.sample_element(rng);
    CHECK(majorize_in_v(sym, z, z).holds);

    System prod = make_system(product_spec(rn_down_spec(2), sym_spec(2)));
    Element p = prod.sample_element(rng);
    CHECK_THROWS_AS(majorize_in_v(prod, p, p), UnsupportedError);
}

TEST_CASE("sing-val majorization is the weak form") {
    System sv = make_system(sing_val_spec(2));
    // Dx with D = 0.5 I halves singular values: weakly majorized, sums differ.
    Element y{{2, 0, 0, 1}};
    Element x{{1, 0, 0, 0.5}};
    MajorizationVerdict v = majorize_in_v(sv, x, y);
    CHECK(v.holds);
    CHECK(v.weak_holds);
    MajorizationVerdict reverse = majorize_in_v(sv, y, x);
    CHECK_FALSE(reverse.holds);
}

TEST_CASE("hull_oracle_rn golden cases") {
    MajorizationVerdict mid = hull_oracle_rn({1, 1}, {2, 0});
    CHECK(mid.holds);
    REQUIRE(mid.witness.has_value());
    CHECK(mid.witness->weights[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(mid.witness->weights[1] == doctest::Approx(0.5).epsilon(1e-8));

    CHECK_FALSE(hull_oracle_rn({2.1, -0.1}, {2, 0}).holds);
    CHECK(hull_oracle_rn({0, 2}, {2, 0}).holds);

    CHECK_THROWS_AS(hull_oracle_rn(Vec(7, 0.0), Vec(7, 0.0)), SizeGuardError);
}

TEST_CASE("oracle agreement on mixed random pairs, n = 2..5") {
    Rng rng(5);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        int n = 2 + trial % 4;
        Vec y = rng.normal_vec(n);
        Vec x;
        if (trial % 2 == 0) {
            // Push y through a random doubly stochastic map: majorized by design.
            std::vector<LinearMap> perms;
            Vec weights;
            double total = 0.0;
            int k = 1 + rng.uniform_int(n);
            for (int i = 0; i < k; ++i) {
                perms.push_back({random_permutation_matrix(n, rng), "perm"});
                double w = rng.uniform() + 0.1;
                weights.push_back(w);
                total += w;
            }
            for (double& w : weights) w /= total;
            Mat d(n, n);
            for (int i = 0; i < k; ++i) d = mat_add(d, mat_scale(weights[i], perms[i].matrix));
            x = matvec(d, y);
        } else {
            x = rng.normal_vec(n);
        }
        MajorizationVerdict fast = hlp_majorize(x, y, 1e-9);
        if (std::fabs(fast.margin) <= 1e-7) continue;  // knife edge, skip
        MajorizationVerdict oracle = hull_oracle_rn(x, y, 1e-9);
        CHECK(fast.holds == oracle.holds);
        ++checked;
    }
    CHECK(checked > 250);
}

TEST_CASE("support violations") {
    System rn = make_system(rn_down_spec(2));
    // Majorized pair: all directions satisfied.
    CHECK(support_test(rn, Element{{1, 1}}, Element{{2, 0}}, 200, 9).passed);
    // Non-majorized pair: violated at c = (1, 0).
    CHECK(support_violation(rn, Element{{2, 0}}, Element{{1, 1}}, Element{{1, 0}}) > 0.2);
    CHECK_FALSE(support_test(rn, Element{{2, 0}}, Element{{1, 1}}, 200, 9).passed);
    // x = y: nothing to violate.
    CHECK(support_test(rn, Element{{2, 0}}, Element{{2, 0}}, 100, 9).passed);

    System sym = make_system(sym_spec(3));
    Rng rng(7);
    Element y = sym.sample_element(rng);
    // 0.5 y + 0.5 (automorphism of y) is majorized by y.
    LinearMap a = sym.sample_automorphism(rng);
    Element mix{add(scale(0.5, y.coords), scale(0.5, matvec(a.matrix, y.coords)))};
    CHECK(support_test(sym, mix, y, 150, 9).passed);
}

TEST_CASE("mutual majorization") {
    System rn = make_system(rn_down_spec(3));
    CHECK(mutual_majorization_check(rn, Element{{1, 3, 2}}, Element{{2, 1, 3}}));
    CHECK_FALSE(mutual_majorization_check(rn, Element{{1, 1, 0}}, Element{{2, 0, 0}}));

    System sym = make_system(sym_spec(3));
    Rng rng(11);
    Element x = sym.sample_element(rng);
    LinearMap q = sym.sample_automorphism(rng);
    Element conj{matvec(q.matrix, x.coords)};
    CHECK(mutual_majorization_check(sym, x, conj));
}

TEST_CASE("lidskii sums") {
    System sym = make_system(sym_spec(2));
    Element x{{1, 0, 0, -1}};
    Element y{{0, 1, 1, 0}};
    MajorizationVerdict v = lidskii_sum_check(sym, {x, y});
    CHECK(v.holds);
    // lambda(x + y) = (sqrt2, -sqrt2) against (2, -2).
    Spectrum s = lambda(sym, Element{add(x.coords, y.coords)});
    CHECK(s.coords[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(s.coords[1] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));

    Rng rng(13);
    Element z = sym.sample_element(rng);
    CHECK(lidskii_sum_check(sym, {z, z, z}).holds);  // homogeneity equality case

    for (const System& sys :
         {make_system(sym_spec(4)), make_system(sing_val_spec(3)), make_system(spin_spec(4)),
          make_system(rn_down_spec(5))}) {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Element> xs;
            int count = 2 + trial % 2;
            for (int i = 0; i < count; ++i) xs.push_back(sys.sample_element(rng));
            MajorizationVerdict check = lidskii_sum_check(sys, xs, 1e-8);
            INFO(sys.name);
            CHECK(check.holds);
        }
    }
}

TEST_CASE("majorization implies the monotone norm bound") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + rng.uniform_int(5);
        Vec y = rng.normal_vec(n);
        Mat d(n, n);
        Vec weights;
        double total = 0.0;
        for (int i = 0; i < 3; ++i) {
            double w = rng.uniform() + 0.1;
            weights.push_back(w);
            total += w;
        }
        for (int i = 0; i < 3; ++i)
            d = mat_add(d, mat_scale(weights[i] / total, random_permutation_matrix(n, rng)));
        Vec x = matvec(d, y);
        REQUIRE(hlp_majorize(x, y, 1e-9).holds);
        CHECK(norm(x) <= norm(y) + 1e-9);
    }
}

TEST_CASE("the diagonal of a symmetric matrix is majorized by its spectrum") {
    System sym = make_system(sym_spec(5));
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        Element x = sym.sample_element(rng);
        Vec diagonal(5);
        for (int i = 0; i < 5; ++i) diagonal[i] = x.coords[static_cast<size_t>(i) * 5 + i];
        CHECK(hlp_majorize(diagonal, lambda(sym, x).coords, 1e-9).holds);
    }
}

TEST_CASE("majorized pairs are reached by convex combinations of automorphisms") {
    // x majorized by y in rn-down: the T-transform witness is doubly
    // stochastic, its Birkhoff terms are permutations (automorphisms), and the
    // recombined map carries y to x.
    System rn = make_system(rn_down_spec(5));
    Rng rng(25);
    for (int trial = 0; trial < 60; ++trial) {
        Vec y = rng.normal_vec(5);
        Mat ds = mat_add(mat_scale(0.5, random_permutation_matrix(5, rng)),
                         mat_scale(0.5, random_permutation_matrix(5, rng)));
        Vec x = matvec(ds, y);

        DsMatrix witness = construct_ds_witness(x, y, 1e-9);
        BirkhoffDecomposition dec = birkhoff_decompose(witness.matrix, 1e-10);

        Vec weights;
        std::vector<LinearMap> autos;
        for (const BirkhoffTerm& term : dec.terms) {
            weights.push_back(term.weight);
            autos.push_back({permutation_matrix(term.permutation), "permutation"});
            CHECK(is_automorphism(rn, autos.back(), 20, trial).passed);
        }
        LinearMap recombined = ds_from_automorphisms(rn, weights, autos);
        CHECK(dist(matvec(recombined.matrix, y), x) <= 1e-8 * (1.0 + norm1(x)));
        CHECK(is_ds_transform(rn, recombined, 60, trial).passed);
    }
}

TEST_CASE("verdict invariant: holds implies weak_holds") {
    Rng rng(23);
    System sym = make_system(sym_spec(3));
    System sv = make_system(sing_val_spec(3));
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + rng.uniform_int(5);
        MajorizationVerdict h = hlp_majorize(rng.normal_vec(n), rng.normal_vec(n));
        if (h.holds) CHECK(h.weak_holds);

        const System& sys = trial % 2 == 0 ? sym : sv;
        Element x = sys.sample_element(rng);
        Element y = sys.sample_element(rng);
        MajorizationVerdict v = majorize_in_v(sys, x, y);
        if (v.holds) CHECK(v.weak_holds);
    }
}

TEST_CASE("majorization is transitive and reflexive on the W side") {
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + rng.uniform_int(4);
        Vec z = rng.normal_vec(n);
        auto apply_ds = [&](const Vec& v) {
            Mat d(n, n);
            d = mat_add(mat_scale(0.5, random_permutation_matrix(n, rng)),
                        mat_scale(0.5, random_permutation_matrix(n, rng)));
            return matvec(d, v);
        };
        Vec y = apply_ds(z);
        Vec x = apply_ds(y);
        CHECK(hlp_majorize(y, z, 1e-9).holds);
        CHECK(hlp_majorize(x, y, 1e-9).holds);
        CHECK(hlp_majorize(x, z, 1e-8).holds);  // accumulated tolerance
        CHECK(hlp_majorize(x, x, 1e-9).holds);
    }
}
