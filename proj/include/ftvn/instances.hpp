#pragma once

#include <memory>
#include <optional>
#include <string>

#include "ftvn/core.hpp"
#include "ftvn/numerics.hpp"

namespace ftvn {

// Descriptor for a concrete system. `dim` means: coordinate dimension of V for
// the vector instances, matrix size n for Sym / SingVal (dim_v = n^2), and the
// total coordinate dimension 1 + d for Spin. Twisted wraps `inner`; Product
// combines `inner` and `inner2`.
struct InstanceSpec {
    InstanceKind kind = InstanceKind::RnDown;
    int dim = 0;
    std::optional<Mat> isometry;             // Discrete; identity when absent
    std::shared_ptr<InstanceSpec> inner;
    std::shared_ptr<InstanceSpec> inner2;
};

InstanceSpec rn_down_spec(int n);
InstanceSpec rn_abs_spec(int n);
InstanceSpec norm_system_spec(int n);
InstanceSpec sym_spec(int n);
InstanceSpec sing_val_spec(int n);
InstanceSpec spin_spec(int total_dim);
InstanceSpec discrete_spec(int n, std::optional<Mat> isometry = std::nullopt);
InstanceSpec twisted_spec(InstanceSpec inner);
InstanceSpec product_spec(InstanceSpec first, InstanceSpec second);
InstanceSpec finite_seq_spec(int n);
InstanceSpec subspace_counterexample_spec();

System make_system(const InstanceSpec& spec);

// Decreasing rearrangement for the counting measure: |x| sorted decreasing,
// with the index map realizing it on nonzero entries (-1 where star is zero).
struct RearrangementResult {
    Vec star;
    std::vector<int> permutation;
};

RearrangementResult decreasing_rearrangement(const Vec& x);

// Number of entries with |x_i| > alpha (strict). alpha must be >= 0.
long distribution_function(const Vec& x, double alpha);

// The fixed subspace scenario: basis of U, the lambda rule is exposed through
// make_system(subspace_counterexample_spec()), and the designated triple on
// which the A3 search fails.
struct SubspaceScenario {
    Vec basis_a;  // (1, 1, 1)
    Vec basis_b;  // (3, 1, 0)
    Element c;    // (3, 1, 0)
    Element u;    // -(3, 1, 0)
    Spectrum q;   // lambda(u) = (0, -1, -3)
};

SubspaceScenario subspace_counterexample();

} // namespace ftvn
