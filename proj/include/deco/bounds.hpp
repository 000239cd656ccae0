#ifndef DECO_BOUNDS_HPP
#define DECO_BOUNDS_HPP

#include "deco/kernels.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace deco {

struct interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Finite resolution of the pointer observable: eigenvalues λ_a with rank-1
/// projections in the joint eigenbasis (the system Hamiltonian is diagonal
/// there too, so the free evolution is a phase per eigenvalue), plus the two
/// disjoint sector intervals under test.
struct sector_spec {
    Eigen::VectorXd f_eigenvalues;
    Eigen::VectorXd hs_eigenvalues; // empty means H_S = 0
    interval delta1, delta2;

    void validate() const;
    double gap() const; // distance δ between the intervals
    std::vector<int> members(const interval& iv) const;
};

/// A(t) in the joint eigenbasis: the double spectral sum realized as the
/// Hadamard contraction Σ_{a,b} χ(λ_a,λ_b) P_a A P_b, conjugated by the
/// free system phases. At t=0 (χ≡1) this returns A exactly.
Eigen::MatrixXcd assemble_heisenberg(const Eigen::MatrixXcd& a, const sector_spec& spec,
                                     const dephasing_kernel::snapshot& kernel, double t);

/// Largest singular value of the (Δ1, Δ2) block of A_t.
double offdiag_norm(const Eigen::MatrixXcd& a_t, const sector_spec& spec);

enum class sup_mode { analytic, finite_difference };

struct kernel_sup_bounds {
    double c1 = 0.0; // sup |χ| over Δ1×Δ2
    double c2 = 0.0; // sup of the larger partial-derivative magnitude
    bool refinement_warning = false;
    double refinement_change = 0.0;
};

/// Sup of |χ| and its larger (α or β) derivative magnitude over the closed
/// rectangle, on a tensor grid with one refinement check (warns when the
/// refined sup moves by more than 1%). Analytic mode uses the kernel's
/// derivative bound; finite-difference mode uses central differences with
/// step 1e-5·|Δ2|.
kernel_sup_bounds sup_kernel_bounds(const dephasing_kernel::snapshot& kernel, interval d1,
                                    interval d2, sup_mode mode, int base_grid = 16);

struct sector_bound_report {
    std::vector<double> times;
    std::vector<double> measured;  // ‖P(Δ1) A(t) P(Δ2)‖
    std::vector<double> bound_e3;  // (2c1 + |Δ2|c2)·‖A‖
    std::vector<double> envelope;  // fitted const·(1+δ²ψ(t))^{-γ}
    double fit_const = 0.0;
    double fit_gamma = 0.0;
    double max_margin = 0.0; // max (measured − bound_e3); ≤ slack when the theorem holds
    std::string kernel_id;
};

/// Decay envelope const·(1+δ²ψ)^{-γ}: fitted by least squares on log scale
/// unless supplied by the caller.
struct envelope_spec {
    double scale = 1.0;
    double gamma = 1.0;
};

/// Per-time verification of the uniform sector-norm bound. Throws
/// bound_violation if any measured norm exceeds the bound by more than
/// `slack`. `verify_bound` maps the time grid with the OpenMP driver;
/// `_serial` is the reference path.
sector_bound_report verify_bound(const Eigen::MatrixXcd& a, const sector_spec& spec,
                                 const dephasing_kernel& kernel,
                                 const std::vector<double>& times, double slack = 1e-9,
                                 const envelope_spec* supplied = nullptr);
sector_bound_report verify_bound_serial(const Eigen::MatrixXcd& a, const sector_spec& spec,
                                        const dephasing_kernel& kernel,
                                        const std::vector<double>& times, double slack = 1e-9,
                                        const envelope_spec* supplied = nullptr);

} // namespace deco

#endif
