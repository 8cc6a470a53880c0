// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nhs/types.hpp"

namespace nhs {

struct QuadratureRule;  // quadrature.hpp

/// A biorthogonal eigensystem on a box domain: two families u_xi, v_xi with
/// (u_xi, v_eta) = delta in L^2 of the normalized measure, eigenvalues
/// lambda_xi of a model operator of order m, and the growth/summability
/// constants the analysis relies on.
///
/// Implementations are immutable after construction; every evaluator is pure
/// and safe to call concurrently.
class BiorthogonalSystem {
public:
    virtual ~BiorthogonalSystem() = default;

    const DomainSpec& domain() const { return domain_; }
    const std::string& name() const { return name_; }
    int dim() const { return domain_.dim; }
    /// Length of the lattice index (may exceed dim, e.g. a parity slot).
    int lattice_dim() const { return lattice_dim_; }
    int order_m() const { return order_m_; }
    /// Growth witnesses: sup |u_xi| <= growth_constant * bracket^growth_exponent.
    double growth_constant() const { return growth_constant_; }
    double growth_exponent() const { return growth_exponent_; }
    /// Summability exponent: partial sums of bracket^(-s) stay bounded for
    /// s >= summability_exponent.
    double summability_exponent() const { return summability_exponent_; }
    /// True when both families are real-valued everywhere.
    bool real_valued() const { return real_valued_; }

    virtual Complex eigenvalue(const Index& xi) const = 0;
    EigenData eigen_data(const Index& xi) const;

    virtual Complex u(const Index& xi, std::span<const double> x) const = 0;
    virtual Complex v(const Index& xi, std::span<const double> x) const = 0;

    /// First partial derivative of u_xi with respect to x_j.
    virtual Complex u_partial(const Index& xi, std::span<const double> x,
                              int j) const = 0;
    /// Second partial derivative of u_xi with respect to x_j and x_k.
    virtual Complex u_partial2(const Index& xi, std::span<const double> x,
                               int j, int k) const = 0;

    /// All admissible lattice points whose coordinates are bounded by
    /// `radius` in absolute value (parity-style slots are not counted toward
    /// the bound). Used by the enumeration window growth.
    virtual std::vector<Index> lattice_window(long radius) const = 0;

    /// A lower bound for the bracket of every admissible lattice point
    /// outside the window of the given radius. Must grow without bound in
    /// the radius; enumeration correctness depends only on it being a valid
    /// lower bound.
    virtual double min_bracket_outside(long radius) const = 0;

    /// Number of oscillation periods of u_xi (and v_xi) across the box in
    /// the worst coordinate; drives the default quadrature order.
    virtual long resolution_frequency(const Index& xi) const = 0;

    /// False for associated functions that satisfy the eigen-relation only
    /// up to a coupling term (they still carry an eigenvalue for weighting).
    virtual bool eigenrelation_holds(const Index& xi) const {
        (void)xi;
        return true;
    }

protected:
    DomainSpec domain_;
    std::string name_;
    int lattice_dim_ = 1;
    int order_m_ = 2;
    double growth_constant_ = 1.0;
    double growth_exponent_ = 0.0;
    double summability_exponent_ = 2.0;
    bool real_valued_ = false;
};

using SystemPtr = std::shared_ptr<const BiorthogonalSystem>;

/// Flat torus (0,2pi)^d with exponentials exp(i x.xi); orthonormal.
SystemPtr make_torus(int d);

/// Torus exponentials twisted by h^(x/2pi): u carries the factor, v its
/// reciprocal, so the pairing is unchanged. Eigenvalues pick up a real shift
/// and an imaginary part proportional to xi . ln h.
SystemPtr make_h_twisted(int d, std::vector<double> h);

/// Real-valued twisted family: sqrt(2) h^(x/2pi) cos(x.xi) and sin(x.xi)
/// with reciprocal-twisted partners; the lattice carries a parity slot and
/// uses lexicographically positive representatives.
SystemPtr make_h_twisted_real(int d, std::vector<double> h);

/// Neumann cosines on (0,2pi*a) x (0,2pi*b); orthonormal after the
/// normalization constants c_0 = 1, c_k = sqrt(2).
SystemPtr make_neumann_rect(double a, double b);

/// Non-self-adjoint interval system on (0,1): u_0 = x, u_{2k-1} = sin(2pi k x),
/// u_{2k} = x cos(2pi k x), with explicit biorthogonal partners v. The even
/// elements are associated functions (eigen-relation holds with a coupling
/// term); they share the eigenvalue (2pi k)^2.
SystemPtr make_ionkin();

/// Product sine family on (-pi,pi) x (-pi/2,pi/2) with half-integer
/// frequencies in x; orthonormal with normalization factor 2.
SystemPtr make_moebius();

/// Construct a built-in system by its config name: torus, h_twisted,
/// h_twisted_real, neumann_rect, ionkin, moebius. Unused parameters are
/// ignored by families that do not take them.
SystemPtr make_system(const std::string& name, int d,
                      const std::vector<double>& h, double a, double b);

/// The first `count` admissible indices ordered by (bracket, lexicographic
/// coords). Deterministic; grows its search window until the result is
/// provably complete.
std::vector<EigenData> enumerate_indices(const BiorthogonalSystem& system,
                                         std::size_t count);

/// All admissible indices with bracket strictly below `max_bracket`, in
/// enumeration order.
std::vector<EigenData> enumerate_up_to_bracket(const BiorthogonalSystem& system,
                                               double max_bracket);

/// max_{xi,eta <= count} |(u_xi, v_eta) - delta| under the given quadrature.
double verify_biorthogonality(const BiorthogonalSystem& system,
                              std::size_t count, const QuadratureRule& quad);

/// Largest deviation of the quadrature L^2 norms of u_xi and v_xi from one.
/// The built-in families keep their classical scalings, which are
/// biorthogonal but not all unit-norm; this reports the actual deviation.
struct NormalizationReport {
    double max_u_deviation = 0.0;
    double max_v_deviation = 0.0;
    std::vector<double> u_norms;
    std::vector<double> v_norms;
};
NormalizationReport normalization_report(const BiorthogonalSystem& system,
                                         std::size_t count,
                                         const QuadratureRule& quad);

/// Two-sided frame bounds over the truncation: square roots of the extreme
/// eigenvalues of the Gram matrix of {v_xi} (k1, K1) and of {u_xi} (k2, K2).
/// These certify norm equivalence only for functions spanned by the
/// truncation; the report flags them as truncation-level estimates.
struct RieszEstimate {
    double k1 = 0.0;
    double K1 = 0.0;
    double k2 = 0.0;
    double K2 = 0.0;
    bool truncation_level = true;
};
RieszEstimate estimate_riesz_constants(const BiorthogonalSystem& system,
                                       std::size_t count,
                                       const QuadratureRule& quad);

/// Partial sums of bracket^(-s) along the enumeration at the given counts.
std::vector<double> summability_partial_sums(const BiorthogonalSystem& system,
                                             double s,
                                             const std::vector<std::size_t>& counts);

/// Checks sup |u_xi| <= C_b * bracket^mu0 on a sample grid for the first
/// `count` indices; returns the largest ratio sup|u| / bracket^mu0 observed.
double growth_check(const BiorthogonalSystem& system, std::size_t count,
                    int grid_per_dim);

}  // namespace nhs
