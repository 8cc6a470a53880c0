// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nhs/basis.hpp"
#include "nhs/quadrature.hpp"
#include "nhs/types.hpp"

namespace nhs {

/// Which pairing produced a coefficient set: the plain transform pairs
/// against conj(v), the starred transform against conj(u). Inversion uses
/// the opposite family.
enum class CoefficientKind { Transform, StarTransform };

/// Sparse coefficient mapping over a system's enumeration; absent index
/// means zero. std::map keeps keys in deterministic lexicographic order.
struct SpectralCoefficients {
    CoefficientKind kind = CoefficientKind::Transform;
    SystemPtr system;
    std::map<Index, Complex> entries;

    Complex at(const Index& xi) const {
        auto it = entries.find(xi);
        return it == entries.end() ? Complex{0.0, 0.0} : it->second;
    }
};

/// Precomputed sampling of a truncation: the first N modes, a quadrature
/// rule resolving them, and the node-value matrices of both families.
/// Everything downstream (transforms, operator application, matrix
/// assembly) reduces to dense linear algebra against these tables.
struct TransformPlan {
    SystemPtr system;
    std::vector<EigenData> modes;   // enumeration order
    QuadPtr quad;
    Eigen::MatrixXcd u_nodes;       // Q x N, u_xi at each node
    Eigen::MatrixXcd v_nodes;       // Q x N
    Eigen::VectorXd weights;        // Q

    std::size_t mode_count() const { return modes.size(); }
    std::size_t node_count() const { return weights.size(); }
    int mode_position(const Index& xi) const;  // -1 when absent

    /// Gram matrices under the plan quadrature (computed on demand).
    const Eigen::MatrixXcd& gram_u() const;
    const Eigen::MatrixXcd& gram_v() const;

private:
    mutable std::shared_ptr<Eigen::MatrixXcd> gram_u_cache_;
    mutable std::shared_ptr<Eigen::MatrixXcd> gram_v_cache_;
};

/// Builds a plan over the first `count` modes. quad_order <= 0 selects the
/// default rule for the plan's worst resolved frequency; `frequency_factor`
/// scales the frequency budget (matrix assembly doubles it so products of
/// two modes stay resolved).
TransformPlan make_plan(SystemPtr system, std::size_t count,
                        int quad_order = 0, int frequency_factor = 1,
                        int threads = 1);

/// Plan over an explicit mode list (used by shells and diagnostics).
TransformPlan make_plan_for_modes(SystemPtr system,
                                  std::vector<EigenData> modes,
                                  int quad_order = 0,
                                  int frequency_factor = 1, int threads = 1);

GridFunction sample_on_plan(const TransformPlan& plan,
                            const std::function<Complex(const Point&)>& f);

/// f_hat(xi) = sum_q w_q f(x_q) conj(v_xi(x_q)) over the plan's modes.
SpectralCoefficients forward_transform(const TransformPlan& plan,
                                       const GridFunction& f);
/// Starred variant: pairs against conj(u).
SpectralCoefficients adjoint_transform(const TransformPlan& plan,
                                       const GridFunction& f);

/// Self-check for callable inputs: recompute on a doubled rule and report
/// the largest coefficient change. Large values indicate under-resolution.
struct CheckedTransform {
    SpectralCoefficients coefficients;
    double resolution_delta = 0.0;
};
CheckedTransform forward_transform_checked(
    const TransformPlan& plan, const std::function<Complex(const Point&)>& f);

/// Reconstruction at one point: sum of entries times u_xi (plain kind) or
/// v_xi (starred kind).
Complex inverse_transform(const SpectralCoefficients& coeffs, const Point& x);

/// Reconstruction on all plan nodes (the plan must be over the same system).
GridFunction inverse_transform_grid(const TransformPlan& plan,
                                    const SpectralCoefficients& coeffs);

/// Plain Parseval pairing sum over xi of f_hat(xi) * conj(g_hat(xi)); both
/// inputs must be plain-kind over the same system and index set. Equals the
/// L^2 inner product only for orthonormal families.
Complex parseval(const SpectralCoefficients& f_hat,
                 const SpectralCoefficients& g_hat);

/// Mixed pairing sum of f_hat(xi) * conj(g_hat_*(xi)); equals (f, g) in
/// L^2(dmu) exactly for functions spanned by the truncation, on every
/// system.
Complex parseval_mixed(const SpectralCoefficients& f_hat,
                       const SpectralCoefficients& g_hat_star);

/// Weighted little-l^p norm over the truncation. For plain-kind
/// coefficients the weights are sup-norms of the u family for p <= 2 and of
/// the v family for p > 2; starred coefficients mirror the roles. p = 2 is
/// the unweighted sum. Sup-norms are grid estimates (see estimate_sup_abs).
double lp_norm(const SpectralCoefficients& coeffs, double p,
               const BiorthogonalSystem& system, int grid_per_dim = 1024);

/// Sobolev norm sqrt(Re sum bracket^(2s) f_hat conj(f_hat_star)).
/// Flags an inconsistency when the imaginary part exceeds 1e-8 of the real
/// part; throws NumericalError when the real part is negative beyond
/// tolerance.
struct SobolevNorm {
    double value = 0.0;
    double imaginary_part = 0.0;
    bool imaginary_flag = false;
};
SobolevNorm sobolev_norm(const BiorthogonalSystem& system,
                         const SpectralCoefficients& f_hat,
                         const SpectralCoefficients& f_hat_star, double s);

/// Dense-vector helpers in plan mode order.
Eigen::VectorXcd to_dense(const TransformPlan& plan,
                          const SpectralCoefficients& coeffs);
SpectralCoefficients from_dense(const TransformPlan& plan,
                                const Eigen::VectorXcd& values,
                                CoefficientKind kind);

}  // namespace nhs
