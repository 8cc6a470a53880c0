// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "nhs/basis.hpp"
#include "nhs/quantize.hpp"
#include "nhs/symbol.hpp"
#include "nhs/transform.hpp"

namespace nhs {

/// Dense truncation of the operator's coordinate matrix: rows and columns
/// are labelled by the enumeration, and
///   entries(g, x) = (T_sigma u_x, v_g) in L^2(dmu),
/// assembled by quadrature. Column x collects the expansion of T_sigma u_x.
struct AssociatedMatrix {
    std::vector<EigenData> order;   // shared row/column labels
    Eigen::MatrixXcd entries;       // N x N
    std::string symbol_label;

    std::size_t size() const { return order.size(); }
};

/// Assembles the matrix over the plan's modes. The plan should carry a
/// doubled frequency budget (make_plan's frequency_factor = 2) so products
/// u_x * conj(v_g) stay resolved; build_matrix_default does this.
AssociatedMatrix build_matrix(const TransformPlan& plan, const Symbol& sigma,
                              int threads = 1);
AssociatedMatrix build_matrix_default(SystemPtr system, const Symbol& sigma,
                                      std::size_t count, int quad_order = 0,
                                      int threads = 1);

/// Largest singular value of the leading n x n principal section.
double finite_section_norm(const AssociatedMatrix& M, std::size_t n);

/// Finite-section norm sequences of M and of M*M (the product formed at
/// full truncation, then sectioned). Both sequences are nondecreasing for
/// principal sections; a violation beyond 1e-10 indicates a numerical fault
/// and is reported as such. Final values are lower bounds for the operator
/// norm; with Riesz estimates supplied, the two-sided sandwich
///   k1/K1 * sqrt(S) <= operator norm <= K1/k1 * sqrt(S)
/// is reported for S the last M*M section norm.
struct CroneReport {
    std::vector<std::size_t> section_sizes;
    std::vector<double> norms_m;        // ||P_n M P_n||
    std::vector<double> norms_mstar_m;  // ||P_n (M*M) P_n||
    bool monotone_m = true;
    bool monotone_mstar_m = true;
    double lower_bound = 0.0;           // final ||P_n M P_n||
    std::optional<double> sandwich_lower;
    std::optional<double> sandwich_upper;
};
CroneReport crone_report(const AssociatedMatrix& M,
                         const std::vector<std::size_t>& section_sizes = {},
                         const std::optional<RieszEstimate>& riesz = std::nullopt);

/// Diagonal / off-diagonal split with the two relative off-diagonal mass
/// norms:
///   a1 = max over columns x of sum_{g != x} |M(g,x)| / |M(x,x)|
///   a2 = max over rows g of sum_{x != g} |M(g,x)| / |M(g,g)|
/// (column and row off-diagonal mass relative to the local diagonal).
struct DFSplit {
    Eigen::VectorXcd D;         // diagonal entries
    Eigen::MatrixXcd F;         // off-diagonal part, D + F == M exactly
    double a1 = 0.0;
    double a2 = 0.0;
    double min_abs_diagonal = 0.0;
    double contraction = 0.0;   // sqrt(a1 * a2)
    bool contraction_below_one = false;
};

/// Throws PreconditionError identifying the index when a diagonal entry is
/// exactly zero (the split is undefined there).
DFSplit df_split(const AssociatedMatrix& M);

}  // namespace nhs
