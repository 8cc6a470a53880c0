// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "nhs/assoc_matrix.hpp"

namespace nhs {

/// Column disc of the associated matrix: center the diagonal entry, radius
/// the in-truncation off-diagonal column sum. radius_truncated records that
/// the tail beyond the truncation is not included.
struct GershgorinDisc {
    Index index;
    Complex center{};
    double radius = 0.0;
    bool radius_truncated = true;
};

std::vector<GershgorinDisc> gershgorin_discs(const AssociatedMatrix& M);

/// Per-column radius increase when the same symbol is assembled at a larger
/// truncation (rows beyond the small truncation contribute); quantifies the
/// truncation error of the reported radii for the shared columns.
std::vector<double> gershgorin_radius_delta(const AssociatedMatrix& small,
                                            const AssociatedMatrix& large);

struct EigenvaluePoint {
    Complex value{};
    double residual = 0.0;  // ||Mw - lambda w|| / ||w||
};

/// All eigenvalues of the leading n-section by a dense solver, sorted by
/// (real, imaginary) for reproducibility, each with its residual.
std::vector<EigenvaluePoint> truncated_eigenvalues(const AssociatedMatrix& M,
                                                   std::size_t n);

struct ContainmentResult {
    std::vector<bool> contained;        // per eigenvalue
    std::vector<int> nearest_disc;      // disc index per eigenvalue
    std::vector<double> distances;      // |lambda - center| - radius (<= 0 inside)
    double max_violation = 0.0;         // max positive distance, 0 when all inside
    double tolerance = 1e-8;
};

struct ComponentCount {
    std::vector<int> disc_ids;
    std::size_t disc_count = 0;
    std::size_t eigenvalue_count = 0;
    bool count_matches = false;
};

struct InvertibilityReport {
    double inf_abs_diagonal = 0.0;
    Index argmin_index;
    double a1 = 0.0;
    double a2 = 0.0;
    double contraction = 0.0;
    bool condition_diag = false;     // inf |a_xi| > 0
    bool condition_a1 = false;       // a1 < 1
    bool condition_a2 = false;       // a2 < 1
    bool satisfied = false;
    bool compact_inverse_flag = false;  // diagonal magnitudes nondecreasing
                                        // and large at the truncation edge
    double solve_residual = -1.0;       // direct section solve check, -1 if skipped
    std::string note;
};

/// Combined disc / eigenvalue / component / invertibility report of one
/// section. Everything here is section-level evidence about the truncated
/// matrix, labelled as such in serialized output.
struct SpectrumReport {
    std::vector<GershgorinDisc> discs;
    std::vector<EigenvaluePoint> eigenvalues;
    ContainmentResult containment;
    std::vector<ComponentCount> components;
    InvertibilityReport invertibility;
};

/// Containment of the section eigenvalues in the disc union. Classical for
/// the section itself, so violations beyond the absolute tolerance are
/// software faults; they are reported, not thrown.
ContainmentResult containment_check(const std::vector<GershgorinDisc>& discs,
                                    const std::vector<EigenvaluePoint>& eigs,
                                    double tolerance = 1e-8);

/// Groups discs into connected components of their union (centers within
/// the sum of radii touch) and counts the eigenvalues whose nearest disc
/// lies in each component.
std::vector<ComponentCount> component_multiplicity(
    const std::vector<GershgorinDisc>& discs,
    const std::vector<EigenvaluePoint>& eigs, double tolerance = 1e-8);

/// Diagonal-dominance invertibility conditions: strictly nonzero diagonal
/// infimum and both relative off-diagonal mass norms below one. When
/// satisfied, a direct solve of the section against a deterministic right
/// hand side is performed and its residual reported. compact_inverse_ratio
/// controls the heuristic edge threshold for the compact-inverse flag.
InvertibilityReport invertibility_check(const AssociatedMatrix& M,
                                        double compact_inverse_ratio = 100.0);

/// Assembles the full section report (discs, eigensolve, containment,
/// components, invertibility).
SpectrumReport spectrum_report(const AssociatedMatrix& M);

/// Shifts the symbol by -lambda, reassembles the matrix on the same plan
/// and runs invertibility_check. A satisfied verdict indicates lambda lies
/// in the numerically-indicated resolvent set at this truncation.
InvertibilityReport resolvent_membership(const TransformPlan& plan,
                                         const Symbol& sigma, Complex lambda,
                                         int threads = 1);

}  // namespace nhs
