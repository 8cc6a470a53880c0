// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "nhs/errors.hpp"

namespace nhs {

std::vector<GershgorinDisc> gershgorin_discs(const AssociatedMatrix& M) {
    const auto N = static_cast<Eigen::Index>(M.size());
    std::vector<GershgorinDisc> discs;
    discs.reserve(M.size());
    for (Eigen::Index x = 0; x < N; ++x) {
        GershgorinDisc d;
        d.index = M.order[static_cast<std::size_t>(x)].index;
        d.center = M.entries(x, x);
        double r = 0.0;
        for (Eigen::Index g = 0; g < N; ++g)
            if (g != x) r += std::abs(M.entries(g, x));
        d.radius = r;
        d.radius_truncated = true;
        discs.push_back(std::move(d));
    }
    return discs;
}

std::vector<double> gershgorin_radius_delta(const AssociatedMatrix& small,
                                            const AssociatedMatrix& large) {
    const auto n = static_cast<Eigen::Index>(small.size());
    const auto m = static_cast<Eigen::Index>(large.size());
    if (m < n)
        throw PreconditionError(
            "gershgorin_radius_delta: the second matrix must be the larger "
            "truncation");
    for (Eigen::Index k = 0; k < n; ++k)
        if (small.order[static_cast<std::size_t>(k)].index !=
            large.order[static_cast<std::size_t>(k)].index)
            throw PreconditionError(
                "gershgorin_radius_delta: truncations do not share their "
                "leading enumeration");
    std::vector<double> delta;
    delta.reserve(small.size());
    for (Eigen::Index x = 0; x < n; ++x) {
        double r_small = 0.0;
        for (Eigen::Index g = 0; g < n; ++g)
            if (g != x) r_small += std::abs(small.entries(g, x));
        double r_large = 0.0;
        for (Eigen::Index g = 0; g < m; ++g)
            if (g != x) r_large += std::abs(large.entries(g, x));
        delta.push_back(r_large - r_small);
    }
    return delta;
}

std::vector<EigenvaluePoint> truncated_eigenvalues(const AssociatedMatrix& M,
                                                   std::size_t n) {
    if (n == 0 || n > M.size())
        throw PreconditionError("truncated_eigenvalues: section out of range");
    const auto nn = static_cast<Eigen::Index>(n);
    const Eigen::MatrixXcd section = M.entries.topLeftCorner(nn, nn);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(section, true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalue solver failed to converge on the " +
                             std::to_string(n) + "-section");
    std::vector<EigenvaluePoint> points;
    points.reserve(n);
    for (Eigen::Index k = 0; k < nn; ++k) {
        EigenvaluePoint p;
        p.value = solver.eigenvalues()[k];
        const Eigen::VectorXcd w = solver.eigenvectors().col(k);
        const double wnorm = w.norm();
        p.residual = wnorm > 0.0
                         ? (section * w - p.value * w).norm() / wnorm
                         : 0.0;
        points.push_back(p);
    }
    std::sort(points.begin(), points.end(),
              [](const EigenvaluePoint& a, const EigenvaluePoint& b) {
                  if (a.value.real() != b.value.real())
                      return a.value.real() < b.value.real();
                  return a.value.imag() < b.value.imag();
              });
    return points;
}

ContainmentResult containment_check(const std::vector<GershgorinDisc>& discs,
                                    const std::vector<EigenvaluePoint>& eigs,
                                    double tolerance) {
    if (discs.empty())
        throw PreconditionError("containment_check: no discs");
    ContainmentResult result;
    result.tolerance = tolerance;
    result.contained.reserve(eigs.size());
    result.nearest_disc.reserve(eigs.size());
    result.distances.reserve(eigs.size());
    for (const EigenvaluePoint& e : eigs) {
        double best = std::numeric_limits<double>::infinity();
        int best_disc = -1;
        for (std::size_t d = 0; d < discs.size(); ++d) {
            const double dist =
                std::abs(e.value - discs[d].center) - discs[d].radius;
            if (dist < best) {
                best = dist;
                best_disc = static_cast<int>(d);
            }
        }
        result.distances.push_back(best);
        result.nearest_disc.push_back(best_disc);
        result.contained.push_back(best <= tolerance);
        if (best > 0.0)
            result.max_violation = std::max(result.max_violation, best);
    }
    return result;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(
                    parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] =
            std::min(a, b);
    }
};

}  // namespace

std::vector<ComponentCount> component_multiplicity(
    const std::vector<GershgorinDisc>& discs,
    const std::vector<EigenvaluePoint>& eigs, double tolerance) {
    const std::size_t n = discs.size();
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = std::abs(discs[i].center - discs[j].center);
            if (gap <= discs[i].radius + discs[j].radius + tolerance)
                uf.unite(static_cast<int>(i), static_cast<int>(j));
        }

    const ContainmentResult containment =
        containment_check(discs, eigs, tolerance);

    // Components keyed by their root, listed by smallest member disc.
    std::vector<ComponentCount> components;
    std::vector<int> root_to_component(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const int root = uf.find(static_cast<int>(i));
        if (root_to_component[static_cast<std::size_t>(root)] < 0) {
            root_to_component[static_cast<std::size_t>(root)] =
                static_cast<int>(components.size());
            components.emplace_back();
        }
        auto& comp = components[static_cast<std::size_t>(
            root_to_component[static_cast<std::size_t>(root)])];
        comp.disc_ids.push_back(static_cast<int>(i));
        comp.disc_count += 1;
    }
    for (std::size_t e = 0; e < eigs.size(); ++e) {
        const int disc = containment.nearest_disc[e];
        if (disc < 0) continue;
        const int root = uf.find(disc);
        auto& comp = components[static_cast<std::size_t>(
            root_to_component[static_cast<std::size_t>(root)])];
        comp.eigenvalue_count += 1;
    }
    for (auto& comp : components)
        comp.count_matches = comp.disc_count == comp.eigenvalue_count;
    return components;
}

InvertibilityReport invertibility_check(const AssociatedMatrix& M,
                                        double compact_inverse_ratio) {
    const auto N = static_cast<Eigen::Index>(M.size());
    if (N == 0) throw PreconditionError("invertibility_check: empty matrix");
    InvertibilityReport report;

    Eigen::Index argmin = 0;
    double inf_abs = std::numeric_limits<double>::infinity();
    bool zero_diag = false;
    for (Eigen::Index k = 0; k < N; ++k) {
        const double mag = std::abs(M.entries(k, k));
        if (mag < inf_abs) {
            inf_abs = mag;
            argmin = k;
        }
        if (M.entries(k, k) == Complex(0.0, 0.0)) zero_diag = true;
    }
    report.inf_abs_diagonal = inf_abs;
    report.argmin_index = M.order[static_cast<std::size_t>(argmin)].index;
    report.condition_diag = inf_abs > 0.0;

    if (zero_diag) {
        report.a1 = std::numeric_limits<double>::infinity();
        report.a2 = std::numeric_limits<double>::infinity();
        report.contraction = std::numeric_limits<double>::infinity();
        report.note = "diagonal vanishes at index " +
                      format_index(report.argmin_index) +
                      "; the relative off-diagonal masses are undefined";
        return report;
    }

    const DFSplit split = df_split(M);
    report.a1 = split.a1;
    report.a2 = split.a2;
    report.contraction = split.contraction;
    report.condition_a1 = split.a1 < 1.0;
    report.condition_a2 = split.a2 < 1.0;
    report.satisfied =
        report.condition_diag && report.condition_a1 && report.condition_a2;

    // Compact-inverse indicator: diagonal magnitudes climb along the
    // enumeration and the truncation edge dwarfs the start.
    const Eigen::VectorXd mags = split.D.cwiseAbs();
    bool nondecreasing = true;
    for (Eigen::Index k = 1; k < N; ++k)
        if (mags[k] < mags[k - 1] * (1.0 - 1e-9)) nondecreasing = false;
    report.compact_inverse_flag =
        nondecreasing &&
        mags[N - 1] >= compact_inverse_ratio * std::max(mags[0], 1e-12);

    if (report.satisfied) {
        const Eigen::VectorXcd rhs = Eigen::VectorXcd::Constant(
            N, Complex(1.0 / std::sqrt(static_cast<double>(N)), 0.0));
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M.entries);
        const Eigen::VectorXcd sol = lu.solve(rhs);
        report.solve_residual = (M.entries * sol - rhs).norm() / rhs.norm();
        report.note =
            "diagonal dominance conditions hold at this truncation; solve "
            "residual reported";
    } else if (report.note.empty()) {
        report.note =
            "diagonal dominance conditions fail at this truncation; no "
            "conclusion about invertibility";
    }
    return report;
}

SpectrumReport spectrum_report(const AssociatedMatrix& M) {
    SpectrumReport report;
    report.discs = gershgorin_discs(M);
    report.eigenvalues = truncated_eigenvalues(M, M.size());
    report.containment = containment_check(report.discs, report.eigenvalues);
    report.components =
        component_multiplicity(report.discs, report.eigenvalues);
    report.invertibility = invertibility_check(M);
    return report;
}

InvertibilityReport resolvent_membership(const TransformPlan& plan,
                                         const Symbol& sigma, Complex lambda,
                                         int threads) {
    const AssociatedMatrix shifted =
        build_matrix(plan, sigma.shifted(lambda), threads);
    InvertibilityReport report = invertibility_check(shifted);
    report.note = "shifted-symbol section at lambda = (" +
                  std::to_string(lambda.real()) + ", " +
                  std::to_string(lambda.imag()) + "i): " + report.note;
    return report;
}

}  // namespace nhs
