// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/assoc_matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nhs/errors.hpp"
#include "nhs/parallel.hpp"

namespace nhs {

AssociatedMatrix build_matrix(const TransformPlan& plan, const Symbol& sigma,
                              int threads) {
    const auto Q = static_cast<Eigen::Index>(plan.node_count());
    const auto N = static_cast<Eigen::Index>(plan.mode_count());

    // Column x of the integrand table is sigma(., xi_x) u_x on the nodes;
    // the matrix is then one analysis product against the v family.
    Eigen::MatrixXcd integrand(Q, N);
    parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t k) {
        const auto col = static_cast<Eigen::Index>(k);
        const EigenData& mode = plan.modes[k];
        if (!sigma.depends_on_x()) {
            integrand.col(col) = plan.u_nodes.col(col) * sigma.xi_part(mode);
            return;
        }
        if (sigma.kind() == SymbolKind::Separable) {
            const Complex alpha = sigma.xi_part(mode);
            for (Eigen::Index q = 0; q < Q; ++q) {
                const Point& x = plan.quad->nodes[static_cast<std::size_t>(q)];
                integrand(q, col) =
                    (alpha + Complex(sigma.x_part(x), 0.0)) *
                    plan.u_nodes(q, col);
            }
            return;
        }
        for (Eigen::Index q = 0; q < Q; ++q) {
            const Point& x = plan.quad->nodes[static_cast<std::size_t>(q)];
            integrand(q, col) = sigma.value(x, mode) * plan.u_nodes(q, col);
        }
    });

    AssociatedMatrix m;
    m.order = plan.modes;
    m.symbol_label = sigma.label();
    m.entries = plan.v_nodes.adjoint() * plan.weights.asDiagonal() * integrand;
    return m;
}

AssociatedMatrix build_matrix_default(SystemPtr system, const Symbol& sigma,
                                      std::size_t count, int quad_order,
                                      int threads) {
    // Doubled frequency budget: entries integrate u_x against conj(v_g), a
    // product oscillating at twice the single-mode worst frequency.
    TransformPlan plan =
        make_plan(std::move(system), count, quad_order, 2, threads);
    return build_matrix(plan, sigma, threads);
}

double finite_section_norm(const AssociatedMatrix& M, std::size_t n) {
    if (n == 0) return 0.0;
    if (n > M.size())
        throw PreconditionError("finite section exceeds the truncation size");
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M.entries.topLeftCorner(nn, nn));
    return svd.singularValues()[0];
}

namespace {

std::vector<std::size_t> default_sections(std::size_t n) {
    std::vector<std::size_t> sizes;
    if (n <= 128) {
        for (std::size_t k = 1; k <= n; ++k) sizes.push_back(k);
        return sizes;
    }
    for (std::size_t k = 1; k <= 32; ++k) sizes.push_back(k);
    std::size_t k = 32;
    while (k < n) {
        k = std::max(k + 1, static_cast<std::size_t>(
                                std::floor(static_cast<double>(k) * 1.2)));
        sizes.push_back(std::min(k, n));
    }
    if (sizes.back() != n) sizes.push_back(n);
    return sizes;
}

void check_monotone(const std::vector<double>& values, const char* what) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double drop = values[i - 1] - values[i];
        if (drop > 1e-10 * std::max(1.0, values[i - 1]))
            throw NumericalError(
                std::string("finite-section norms of ") + what +
                " decreased between principal sections; principal-section "
                "norms are nondecreasing, so this is a numerical fault");
    }
}

}  // namespace

CroneReport crone_report(const AssociatedMatrix& M,
                         const std::vector<std::size_t>& section_sizes,
                         const std::optional<RieszEstimate>& riesz) {
    if (M.size() == 0)
        throw PreconditionError("crone_report: empty matrix");
    CroneReport report;
    report.section_sizes =
        section_sizes.empty() ? default_sections(M.size()) : section_sizes;
    for (std::size_t n : report.section_sizes)
        if (n == 0 || n > M.size())
            throw PreconditionError("crone_report: section size out of range");
    if (!std::is_sorted(report.section_sizes.begin(),
                        report.section_sizes.end()))
        throw PreconditionError("crone_report: section sizes must ascend");

    const Eigen::MatrixXcd product = M.entries.adjoint() * M.entries;
    report.norms_m.reserve(report.section_sizes.size());
    report.norms_mstar_m.reserve(report.section_sizes.size());
    for (std::size_t n : report.section_sizes) {
        const auto nn = static_cast<Eigen::Index>(n);
        report.norms_m.push_back(finite_section_norm(M, n));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
            product.topLeftCorner(nn, nn), Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success)
            throw NumericalError("crone_report: section eigensolve failed");
        report.norms_mstar_m.push_back(
            std::max(eig.eigenvalues().maxCoeff(), 0.0));
    }

    check_monotone(report.norms_m, "the matrix");
    check_monotone(report.norms_mstar_m, "the normal product");
    report.monotone_m = true;
    report.monotone_mstar_m = true;
    report.lower_bound = report.norms_m.back();

    if (riesz) {
        if (!(riesz->k1 > 0.0))
            throw PreconditionError(
                "crone_report: Riesz lower constant must be positive for the "
                "sandwich");
        const double root = std::sqrt(report.norms_mstar_m.back());
        report.sandwich_lower = (riesz->k1 / riesz->K1) * root;
        report.sandwich_upper = (riesz->K1 / riesz->k1) * root;
    }
    return report;
}

DFSplit df_split(const AssociatedMatrix& M) {
    const auto N = static_cast<Eigen::Index>(M.size());
    if (N == 0) throw PreconditionError("df_split: empty matrix");
    DFSplit split;
    split.D = M.entries.diagonal();
    split.F = M.entries;
    split.F.diagonal().setZero();

    split.min_abs_diagonal = split.D.cwiseAbs().minCoeff();
    for (Eigen::Index k = 0; k < N; ++k) {
        if (split.D[k] == Complex(0.0, 0.0))
            throw PreconditionError(
                "df_split: diagonal entry at index " +
                format_index(M.order[static_cast<std::size_t>(k)].index) +
                " is exactly zero; the relative split is undefined");
    }

    double a1 = 0.0, a2 = 0.0;
    for (Eigen::Index x = 0; x < N; ++x) {
        double col = 0.0;
        for (Eigen::Index g = 0; g < N; ++g)
            if (g != x) col += std::abs(M.entries(g, x));
        a1 = std::max(a1, col / std::abs(M.entries(x, x)));
    }
    for (Eigen::Index g = 0; g < N; ++g) {
        double row = 0.0;
        for (Eigen::Index x = 0; x < N; ++x)
            if (x != g) row += std::abs(M.entries(g, x));
        a2 = std::max(a2, row / std::abs(M.entries(g, g)));
    }
    split.a1 = a1;
    split.a2 = a2;
    split.contraction = std::sqrt(a1 * a2);
    split.contraction_below_one = split.contraction < 1.0;
    return split;
}

}  // namespace nhs
