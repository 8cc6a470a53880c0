// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nhs/basis.hpp"
#include "nhs/errors.hpp"
#include "nhs/quadrature.hpp"

namespace nhs {

namespace {

struct NodeMatrices {
    Eigen::MatrixXcd U;  // Q x N
    Eigen::MatrixXcd V;  // Q x N
    Eigen::VectorXd w;   // Q
};

NodeMatrices evaluate_on_nodes(const BiorthogonalSystem& system,
                               std::span<const EigenData> modes,
                               const QuadratureRule& quad) {
    const auto Q = static_cast<Eigen::Index>(quad.size());
    const auto N = static_cast<Eigen::Index>(modes.size());
    NodeMatrices m;
    m.U.resize(Q, N);
    m.V.resize(Q, N);
    m.w.resize(Q);
    for (Eigen::Index q = 0; q < Q; ++q)
        m.w[q] = quad.weights[static_cast<std::size_t>(q)];
    for (Eigen::Index k = 0; k < N; ++k) {
        const Index& xi = modes[static_cast<std::size_t>(k)].index;
        for (Eigen::Index q = 0; q < Q; ++q) {
            const Point& x = quad.nodes[static_cast<std::size_t>(q)];
            m.U(q, k) = system.u(xi, x);
            m.V(q, k) = system.v(xi, x);
        }
    }
    return m;
}

}  // namespace

double verify_biorthogonality(const BiorthogonalSystem& system,
                              std::size_t count, const QuadratureRule& quad) {
    const auto modes = enumerate_indices(system, count);
    const auto m = evaluate_on_nodes(system, modes, quad);
    const Eigen::MatrixXcd gram = m.V.adjoint() * m.w.asDiagonal() * m.U;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < gram.rows(); ++r)
        for (Eigen::Index c = 0; c < gram.cols(); ++c) {
            const Complex target = r == c ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            worst = std::max(worst, std::abs(gram(r, c) - target));
        }
    return worst;
}

NormalizationReport normalization_report(const BiorthogonalSystem& system,
                                         std::size_t count,
                                         const QuadratureRule& quad) {
    const auto modes = enumerate_indices(system, count);
    const auto m = evaluate_on_nodes(system, modes, quad);
    NormalizationReport report;
    report.u_norms.reserve(modes.size());
    report.v_norms.reserve(modes.size());
    for (Eigen::Index k = 0; k < m.U.cols(); ++k) {
        const double nu = std::sqrt(std::max(
            0.0, (m.U.col(k).cwiseAbs2().cwiseProduct(m.w)).sum()));
        const double nv = std::sqrt(std::max(
            0.0, (m.V.col(k).cwiseAbs2().cwiseProduct(m.w)).sum()));
        report.u_norms.push_back(nu);
        report.v_norms.push_back(nv);
        report.max_u_deviation = std::max(report.max_u_deviation,
                                          std::abs(nu - 1.0));
        report.max_v_deviation = std::max(report.max_v_deviation,
                                          std::abs(nv - 1.0));
    }
    return report;
}

namespace {

/// Square roots of the extreme eigenvalues of a Gram matrix. The matrix is
/// positive semidefinite up to quadrature error; eigenvalues below the
/// negative of that tolerance indicate a broken rule.
std::pair<double, double> gram_bounds(const Eigen::MatrixXcd& gram,
                                      const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        (gram + gram.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError(std::string("Gram eigensolve failed for ") + what);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    if (lo < -1e-10 * std::max(1.0, hi))
        throw NumericalError(std::string("Gram matrix of ") + what +
                             " is not positive semidefinite");
    return {std::sqrt(std::max(lo, 0.0)), std::sqrt(std::max(hi, 0.0))};
}

}  // namespace

RieszEstimate estimate_riesz_constants(const BiorthogonalSystem& system,
                                       std::size_t count,
                                       const QuadratureRule& quad) {
    const auto modes = enumerate_indices(system, count);
    const auto m = evaluate_on_nodes(system, modes, quad);
    const Eigen::MatrixXcd gram_v = m.V.adjoint() * m.w.asDiagonal() * m.V;
    const Eigen::MatrixXcd gram_u = m.U.adjoint() * m.w.asDiagonal() * m.U;
    RieszEstimate est;
    std::tie(est.k1, est.K1) = gram_bounds(gram_v, "the v family");
    std::tie(est.k2, est.K2) = gram_bounds(gram_u, "the u family");
    est.truncation_level = true;
    return est;
}

double growth_check(const BiorthogonalSystem& system, std::size_t count,
                    int grid_per_dim) {
    const auto modes = enumerate_indices(system, count);
    double worst = 0.0;
    for (const EigenData& mode : modes) {
        auto abs_u = [&](const Point& x) {
            return std::abs(system.u(mode.index, x));
        };
        const double sup = estimate_sup_abs(abs_u, system.domain(), grid_per_dim);
        const double weight = std::pow(mode.bracket, system.growth_exponent());
        worst = std::max(worst, sup / weight);
    }
    return worst;
}

}  // namespace nhs
