// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/quantize.hpp"

#include <algorithm>
#include <cmath>

#include "nhs/errors.hpp"
#include "nhs/quadrature.hpp"

namespace nhs {

Complex apply_operator(const Symbol& sigma, const SpectralCoefficients& f_hat,
                       const Point& x) {
    if (f_hat.kind != CoefficientKind::Transform)
        throw PreconditionError("apply_operator: coefficients must be plain-kind");
    if (!f_hat.system)
        throw PreconditionError("apply_operator: coefficients carry no system");
    const BiorthogonalSystem& sys = *f_hat.system;
    Complex acc = 0.0;
    for (const auto& [xi, c] : f_hat.entries) {
        const EigenData data = sys.eigen_data(xi);
        acc += sigma.value(x, data) * c * sys.u(xi, x);
    }
    return acc;
}

Complex apply_operator_star(const Symbol& tau,
                            const SpectralCoefficients& f_hat_star,
                            const Point& x) {
    if (f_hat_star.kind != CoefficientKind::StarTransform)
        throw PreconditionError(
            "apply_operator_star: coefficients must be starred-kind");
    if (!f_hat_star.system)
        throw PreconditionError(
            "apply_operator_star: coefficients carry no system");
    const BiorthogonalSystem& sys = *f_hat_star.system;
    Complex acc = 0.0;
    for (const auto& [xi, c] : f_hat_star.entries) {
        const EigenData data = sys.eigen_data(xi);
        acc += tau.value(x, data) * c * sys.v(xi, x);
    }
    return acc;
}

namespace {

GridFunction apply_grid_impl(const TransformPlan& plan, const Symbol& sigma,
                             const SpectralCoefficients& coeffs,
                             const Eigen::MatrixXcd& family,
                             CoefficientKind expected, const char* op) {
    if (coeffs.kind != expected)
        throw PreconditionError(std::string(op) +
                                ": coefficient kind does not match");
    if (coeffs.system.get() != plan.system.get())
        throw PreconditionError(std::string(op) +
                                ": coefficients belong to a different system");
    const Eigen::VectorXcd dense = to_dense(plan, coeffs);
    const auto N = static_cast<Eigen::Index>(plan.mode_count());
    const auto Q = static_cast<Eigen::Index>(plan.node_count());

    GridFunction out;
    out.rule = plan.quad;

    if (!sigma.depends_on_x()) {
        Eigen::VectorXcd scaled(N);
        for (Eigen::Index k = 0; k < N; ++k)
            scaled[k] =
                sigma.xi_part(plan.modes[static_cast<std::size_t>(k)]) *
                dense[k];
        out.values = family * scaled;
        return out;
    }
    if (sigma.kind() == SymbolKind::Separable) {
        Eigen::VectorXcd scaled(N);
        for (Eigen::Index k = 0; k < N; ++k)
            scaled[k] =
                sigma.xi_part(plan.modes[static_cast<std::size_t>(k)]) *
                dense[k];
        Eigen::VectorXcd pot(Q);
        for (Eigen::Index q = 0; q < Q; ++q)
            pot[q] = sigma.x_part(plan.quad->nodes[static_cast<std::size_t>(q)]);
        out.values = family * scaled +
                     pot.asDiagonal() * (family * dense);
        return out;
    }
    out.values = Eigen::VectorXcd::Zero(Q);
    for (Eigen::Index q = 0; q < Q; ++q) {
        const Point& x = plan.quad->nodes[static_cast<std::size_t>(q)];
        Complex acc = 0.0;
        for (Eigen::Index k = 0; k < N; ++k) {
            if (dense[k] == Complex(0.0, 0.0)) continue;
            acc += sigma.value(x, plan.modes[static_cast<std::size_t>(k)]) *
                   dense[k] * family(q, k);
        }
        out.values[q] = acc;
    }
    return out;
}

}  // namespace

GridFunction apply_operator_grid(const TransformPlan& plan, const Symbol& sigma,
                                 const SpectralCoefficients& f_hat) {
    return apply_grid_impl(plan, sigma, f_hat, plan.u_nodes,
                           CoefficientKind::Transform, "apply_operator_grid");
}

GridFunction apply_operator_star_grid(const TransformPlan& plan,
                                      const Symbol& tau,
                                      const SpectralCoefficients& f_hat_star) {
    return apply_grid_impl(plan, tau, f_hat_star, plan.v_nodes,
                           CoefficientKind::StarTransform,
                           "apply_operator_star_grid");
}

std::vector<double> default_shell_bounds(int shell_count) {
    if (shell_count < 3)
        throw PreconditionError("shell estimate needs at least 3 shells");
    std::vector<double> bounds;
    bounds.reserve(static_cast<std::size_t>(shell_count) + 1);
    bounds.push_back(1.0);
    for (int k = 1; k <= shell_count; ++k)
        bounds.push_back(std::ldexp(1.0, k));
    return bounds;
}

ShellEstimate gohberg_d(const BiorthogonalSystem& system, const Symbol& sigma,
                        const std::vector<double>& shell_bounds,
                        int x_grid_order, double divergence_cap) {
    if (shell_bounds.size() < 4)
        throw PreconditionError("shell estimate needs at least 3 shells");
    for (std::size_t k = 0; k + 1 < shell_bounds.size(); ++k)
        if (!(shell_bounds[k] < shell_bounds[k + 1]))
            throw PreconditionError("shell bounds must be strictly ascending");
    if (!(shell_bounds.front() >= 1.0))
        throw PreconditionError("shell bounds start below the minimum bracket 1");

    const auto all = enumerate_up_to_bracket(system, shell_bounds.back());

    ShellEstimate est;
    est.shell_bounds = shell_bounds;
    const std::size_t K = shell_bounds.size() - 1;
    est.shell_values.assign(K, 0.0);
    est.shell_populations.assign(K, 0);

    for (const EigenData& mode : all) {
        if (mode.bracket < shell_bounds.front()) continue;
        const auto it = std::upper_bound(shell_bounds.begin(),
                                         shell_bounds.end(), mode.bracket);
        const std::size_t shell =
            static_cast<std::size_t>(it - shell_bounds.begin()) - 1;
        if (shell >= K) continue;
        double value;
        if (!sigma.depends_on_x()) {
            value = std::abs(sigma.xi_part(mode));
        } else {
            auto abs_sigma = [&](const Point& x) {
                return std::abs(sigma.value(x, mode));
            };
            value = estimate_sup_abs(abs_sigma, system.domain(),
                                     std::max(2, x_grid_order /
                                                     system.domain().dim));
        }
        est.shell_values[shell] = std::max(est.shell_values[shell], value);
        est.shell_populations[shell] += 1;
    }

    for (std::size_t k = 0; k < K; ++k)
        if (est.shell_populations[k] == 0)
            throw PreconditionError(
                "bracket shell " + std::to_string(k) +
                " contains no lattice points; widen the shell bounds");

    est.d_hat = std::max(est.shell_values[K - 1], est.shell_values[K - 2]);
    est.diverging = est.shell_values[K - 1] > divergence_cap;
    est.nonincreasing_tail =
        K >= 3 && est.shell_values[K - 1] <= est.shell_values[K - 2] + 1e-12 &&
        est.shell_values[K - 2] <= est.shell_values[K - 3] + 1e-12;
    est.note =
        "shell maxima of grid-estimated sups; an indicator, not a certificate";
    return est;
}

const char* to_string(CompactnessVerdict verdict) {
    switch (verdict) {
        case CompactnessVerdict::CompactIndicated:
            return "compact-indicated";
        case CompactnessVerdict::NotCompactIndicated:
            return "not-compact-indicated";
        case CompactnessVerdict::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

CompactnessReport compactness_verdict(const BiorthogonalSystem& system,
                                      const Symbol& sigma,
                                      const std::vector<double>& shell_bounds,
                                      double tolerance, int x_grid_order) {
    CompactnessReport report;
    report.tolerance = tolerance;
    report.multiplier_criterion = !sigma.depends_on_x();
    report.evidence = gohberg_d(system, sigma, shell_bounds, x_grid_order);

    const auto& vals = report.evidence.shell_values;
    const std::size_t K = vals.size();
    bool decreasing = true;
    for (std::size_t k = 1; k < K; ++k)
        if (vals[k] > vals[k - 1] + 1e-12) decreasing = false;
    const double last = vals[K - 1];
    const double prev = vals[K - 2];
    const double tail_change =
        std::abs(last - prev) / std::max(std::abs(prev), 1e-300);

    if (decreasing && last < tolerance) {
        report.verdict = CompactnessVerdict::CompactIndicated;
        report.explanation =
            "shell maxima decrease and the last shell sits below tolerance";
    } else if (last >= tolerance && tail_change < 0.10) {
        report.verdict = CompactnessVerdict::NotCompactIndicated;
        report.explanation =
            "shell maxima stabilized above tolerance; the symbol does not "
            "vanish at infinity on this evidence";
    } else {
        report.verdict = CompactnessVerdict::Inconclusive;
        report.explanation =
            "shell evidence neither decays below tolerance nor stabilizes; "
            "extend the shells";
    }
    return report;
}

CoefficientDecay symbol_coefficient_decay(const TransformPlan& plan,
                                          const Symbol& sigma) {
    const auto N = static_cast<Eigen::Index>(plan.mode_count());
    const auto Q = static_cast<Eigen::Index>(plan.node_count());
    CoefficientDecay out;
    out.eta_order.reserve(plan.mode_count());
    for (const EigenData& m : plan.modes) out.eta_order.push_back(m.index);
    out.sup_values.assign(plan.mode_count(), 0.0);

    const Eigen::MatrixXcd analysis =
        plan.v_nodes.adjoint() * plan.weights.asDiagonal();

    if (!sigma.depends_on_x()) {
        // sigma(x, xi) is constant in x: its eta-coefficients are
        // |sigma(xi)| times the coefficients of the constant one.
        Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(Q);
        const Eigen::VectorXcd unit_hat = analysis * ones;
        double max_abs_sigma = 0.0;
        for (const EigenData& m : plan.modes)
            max_abs_sigma =
                std::max(max_abs_sigma, std::abs(sigma.xi_part(m)));
        for (Eigen::Index e = 0; e < N; ++e)
            out.sup_values[static_cast<std::size_t>(e)] =
                std::abs(unit_hat[e]) * max_abs_sigma;
    } else {
        Eigen::VectorXcd column(Q);
        for (Eigen::Index k = 0; k < N; ++k) {
            const EigenData& mode = plan.modes[static_cast<std::size_t>(k)];
            for (Eigen::Index q = 0; q < Q; ++q)
                column[q] = sigma.value(
                    plan.quad->nodes[static_cast<std::size_t>(q)], mode);
            const Eigen::VectorXcd hat = analysis * column;
            for (Eigen::Index e = 0; e < N; ++e) {
                auto& slot = out.sup_values[static_cast<std::size_t>(e)];
                slot = std::max(slot, std::abs(hat[e]));
            }
        }
    }

    out.partial_sums.resize(out.sup_values.size());
    double acc = 0.0;
    for (std::size_t e = 0; e < out.sup_values.size(); ++e) {
        acc += out.sup_values[e];
        out.partial_sums[e] = acc;
    }
    const std::size_t n = out.partial_sums.size();
    if (n >= 10) {
        const double tail_start = out.partial_sums[n - n / 10 - 1];
        const double total = out.partial_sums[n - 1];
        out.plateau = std::abs(total - tail_start) <=
                      0.01 * std::max(std::abs(total), 1e-300);
    }
    return out;
}

}  // namespace nhs
