// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/transform.hpp"

#include <algorithm>
#include <cmath>

#include "nhs/errors.hpp"
#include "nhs/parallel.hpp"

namespace nhs {

int TransformPlan::mode_position(const Index& xi) const {
    for (std::size_t k = 0; k < modes.size(); ++k)
        if (modes[k].index == xi) return static_cast<int>(k);
    return -1;
}

const Eigen::MatrixXcd& TransformPlan::gram_u() const {
    if (!gram_u_cache_)
        gram_u_cache_ = std::make_shared<Eigen::MatrixXcd>(
            u_nodes.adjoint() * weights.asDiagonal() * u_nodes);
    return *gram_u_cache_;
}

const Eigen::MatrixXcd& TransformPlan::gram_v() const {
    if (!gram_v_cache_)
        gram_v_cache_ = std::make_shared<Eigen::MatrixXcd>(
            v_nodes.adjoint() * weights.asDiagonal() * v_nodes);
    return *gram_v_cache_;
}

TransformPlan make_plan_for_modes(SystemPtr system,
                                  std::vector<EigenData> modes,
                                  int quad_order, int frequency_factor,
                                  int threads) {
    if (!system) throw PreconditionError("make_plan: null system");
    if (modes.empty()) throw PreconditionError("make_plan: empty mode list");
    if (frequency_factor < 1)
        throw PreconditionError("make_plan: frequency factor must be >= 1");

    TransformPlan plan;
    plan.system = system;
    plan.modes = std::move(modes);
    if (quad_order <= 0) {
        const long freq = max_resolution_frequency(*system, plan.modes);
        quad_order = default_quad_order(freq * frequency_factor);
    }
    plan.quad = build_quadrature(system->domain(), quad_order);

    const auto Q = static_cast<Eigen::Index>(plan.quad->size());
    const auto N = static_cast<Eigen::Index>(plan.modes.size());
    plan.u_nodes.resize(Q, N);
    plan.v_nodes.resize(Q, N);
    plan.weights.resize(Q);
    for (Eigen::Index q = 0; q < Q; ++q)
        plan.weights[q] = plan.quad->weights[static_cast<std::size_t>(q)];

    const auto& quad = *plan.quad;
    parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t k) {
        const Index& xi = plan.modes[k].index;
        const auto col = static_cast<Eigen::Index>(k);
        for (Eigen::Index q = 0; q < Q; ++q) {
            const Point& x = quad.nodes[static_cast<std::size_t>(q)];
            plan.u_nodes(q, col) = system->u(xi, x);
            plan.v_nodes(q, col) = system->v(xi, x);
        }
    });
    return plan;
}

TransformPlan make_plan(SystemPtr system, std::size_t count, int quad_order,
                        int frequency_factor, int threads) {
    if (!system) throw PreconditionError("make_plan: null system");
    auto modes = enumerate_indices(*system, count);
    return make_plan_for_modes(std::move(system), std::move(modes), quad_order,
                               frequency_factor, threads);
}

GridFunction sample_on_plan(const TransformPlan& plan,
                            const std::function<Complex(const Point&)>& f) {
    return sample(plan.quad, f);
}

namespace {

void require_plan_grid(const TransformPlan& plan, const GridFunction& f,
                       const char* op) {
    if (!f.rule || f.rule->size() != plan.node_count() ||
        static_cast<std::size_t>(f.values.size()) != plan.node_count())
        throw PreconditionError(std::string(op) +
                                ": grid function does not match the plan's "
                                "quadrature rule");
}

SpectralCoefficients analyze(const TransformPlan& plan, const GridFunction& f,
                             const Eigen::MatrixXcd& family,
                             CoefficientKind kind) {
    const Eigen::VectorXcd weighted =
        plan.weights.asDiagonal() * f.values;
    const Eigen::VectorXcd dense = family.adjoint() * weighted;
    return from_dense(plan, dense, kind);
}

}  // namespace

SpectralCoefficients forward_transform(const TransformPlan& plan,
                                       const GridFunction& f) {
    require_plan_grid(plan, f, "forward_transform");
    return analyze(plan, f, plan.v_nodes, CoefficientKind::Transform);
}

SpectralCoefficients adjoint_transform(const TransformPlan& plan,
                                       const GridFunction& f) {
    require_plan_grid(plan, f, "adjoint_transform");
    return analyze(plan, f, plan.u_nodes, CoefficientKind::StarTransform);
}

CheckedTransform forward_transform_checked(
    const TransformPlan& plan, const std::function<Complex(const Point&)>& f) {
    CheckedTransform out;
    out.coefficients = forward_transform(plan, sample_on_plan(plan, f));
    TransformPlan doubled = make_plan_for_modes(
        plan.system, plan.modes, 2 * plan.quad->order_per_dim, 1, 1);
    const SpectralCoefficients refined =
        forward_transform(doubled, sample_on_plan(doubled, f));
    double delta = 0.0;
    for (const auto& [xi, c] : out.coefficients.entries)
        delta = std::max(delta, std::abs(c - refined.at(xi)));
    out.resolution_delta = delta;
    return out;
}

Complex inverse_transform(const SpectralCoefficients& coeffs, const Point& x) {
    if (!coeffs.system)
        throw PreconditionError("inverse_transform: coefficients carry no system");
    const BiorthogonalSystem& sys = *coeffs.system;
    Complex acc = 0.0;
    for (const auto& [xi, c] : coeffs.entries) {
        const Complex basis = coeffs.kind == CoefficientKind::Transform
                                  ? sys.u(xi, x)
                                  : sys.v(xi, x);
        acc += c * basis;
    }
    return acc;
}

GridFunction inverse_transform_grid(const TransformPlan& plan,
                                    const SpectralCoefficients& coeffs) {
    if (coeffs.system.get() != plan.system.get())
        throw PreconditionError(
            "inverse_transform_grid: coefficients belong to a different system");
    const Eigen::VectorXcd dense = to_dense(plan, coeffs);
    GridFunction g;
    g.rule = plan.quad;
    g.values = coeffs.kind == CoefficientKind::Transform ? plan.u_nodes * dense
                                                         : plan.v_nodes * dense;
    return g;
}

namespace {

void require_same_keys(const SpectralCoefficients& a,
                       const SpectralCoefficients& b, const char* op) {
    if (a.system.get() != b.system.get())
        throw PreconditionError(std::string(op) +
                                ": coefficient sets belong to different systems");
    if (a.entries.size() != b.entries.size())
        throw PreconditionError(std::string(op) +
                                ": coefficient sets cover different truncations");
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    for (; ia != a.entries.end(); ++ia, ++ib)
        if (ia->first != ib->first)
            throw PreconditionError(
                std::string(op) +
                ": coefficient sets cover different index sets");
}

}  // namespace

Complex parseval(const SpectralCoefficients& f_hat,
                 const SpectralCoefficients& g_hat) {
    if (f_hat.kind != CoefficientKind::Transform ||
        g_hat.kind != CoefficientKind::Transform)
        throw PreconditionError("parseval: both inputs must be plain-kind");
    require_same_keys(f_hat, g_hat, "parseval");
    Complex acc = 0.0;
    auto ig = g_hat.entries.begin();
    for (const auto& [xi, c] : f_hat.entries) {
        acc += c * std::conj(ig->second);
        ++ig;
    }
    return acc;
}

Complex parseval_mixed(const SpectralCoefficients& f_hat,
                       const SpectralCoefficients& g_hat_star) {
    if (f_hat.kind != CoefficientKind::Transform)
        throw PreconditionError("parseval_mixed: first input must be plain-kind");
    if (g_hat_star.kind != CoefficientKind::StarTransform)
        throw PreconditionError(
            "parseval_mixed: second input must be starred-kind");
    require_same_keys(f_hat, g_hat_star, "parseval_mixed");
    Complex acc = 0.0;
    auto ig = g_hat_star.entries.begin();
    for (const auto& [xi, c] : f_hat.entries) {
        acc += c * std::conj(ig->second);
        ++ig;
    }
    return acc;
}

double lp_norm(const SpectralCoefficients& coeffs, double p,
               const BiorthogonalSystem& system, int grid_per_dim) {
    if (!(p >= 1.0))
        throw PreconditionError("lp_norm: p must be at least 1");
    double acc = 0.0;
    for (const auto& [xi, c] : coeffs.entries) {
        double weight = 1.0;
        if (p != 2.0) {
            // Plain coefficients are weighted by the reconstruction family
            // (u) for p <= 2 and the analysis family (v) for p > 2; the
            // starred kind mirrors the roles.
            const bool use_u = (coeffs.kind == CoefficientKind::Transform) ==
                               (p <= 2.0);
            auto abs_basis = [&](const Point& x) {
                return use_u ? std::abs(system.u(xi, x))
                             : std::abs(system.v(xi, x));
            };
            const double sup =
                estimate_sup_abs(abs_basis, system.domain(), grid_per_dim);
            weight = std::pow(sup, 2.0 - p);
        }
        acc += std::pow(std::abs(c), p) * weight;
    }
    return std::pow(acc, 1.0 / p);
}

SobolevNorm sobolev_norm(const BiorthogonalSystem& system,
                         const SpectralCoefficients& f_hat,
                         const SpectralCoefficients& f_hat_star, double s) {
    if (f_hat.kind != CoefficientKind::Transform ||
        f_hat_star.kind != CoefficientKind::StarTransform)
        throw PreconditionError(
            "sobolev_norm: needs a plain and a starred coefficient set");
    require_same_keys(f_hat, f_hat_star, "sobolev_norm");
    Complex acc = 0.0;
    auto istar = f_hat_star.entries.begin();
    for (const auto& [xi, c] : f_hat.entries) {
        const double bracket = system.eigen_data(xi).bracket;
        acc += std::pow(bracket, 2.0 * s) * c * std::conj(istar->second);
        ++istar;
    }
    SobolevNorm out;
    out.imaginary_part = acc.imag();
    const double re = acc.real();
    out.imaginary_flag = std::abs(acc.imag()) > 1e-8 * std::max(re, 0.0);
    if (re < -1e-10 * std::max(1.0, std::abs(acc.imag())))
        throw NumericalError(
            "sobolev_norm: pairing has a negative real part; the truncation "
            "does not support this norm");
    out.value = std::sqrt(std::max(re, 0.0));
    return out;
}

Eigen::VectorXcd to_dense(const TransformPlan& plan,
                          const SpectralCoefficients& coeffs) {
    Eigen::VectorXcd dense =
        Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(plan.mode_count()));
    for (const auto& [xi, c] : coeffs.entries) {
        const int pos = plan.mode_position(xi);
        if (pos < 0)
            throw PreconditionError("coefficient index " + format_index(xi) +
                                    " is outside the plan's truncation");
        dense[pos] = c;
    }
    return dense;
}

SpectralCoefficients from_dense(const TransformPlan& plan,
                                const Eigen::VectorXcd& values,
                                CoefficientKind kind) {
    if (static_cast<std::size_t>(values.size()) != plan.mode_count())
        throw PreconditionError("from_dense: vector length does not match plan");
    SpectralCoefficients out;
    out.kind = kind;
    out.system = plan.system;
    for (std::size_t k = 0; k < plan.mode_count(); ++k)
        out.entries.emplace(plan.modes[k].index,
                            values[static_cast<Eigen::Index>(k)]);
    return out;
}

}  // namespace nhs
