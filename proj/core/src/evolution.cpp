// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nhs/assoc_matrix.hpp"
#include "nhs/errors.hpp"

namespace nhs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEigenvectorConditionCap = 1e8;
constexpr double kExpansionDefectCap = 1e-6;

std::vector<double> normalize_times(std::vector<double> times) {
    if (times.empty()) return {0.0};
    for (double t : times)
        if (!(t >= 0.0) || !std::isfinite(t))
            throw PreconditionError("evolution times must be finite and >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw PreconditionError("evolution times must strictly increase");
    if (times.front() > 0.0) times.insert(times.begin(), 0.0);
    return times;
}

Eigen::VectorXcd decay_factors(const Eigen::VectorXcd& chi, double t) {
    Eigen::VectorXcd out(chi.size());
    for (Eigen::Index k = 0; k < chi.size(); ++k)
        out[k] = std::exp(-chi[k] * t);
    return out;
}

HeatTrajectory solve_from_dense(const TransformPlan& plan, const Symbol& sigma,
                                const Eigen::VectorXcd& c0,
                                double expansion_residual,
                                std::vector<double> times) {
    const auto N = static_cast<Eigen::Index>(plan.mode_count());
    HeatTrajectory traj;
    traj.system = plan.system;
    traj.times = normalize_times(std::move(times));
    traj.expansion_residual = expansion_residual;

    if (!sigma.depends_on_x()) {
        traj.source = EigenSource::Multiplier;
        traj.chi.resize(N);
        for (Eigen::Index k = 0; k < N; ++k)
            traj.chi[k] = sigma.xi_part(plan.modes[static_cast<std::size_t>(k)]);
        traj.mode_vectors = Eigen::MatrixXcd::Identity(N, N);
        traj.modal_initial = c0;
        traj.eigenvector_condition = 1.0;
    } else {
        traj.source = EigenSource::Section;
        const AssociatedMatrix M =
            build_matrix_default(plan.system, sigma, plan.mode_count());
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M.entries, true);
        if (solver.info() != Eigen::Success)
            throw NumericalError("heat_solve: section eigensolve failed");
        traj.chi = solver.eigenvalues();
        traj.mode_vectors = solver.eigenvectors();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(traj.mode_vectors);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        traj.eigenvector_condition =
            smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        if (!(traj.eigenvector_condition < kEigenvectorConditionCap))
            throw NumericalError(
                "heat_solve: section eigenvector basis is ill-conditioned "
                "(condition " +
                std::to_string(traj.eigenvector_condition) + ")");
        traj.modal_initial = traj.mode_vectors.partialPivLu().solve(c0);
    }

    traj.min_re_chi = traj.chi.size() > 0 ? traj.chi.real().minCoeff() : 0.0;

    const auto T = static_cast<Eigen::Index>(traj.times.size());
    traj.modal_frames.resize(N, T);
    traj.l2_norms.reserve(traj.times.size());
    for (Eigen::Index t = 0; t < T; ++t) {
        const Eigen::VectorXcd modal =
            traj.modal_initial.cwiseProduct(
                decay_factors(traj.chi, traj.times[static_cast<std::size_t>(t)]));
        traj.modal_frames.col(t) = modal;
        const Eigen::VectorXcd basis = traj.mode_vectors * modal;
        const Eigen::VectorXcd values = plan.u_nodes * basis;
        traj.l2_norms.push_back(std::sqrt(std::max(
            0.0, (values.cwiseAbs2().cwiseProduct(plan.weights)).sum())));
    }
    return traj;
}

}  // namespace

Eigen::VectorXcd HeatTrajectory::modal_coefficients(double t) const {
    if (!(t >= 0.0))
        throw PreconditionError("evolution time must be nonnegative");
    return modal_initial.cwiseProduct(decay_factors(chi, t));
}

Eigen::VectorXcd HeatTrajectory::basis_coefficients(double t) const {
    return mode_vectors * modal_coefficients(t);
}

HeatTrajectory heat_solve(const TransformPlan& plan, const Symbol& sigma,
                          const SpectralCoefficients& f0,
                          std::vector<double> times) {
    if (f0.kind != CoefficientKind::Transform)
        throw PreconditionError("heat_solve: initial data must be plain-kind");
    if (f0.system.get() != plan.system.get())
        throw PreconditionError(
            "heat_solve: initial data belongs to a different system");
    return solve_from_dense(plan, sigma, to_dense(plan, f0), 0.0,
                            std::move(times));
}

HeatTrajectory heat_solve(const TransformPlan& plan, const Symbol& sigma,
                          const GridFunction& f0, std::vector<double> times) {
    const SpectralCoefficients coeffs = forward_transform(plan, f0);
    const Eigen::VectorXcd dense = to_dense(plan, coeffs);
    const Eigen::VectorXcd back = plan.u_nodes * dense;
    const double f_norm = std::sqrt(std::max(
        0.0, (f0.values.cwiseAbs2().cwiseProduct(plan.weights)).sum()));
    const double defect = std::sqrt(std::max(
        0.0,
        ((f0.values - back).cwiseAbs2().cwiseProduct(plan.weights)).sum()));
    const double relative = defect / std::max(f_norm, 1e-300);
    if (relative > kExpansionDefectCap)
        throw PreconditionError(
            "heat_solve: initial data is not expandable over the truncation "
            "(relative defect " +
            std::to_string(relative) + ")");
    return solve_from_dense(plan, sigma, dense, relative, std::move(times));
}

double residual_check(const TransformPlan& plan, const HeatTrajectory& traj,
                      const Symbol& sigma, double t, double dt) {
    if (traj.system.get() != plan.system.get() ||
        static_cast<std::size_t>(traj.mode_vectors.rows()) !=
            plan.mode_count())
        throw PreconditionError(
            "residual_check: trajectory does not match the plan");
    if (!(dt > 0.0))
        throw PreconditionError("residual_check: dt must be positive");
    if (t - dt < 0.0)
        throw PreconditionError(
            "residual_check: need t - dt >= 0 for the central difference");

    const Eigen::VectorXcd c_plus = traj.basis_coefficients(t + dt);
    const Eigen::VectorXcd c_minus = traj.basis_coefficients(t - dt);
    const Eigen::VectorXcd c_t = traj.basis_coefficients(t);

    const Eigen::VectorXcd dfdt =
        (plan.u_nodes * (c_plus - c_minus)) / (2.0 * dt);
    const GridFunction op_f = apply_operator_grid(
        plan, sigma, from_dense(plan, c_t, CoefficientKind::Transform));
    const Eigen::VectorXcd resid = dfdt + op_f.values;
    return std::sqrt(std::max(
        0.0, (resid.cwiseAbs2().cwiseProduct(plan.weights)).sum()));
}

StabilityReport sobolev_stability(const TransformPlan& plan,
                                  const HeatTrajectory& traj, double s,
                                  const RieszEstimate& riesz) {
    if (traj.system.get() != plan.system.get())
        throw PreconditionError(
            "sobolev_stability: trajectory does not match the plan");
    if (!(riesz.k1 > 0.0))
        throw PreconditionError(
            "sobolev_stability: Riesz lower constant must be positive");

    StabilityReport report;
    report.s = s;
    report.times = traj.times;
    report.min_re_chi = traj.min_re_chi;
    report.riesz_factor = (riesz.K1 / riesz.k1) * (riesz.K1 / riesz.k1);

    const Eigen::MatrixXcd& gram_u = plan.gram_u();
    std::vector<double> norms;
    norms.reserve(traj.times.size());
    for (double t : traj.times) {
        const Eigen::VectorXcd c = traj.basis_coefficients(t);
        const SpectralCoefficients f_hat =
            from_dense(plan, c, CoefficientKind::Transform);
        // Starred coefficients of the reconstruction: (f, u_eta) over the
        // truncation is the u-Gram matrix applied to the basis coefficients.
        const SpectralCoefficients f_hat_star =
            from_dense(plan, gram_u * c, CoefficientKind::StarTransform);
        norms.push_back(
            sobolev_norm(*plan.system, f_hat, f_hat_star, s).value);
    }
    report.hs_norms = norms;

    const double h0 = norms.front();
    report.bounded = true;
    report.max_ratio = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        const double growth =
            std::max(1.0, std::exp(-report.min_re_chi * report.times[i]));
        const double bound = report.riesz_factor * growth * h0 * (1.0 + 1e-8);
        const double ratio =
            bound > 0.0 ? norms[i] / bound
                        : (norms[i] > 0.0
                               ? std::numeric_limits<double>::infinity()
                               : 0.0);
        report.max_ratio = std::max(report.max_ratio, ratio);
        if (ratio > 1.0) report.bounded = false;
    }
    return report;
}

std::vector<double> default_time_grid() {
    constexpr int kPoints = 32;
    constexpr double kFirst = 1e-3;
    constexpr double kLast = 1e2;
    std::vector<double> grid;
    grid.reserve(kPoints);
    for (int k = 0; k < kPoints; ++k)
        grid.push_back(kFirst *
                       std::pow(kLast / kFirst,
                                static_cast<double>(k) / (kPoints - 1)));
    return grid;
}

namespace {

/// True when the mode's basis function is constant on the box: identical
/// values and exactly vanishing first partials at a handful of probe
/// points. Only structurally constant modes (zero-frequency factors) pass;
/// anything with genuine x-dependence fails at the first probe.
bool is_constant_mode(const BiorthogonalSystem& system, const Index& xi) {
    const DomainSpec& dom = system.domain();
    const auto d = static_cast<std::size_t>(dom.dim);
    constexpr double kOffsets[] = {0.18257, 0.41987, 0.63661, 0.86603};
    Point x(d);
    Complex reference{};
    for (std::size_t p = 0; p < std::size(kOffsets); ++p) {
        for (std::size_t j = 0; j < d; ++j) {
            const double frac = kOffsets[(p + j) % std::size(kOffsets)];
            x[j] = dom.lower[j] + frac * (dom.upper[j] - dom.lower[j]);
        }
        const std::span<const double> xs(x.data(), x.size());
        const Complex val = system.u(xi, xs);
        if (p == 0)
            reference = val;
        else if (std::abs(val - reference) >
                 1e-14 * std::max(1.0, std::abs(reference)))
            return false;
        for (std::size_t j = 0; j < d; ++j)
            if (std::abs(system.u_partial(xi, xs, static_cast<int>(j))) != 0.0)
                return false;
    }
    return true;
}

}  // namespace

MorseEmergence morse_emergence(const TransformPlan& plan, const Symbol& sigma,
                               const SpectralCoefficients& f0,
                               std::vector<double> t_grid,
                               const CriticalPointOptions& options) {
    MorseEmergence result;
    result.t_grid = t_grid.empty() ? default_time_grid() : std::move(t_grid);
    for (double t : result.t_grid)
        if (!(t > 0.0))
            throw PreconditionError("morse_emergence: grid times must be > 0");
    for (std::size_t i = 1; i < result.t_grid.size(); ++i)
        if (!(result.t_grid[i] > result.t_grid[i - 1]))
            throw PreconditionError(
                "morse_emergence: grid times must strictly increase");

    const HeatTrajectory traj = heat_solve(plan, sigma, f0, result.t_grid);

    // Constant modes contribute exactly zero gradient and shift every
    // critical value by the same amount, so dropping them changes neither
    // the critical points nor the pairwise value gaps. Doing the drop in
    // coefficient space (rather than subtracting a mean after summation)
    // avoids catastrophic cancellation once the decaying part falls below
    // eps times the stationary pedestal. The remaining slice is rescaled to
    // unit peak coefficient; critical points are invariant under positive
    // scaling and the tolerances then act on a function of unit size.
    std::vector<bool> constant_mode(plan.mode_count());
    for (std::size_t k = 0; k < plan.mode_count(); ++k)
        constant_mode[k] = is_constant_mode(*plan.system, plan.modes[k].index);

    result.reports.reserve(result.t_grid.size());
    for (double t : result.t_grid) {
        Eigen::VectorXcd coeffs = traj.basis_coefficients(t);
        for (std::size_t k = 0; k < plan.mode_count(); ++k)
            if (constant_mode[k]) coeffs[static_cast<Eigen::Index>(k)] = 0.0;
        const double peak = coeffs.cwiseAbs().maxCoeff();
        if (peak > 0.0) coeffs /= peak;
        const RealExpansion expansion(plan.system, plan.modes,
                                      std::move(coeffs));
        result.reports.push_back(
            morse_report(as_smooth_function(expansion), options));
    }

    // Smallest grid time whose whole suffix is Morse with distinct values
    // and a constant critical-point count.
    const std::size_t n = result.reports.size();
    std::vector<bool> suffix_ok(n, false);
    for (std::size_t i = n; i-- > 0;) {
        const MorseReport& r = result.reports[i];
        const bool pass = r.is_morse && r.distinct_values && r.count > 0;
        if (i + 1 == n)
            suffix_ok[i] = pass;
        else
            suffix_ok[i] = pass && suffix_ok[i + 1] &&
                           r.count == result.reports[i + 1].count;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (suffix_ok[i]) {
            result.found = true;
            result.T = result.t_grid[i];
            result.persistent_count = result.reports[i].count;
            break;
        }
    }
    if (!result.found && n > 0) {
        const MorseReport& last = result.reports[n - 1];
        result.diagnostics =
            "no suffix of the time grid is uniformly Morse with distinct "
            "values and stable count; final report: morse=" +
            std::string(last.is_morse ? "yes" : "no") +
            ", distinct=" + (last.distinct_values ? "yes" : "no") +
            ", count=" + std::to_string(last.count);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Twisted trigonometric test family.

namespace {

struct TwistedParts {
    double c1, c2;     // log h / 2pi
    double E;          // exp(c . x)
    double F;          // a0 + g1 + g2
    double g1, g2;     // per-coordinate trig parts
    double dg1, dg2;   // their derivatives
};

TwistedParts twisted_parts(const TwistedTrigFunction& f, const Point& x) {
    TwistedParts p;
    p.c1 = std::log(f.h[0]) / kTwoPi;
    p.c2 = std::log(f.h[1]) / kTwoPi;
    p.E = std::exp(p.c1 * x[0] + p.c2 * x[1]);
    p.g1 = f.a[0] * std::cos(x[0]) + f.b[0] * std::sin(x[0]);
    p.g2 = f.a[1] * std::cos(x[1]) + f.b[1] * std::sin(x[1]);
    p.dg1 = -f.a[0] * std::sin(x[0]) + f.b[0] * std::cos(x[0]);
    p.dg2 = -f.a[1] * std::sin(x[1]) + f.b[1] * std::cos(x[1]);
    p.F = f.a0 + p.g1 + p.g2;
    return p;
}

}  // namespace

double TwistedTrigFunction::value(const Point& x) const {
    const TwistedParts p = twisted_parts(*this, x);
    return p.E * p.F;
}

void TwistedTrigFunction::gradient(const Point& x, double* g) const {
    const TwistedParts p = twisted_parts(*this, x);
    g[0] = p.E * (p.c1 * p.F + p.dg1);
    g[1] = p.E * (p.c2 * p.F + p.dg2);
}

void TwistedTrigFunction::hessian(const Point& x, double* H) const {
    const TwistedParts p = twisted_parts(*this, x);
    // g'' = -g for single-frequency trig parts.
    H[0] = p.E * (p.c1 * p.c1 * p.F + 2.0 * p.c1 * p.dg1 - p.g1);
    H[3] = p.E * (p.c2 * p.c2 * p.F + 2.0 * p.c2 * p.dg2 - p.g2);
    H[1] = p.E * (p.c1 * p.c2 * p.F + p.c1 * p.dg2 + p.c2 * p.dg1);
    H[2] = H[1];
}

SmoothFunction TwistedTrigFunction::as_smooth_function() const {
    SmoothFunction out;
    out.dim = 2;
    DomainSpec dom;
    dom.dim = 2;
    dom.lower = {0.0, 0.0};
    dom.upper = {kTwoPi, kTwoPi};
    // The twist factor breaks periodicity whenever h != 1.
    dom.periodic = {h[0] == 1.0, h[1] == 1.0};
    dom.measure_normalizer = kTwoPi * kTwoPi;
    out.domain = dom;
    const TwistedTrigFunction self = *this;
    out.value = [self](const Point& x) { return self.value(x); };
    out.gradient = [self](const Point& x, double* g) { self.gradient(x, g); };
    out.hessian = [self](const Point& x, double* H) { self.hessian(x, H); };
    return out;
}

namespace {

double fd_hessian_entry(const TwistedTrigFunction& f, const Point& x, int i,
                        int j, double step) {
    Point y = x;
    if (i == j) {
        const double f0 = f.value(x);
        y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + step;
        const double fp = f.value(y);
        y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - step;
        const double fm = f.value(y);
        return (fp - 2.0 * f0 + fm) / (step * step);
    }
    const auto is = static_cast<std::size_t>(i);
    const auto js = static_cast<std::size_t>(j);
    y[is] = x[is] + step;
    y[js] = x[js] + step;
    const double fpp = f.value(y);
    y[js] = x[js] - step;
    const double fpm = f.value(y);
    y[is] = x[is] - step;
    const double fmm = f.value(y);
    y[js] = x[js] + step;
    const double fmp = f.value(y);
    return (fpp - fpm - fmp + fmm) / (4.0 * step * step);
}

/// Fourth-order entry via Richardson combination of two central stencils.
double richardson_entry(const TwistedTrigFunction& f, const Point& x, int i,
                        int j, double step) {
    const double coarse = fd_hessian_entry(f, x, i, j, step);
    const double fine = fd_hessian_entry(f, x, i, j, step / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

HessianCheck twisted_trig_hessian_check(const TwistedTrigFunction& f,
                                        const Point& x) {
    if (x.size() != 2)
        throw PreconditionError("twisted_trig_hessian_check: point must be 2d");
    double g[2];
    f.gradient(x, g);
    const double gnorm = std::hypot(g[0], g[1]);
    if (gnorm > 1e-8)
        throw PreconditionError(
            "twisted_trig_hessian_check: gradient norm " +
            std::to_string(gnorm) + " at " + format_point(x) +
            " exceeds 1e-8; not a critical point");

    const TwistedParts p = twisted_parts(f, x);
    const double A1 = std::hypot(f.a[0], f.b[0]);
    const double A2 = std::hypot(f.a[1], f.b[1]);
    // Phases chosen so A sin(x + phi) = g'(x) and A cos(x + phi) = -g(x).
    const double phi1 = std::atan2(f.b[0], -f.a[0]);
    const double phi2 = std::atan2(f.b[1], -f.a[1]);
    const double C1 = p.E * A1 * std::sin(x[0] + phi1);
    const double C2 = p.E * A2 * std::sin(x[1] + phi2);
    const double D1 = p.E * A1 * std::cos(x[0] + phi1);
    const double D2 = p.E * A2 * std::cos(x[1] + phi2);
    const double L1 = p.c1;
    const double L2 = p.c2;

    HessianCheck check;
    check.closed_form = (L1 * C1 + D1) * (L2 * C2 + D2) - (L1 * C2) * (L2 * C1);
    check.f_value = p.E * p.F;
    check.product_formula = ((1.0 + L1) * (1.0 + L2) - L1 * L2) * A1 * A2 *
                            std::sin(x[0] + phi1) * std::sin(x[1] + phi2);

    // Step chosen to balance the h^4 Richardson truncation term against the
    // eps*|f|/h^2 rounding noise of the second-difference stencils; 1e-3
    // keeps the determinant gap near 1e-8, two orders under the tolerance
    // callers check against.
    constexpr double kStep = 1e-3;
    const double h11 = richardson_entry(f, x, 0, 0, kStep);
    const double h22 = richardson_entry(f, x, 1, 1, kStep);
    const double h12 = richardson_entry(f, x, 0, 1, kStep);
    check.finite_difference = h11 * h22 - h12 * h12;

    const double scale =
        std::max({std::abs(check.closed_form), std::abs(check.finite_difference),
                  1e-8});
    check.relative_gap =
        std::abs(check.closed_form - check.finite_difference) / scale;
    check.degenerate = std::abs(check.closed_form) <=
                       1e-8 * std::max(p.E * p.E * A1 * A2, 1e-12);
    return check;
}

}  // namespace nhs
