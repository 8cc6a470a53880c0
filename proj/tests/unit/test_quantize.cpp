// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "nhs/basis.hpp"
#include "nhs/errors.hpp"
#include "nhs/quantize.hpp"
#include "nhs/symbol.hpp"
#include "nhs/transform.hpp"

using namespace nhs;
using symexpr::Expr;

TEST_CASE("symbol kinds and structural validation") {
    const Symbol mult = Symbol::from_expression("xi1^2");
    CHECK(mult.kind() == SymbolKind::Multiplier);
    CHECK_FALSE(mult.depends_on_x());

    const Symbol gen = Symbol::from_expression("xi1^2 + cos(x1)");
    CHECK(gen.kind() == SymbolKind::General);

    const Symbol sep =
        Symbol::separable(Expr::parse("xi1^2"), Expr::parse("cos(x1)"));
    CHECK(sep.kind() == SymbolKind::Separable);

    CHECK_THROWS_AS(Symbol::multiplier(Expr::parse("x1")), ConfigError);
    CHECK_THROWS_AS(
        Symbol::separable(Expr::parse("xi1"), Expr::parse("xi1 + x1")),
        ConfigError);
}

TEST_CASE("symbol evaluation, parts, and shift") {
    const SystemPtr sys = make_torus(1);
    const Symbol sep =
        Symbol::separable(Expr::parse("xi1^2"), Expr::parse("cos(x1)"));
    const EigenData mode = sys->eigen_data({3});
    CHECK(sep.xi_part(mode) == Complex(9.0, 0.0));
    CHECK(sep.x_part({0.0}) == doctest::Approx(1.0));
    CHECK(sep.value({0.0}, mode) == Complex(10.0, 0.0));

    const Symbol shifted = sep.shifted(Complex(2.0, 1.0));
    CHECK(shifted.kind() == SymbolKind::Separable);
    CHECK(shifted.value({0.0}, mode) == Complex(8.0, -1.0));
    CHECK(shifted.xi_part(mode) == Complex(7.0, -1.0));

    const Symbol gen = Symbol::from_expression("xi1*x1");
    CHECK_THROWS_AS(gen.xi_part(mode), PreconditionError);
    CHECK_THROWS_AS(gen.x_part({1.0}), PreconditionError);

    // Native callables carry a label and honor shifts.
    const Symbol fn = Symbol::multiplier_fn(
        [](const EigenData& m) { return Complex(-m.lambda.real(), 0.0); },
        "minus re lambda");
    CHECK(fn.xi_part(mode) == Complex(9.0, 0.0));
    CHECK(fn.shifted(1.0).xi_part(mode) == Complex(8.0, 0.0));
}

TEST_CASE("separable value splits as advertised") {
    const SystemPtr sys = make_torus(1);
    const Symbol sep = Symbol::separable(Expr::parse("xi1^2 + bracket"),
                                         Expr::parse("sin(x1)"));
    const EigenData mode = sys->eigen_data({2});
    const Point x = {1.3};
    CHECK(sep.value(x, mode).real() ==
          doctest::Approx(sep.xi_part(mode).real() + sep.x_part(x)));
}

TEST_CASE("multiplier application is diagonal") {
    const SystemPtr sys = make_torus(1);
    const TransformPlan plan = make_plan(sys, 9);
    const Symbol sigma = Symbol::from_expression("xi1^2");
    // f = e^{i 2 x}: T_sigma f = 4 f.
    const GridFunction f = sample_on_plan(
        plan, [](const Point& x) { return std::polar(1.0, 2.0 * x[0]); });
    const SpectralCoefficients f_hat = forward_transform(plan, f);
    const GridFunction g = apply_operator_grid(plan, sigma, f_hat);
    CHECK((g.values - 4.0 * f.values).cwiseAbs().maxCoeff() < 1e-10);
    // Pointwise evaluation agrees.
    const Point x0 = {0.577};
    CHECK(std::abs(apply_operator(sigma, f_hat, x0) -
                   4.0 * std::polar(1.0, 2.0 * x0[0])) < 1e-10);
}

TEST_CASE("general application matches the separable shortcut") {
    const SystemPtr sys = make_torus(1);
    const TransformPlan plan = make_plan(sys, 11, 0, 2);
    const Symbol sep =
        Symbol::separable(Expr::parse("xi1^2"), Expr::parse("cos(x1)"));
    const Symbol gen = Symbol::from_expression("xi1^2 + cos(x1)");
    const GridFunction f = sample_on_plan(plan, [](const Point& x) {
        return Complex(std::cos(x[0]) + 0.3 * std::sin(2.0 * x[0]), 0.0);
    });
    const SpectralCoefficients f_hat = forward_transform(plan, f);
    const GridFunction a = apply_operator_grid(plan, sep, f_hat);
    const GridFunction b = apply_operator_grid(plan, gen, f_hat);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("starred application uses the v family") {
    const SystemPtr tw = make_h_twisted(1, {2.0});
    const TransformPlan plan = make_plan(tw, 7);
    const Symbol sigma = Symbol::from_expression("xi1");
    // Build starred coefficients of v_0 itself.
    const GridFunction v0 = sample_on_plan(plan, [&](const Point& x) {
        return tw->v({0}, std::span<const double>(x.data(), x.size()));
    });
    SpectralCoefficients c_star = adjoint_transform(plan, v0);
    const GridFunction g = apply_operator_star_grid(plan, sigma, c_star);
    // sigma(xi) = xi vanishes at xi = 0, so the result is ~0.
    CHECK(g.values.cwiseAbs().maxCoeff() < 1e-8);
    // Kind mismatches are rejected.
    CHECK_THROWS_AS(apply_operator_grid(plan, sigma, c_star),
                    PreconditionError);
}

TEST_CASE("default shell bounds are powers of two") {
    const auto bounds = default_shell_bounds();
    REQUIRE(bounds.size() == 6);
    CHECK(bounds.front() == 1.0);
    CHECK(bounds.back() == 32.0);
    CHECK_THROWS_AS(default_shell_bounds(2), PreconditionError);
}

TEST_CASE("shell estimate of a decaying multiplier") {
    const SystemPtr sys = make_torus(1);
    const Symbol sigma = Symbol::from_expression("1/bracket");
    const ShellEstimate est = gohberg_d(*sys, sigma, default_shell_bounds());
    REQUIRE(est.shell_values.size() == 5);
    // Shell sup of 1/bracket is 1/(shell lower bound).
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(est.shell_values[k] <=
              1.0 / est.shell_bounds[k] + 1e-12);
        CHECK(est.shell_values[k] >
              1.0 / est.shell_bounds[k + 1] - 1e-12);
    }
    CHECK(est.nonincreasing_tail);
    CHECK_FALSE(est.diverging);
    CHECK(est.d_hat == doctest::Approx(est.shell_values[3]));
    CHECK_FALSE(est.note.empty());
}

TEST_CASE("shell estimate flags divergence") {
    const SystemPtr sys = make_torus(1);
    const Symbol sigma = Symbol::from_expression("bracket^9");
    const ShellEstimate est =
        gohberg_d(*sys, sigma, default_shell_bounds(4), 256, 1e6);
    CHECK(est.diverging);
}

TEST_CASE("shell validation") {
    const SystemPtr sys = make_torus(1);
    const Symbol sigma = Symbol::from_expression("1");
    CHECK_THROWS_AS(gohberg_d(*sys, sigma, {1.0, 2.0}), PreconditionError);
    CHECK_THROWS_AS(gohberg_d(*sys, sigma, {1.0, 2.0, 1.5, 4.0, 8.0}),
                    PreconditionError);
    // A shell with no lattice points in it: brackets on the 1-d torus jump
    // from 1 to 2^(1/4) ~ 1.19, so (1.01, 1.05) is empty.
    CHECK_THROWS_AS(
        gohberg_d(*sys, sigma, {1.0, 1.01, 1.05, 2.0, 4.0, 8.0}),
        PreconditionError);
}

TEST_CASE("compactness verdicts for the canonical symbols") {
    const SystemPtr sys = make_torus(1);

    const CompactnessReport decaying = compactness_verdict(
        *sys, Symbol::from_expression("1/bracket"), default_shell_bounds());
    CHECK(decaying.verdict == CompactnessVerdict::CompactIndicated);
    CHECK(decaying.multiplier_criterion);
    CHECK(std::string(to_string(decaying.verdict)) == "compact-indicated");

    const CompactnessReport identity = compactness_verdict(
        *sys, Symbol::from_expression("1"), default_shell_bounds());
    CHECK(identity.verdict == CompactnessVerdict::NotCompactIndicated);

    // A general symbol with x dependence goes through the grid-sup path.
    // Its shell sups are 3/bracket, so the default bounds (ending at 32)
    // leave the last shell at 3/16 > 0.1; one more octave settles it.
    const CompactnessReport general = compactness_verdict(
        *sys, Symbol::from_expression("(2 + sin(x1))/bracket"),
        {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0});
    CHECK(general.verdict == CompactnessVerdict::CompactIndicated);
    CHECK_FALSE(general.multiplier_criterion);
}

TEST_CASE("coefficient decay of a separable symbol") {
    const SystemPtr sys = make_torus(1);
    const TransformPlan plan = make_plan(sys, 21, 0, 2);
    const Symbol sep =
        Symbol::separable(Expr::parse("xi1^2"), Expr::parse("cos(x1)"));
    const CoefficientDecay decay = symbol_coefficient_decay(plan, sep);
    REQUIRE(decay.eta_order.size() == plan.mode_count());
    // cos x has exactly two nonzero x-coefficients (eta = +-1); the xi^2
    // part lands on eta = 0. Everything else is ~0 while the xi-sup of the
    // eta = 0 channel dominates everything.
    double top = 0.0;
    for (std::size_t i = 0; i < decay.eta_order.size(); ++i) {
        const long eta = decay.eta_order[i][0];
        if (std::labs(eta) > 1) CHECK(decay.sup_values[i] < 1e-9);
        top = std::max(top, decay.sup_values[i]);
    }
    // sup_xi |xi^2| over |xi| <= 10, reached through quadrature so it can
    // land a few ulp under the exact value.
    CHECK(top > 100.0 * (1.0 - 1e-9));
    // Partial sums are nondecreasing.
    for (std::size_t i = 1; i < decay.partial_sums.size(); ++i)
        CHECK(decay.partial_sums[i] >= decay.partial_sums[i - 1] - 1e-12);
    CHECK(decay.plateau);
}

TEST_CASE("multiplier coefficient decay shortcut") {
    const SystemPtr sys = make_torus(1);
    const TransformPlan plan = make_plan(sys, 9);
    const Symbol sigma = Symbol::from_expression("xi1^2");
    const CoefficientDecay decay = symbol_coefficient_decay(plan, sigma);
    // For a multiplier only the eta with 1_hat(eta) != 0 can contribute;
    // on the torus that is eta = 0 alone.
    double off = 0.0, on = 0.0;
    for (std::size_t i = 0; i < decay.eta_order.size(); ++i) {
        if (decay.eta_order[i] == Index{0})
            on = decay.sup_values[i];
        else
            off = std::max(off, decay.sup_values[i]);
    }
    CHECK(on == doctest::Approx(16.0));  // sup over |xi| <= 4 of xi^2
    CHECK(off < 1e-10);
}
