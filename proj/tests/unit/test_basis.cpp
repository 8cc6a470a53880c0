// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "nhs/basis.hpp"
#include "nhs/errors.hpp"
#include "nhs/quadrature.hpp"
#include "oracles.hpp"

using namespace nhs;
using Cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace {

std::vector<SystemPtr> all_systems() {
    return {
        make_torus(2),
        make_h_twisted(1, {2.0}),
        make_h_twisted_real(1, {2.0}),
        make_neumann_rect(1.0, 0.5),
        make_ionkin(),
        make_moebius(),
    };
}

QuadPtr quad_for(const BiorthogonalSystem& sys,
                 const std::vector<EigenData>& modes) {
    const long freq = max_resolution_frequency(sys, modes);
    return build_quadrature(sys.domain(), default_quad_order(2 * freq));
}

}  // namespace

TEST_CASE("bracket weight formula") {
    // (1 + |lambda|^2)^(1/4) for the order-2 families.
    CHECK(bracket_of(Cplx(0.0, 0.0), 2) == doctest::Approx(1.0));
    CHECK(bracket_of(Cplx(-25.0, 0.0), 2) ==
          doctest::Approx(std::pow(626.0, 0.25)));
    CHECK(bracket_of(Cplx(3.0, -4.0), 2) ==
          doctest::Approx(std::pow(26.0, 0.25)));
    CHECK(bracket_of(Cplx(1e8, 0.0), 2) >= 1.0);
}

TEST_CASE("factory rejects bad parameters") {
    CHECK_THROWS_AS(make_system("no_such_family", 1, {1.0}, 1.0, 1.0),
                    ConfigError);
    CHECK_THROWS_AS(make_torus(0), ConfigError);
    CHECK_THROWS_AS(make_h_twisted(1, {-2.0}), ConfigError);
    CHECK_THROWS_AS(make_h_twisted(2, {2.0, 3.0, 4.0}), ConfigError);
    CHECK_THROWS_AS(make_neumann_rect(0.0, 1.0), ConfigError);
}

TEST_CASE("factory dispatch and domains") {
    const SystemPtr nm = make_system("neumann_rect", 2, {1.0}, 1.0, 0.5);
    CHECK(nm->dim() == 2);
    CHECK(nm->domain().upper[0] == doctest::Approx(kTwoPi));
    CHECK(nm->domain().upper[1] == doctest::Approx(kTwoPi * 0.5));
    CHECK(nm->domain().measure_normalizer ==
          doctest::Approx(kTwoPi * kTwoPi * 0.5));

    const SystemPtr mb = make_system("moebius", 2, {1.0}, 1.0, 1.0);
    CHECK(mb->domain().lower[0] == doctest::Approx(-std::numbers::pi));
    CHECK(mb->domain().periodic[0] == false);
    CHECK(mb->domain().periodic[1] == true);

    // A scalar h is broadcast across dimensions.
    const SystemPtr tw = make_system("h_twisted", 2, {2.0}, 1.0, 1.0);
    CHECK(tw->dim() == 2);
}

TEST_CASE("torus enumeration order is frozen") {
    const SystemPtr sys = make_torus(2);
    const auto modes = enumerate_indices(*sys, 5);
    REQUIRE(modes.size() == 5);
    const std::vector<Index> expected = {
        {0, 0}, {-1, 0}, {0, -1}, {0, 1}, {1, 0}};
    for (std::size_t k = 0; k < 5; ++k) CHECK(modes[k].index == expected[k]);
    CHECK(modes[0].bracket == doctest::Approx(1.0));
    CHECK(modes[1].bracket == doctest::Approx(std::pow(2.0, 0.25)));
}

TEST_CASE("enumeration is sorted and consistent with the bracket cutoff") {
    for (const SystemPtr& sys : all_systems()) {
        CAPTURE(sys->name());
        const auto modes = enumerate_indices(*sys, 40);
        REQUIRE(modes.size() == 40);
        for (std::size_t k = 1; k < modes.size(); ++k) {
            const bool sorted =
                modes[k - 1].bracket < modes[k].bracket ||
                (modes[k - 1].bracket == modes[k].bracket &&
                 modes[k - 1].index < modes[k].index);
            CHECK(sorted);
        }
        const double cutoff = modes.back().bracket;
        const auto below = enumerate_up_to_bracket(*sys, cutoff);
        for (const EigenData& m : below) CHECK(m.bracket < cutoff);
        // Everything strictly below the cutoff is a prefix of the ordered
        // enumeration.
        REQUIRE(below.size() <= modes.size());
        for (std::size_t k = 0; k < below.size(); ++k)
            CHECK(below[k].index == modes[k].index);
    }
    CHECK_THROWS_AS(enumerate_indices(*make_torus(1), 0), PreconditionError);
}

TEST_CASE("window lower bounds never overestimate") {
    for (const SystemPtr& sys : all_systems()) {
        CAPTURE(sys->name());
        for (long radius : {2L, 5L}) {
            const auto inner = sys->lattice_window(radius);
            const auto outer = sys->lattice_window(radius + 3);
            const double bound = sys->min_bracket_outside(radius);
            double actual_min = 1e300;
            for (const Index& xi : outer) {
                bool inside = false;
                for (const Index& eta : inner)
                    if (eta == xi) {
                        inside = true;
                        break;
                    }
                if (!inside)
                    actual_min = std::min(
                        actual_min, sys->eigen_data(xi).bracket);
            }
            CHECK(bound <= actual_min + 1e-12);
            CHECK(sys->min_bracket_outside(radius + 20) > bound);
        }
    }
}

TEST_CASE("biorthogonality under independent Simpson integration") {
    // Spot checks with an integrator the library does not use anywhere.
    const SystemPtr tw = make_h_twisted(1, {2.0});
    const auto modes = enumerate_indices(*tw, 5);
    const auto& dom = tw->domain();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        for (std::size_t j = 0; j < modes.size(); ++j) {
            const Index &xi = modes[i].index, &eta = modes[j].index;
            const Cplx val =
                test::simpson_box(
                    [&](const std::vector<double>& x) {
                        const std::span<const double> xs(x.data(), x.size());
                        return tw->u(xi, xs) * std::conj(tw->v(eta, xs));
                    },
                    dom.lower, dom.upper, 96) /
                dom.measure_normalizer;
            const double expect = i == j ? 1.0 : 0.0;
            CHECK(std::abs(val - expect) < 1e-8);
        }
    }
}

TEST_CASE("biorthogonality of every family under library quadrature") {
    for (const SystemPtr& sys : all_systems()) {
        CAPTURE(sys->name());
        const auto modes = enumerate_indices(*sys, 20);
        const QuadPtr quad = quad_for(*sys, modes);
        CHECK(verify_biorthogonality(*sys, 20, *quad) < 1e-8);
    }
}

TEST_CASE("frozen norms: interval system with associated functions") {
    // ||u_0||^2 = int_0^1 x^2 dx = 1/3, ||v_0||^2 = int_0^1 4 dx = 4,
    // ||u_1||^2 = int_0^1 sin(2 pi x)^2 dx = 1/2.
    const SystemPtr io = make_ionkin();
    const auto modes = enumerate_indices(*io, 3);
    const QuadPtr quad = quad_for(*io, modes);
    const NormalizationReport rep = normalization_report(*io, 3, *quad);
    CHECK(rep.u_norms[0] == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(rep.v_norms[0] == doctest::Approx(2.0));
    CHECK(rep.u_norms[1] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("frozen norms: twisted exponentials") {
    // ||h^(x/2pi) e^(i x xi)||^2 over dx/2pi equals (h^2 - 1) / (2 ln h).
    const double h = 2.0;
    const SystemPtr tw = make_h_twisted(1, {h});
    const auto modes = enumerate_indices(*tw, 3);
    const QuadPtr quad = quad_for(*tw, modes);
    const NormalizationReport rep = normalization_report(*tw, 3, *quad);
    const double expected = std::sqrt((h * h - 1.0) / (2.0 * std::log(h)));
    for (double n : rep.u_norms) CHECK(n == doctest::Approx(expected));
    // v carries the reciprocal twist.
    const double expected_v =
        std::sqrt((1.0 - 1.0 / (h * h)) / (2.0 * std::log(h)));
    for (double n : rep.v_norms) CHECK(n == doctest::Approx(expected_v));
}

TEST_CASE("orthonormal families report unit norms") {
    for (const SystemPtr& sys :
         {make_torus(2), make_neumann_rect(1.0, 0.5), make_moebius()}) {
        CAPTURE(sys->name());
        const auto modes = enumerate_indices(*sys, 12);
        const QuadPtr quad = quad_for(*sys, modes);
        const NormalizationReport rep = normalization_report(*sys, 12, *quad);
        CHECK(rep.max_u_deviation < 1e-10);
        CHECK(rep.max_v_deviation < 1e-10);
    }
}

TEST_CASE("eigenvalues match the closed forms") {
    const SystemPtr torus = make_torus(2);
    CHECK(torus->eigenvalue({3, -4}) == Cplx(-25.0, 0.0));

    const double h = 2.0, c = std::log(h) / kTwoPi;
    const SystemPtr tw = make_h_twisted(1, {h});
    const Cplx lam = tw->eigenvalue({5});
    CHECK(lam.real() == doctest::Approx(c * c - 25.0));
    CHECK(lam.imag() == doctest::Approx(2.0 * c * 5.0));

    const SystemPtr twr = make_h_twisted_real(1, {h});
    // Parity slot trails the frequency; eigenvalue is real.
    const Cplx lam_r = twr->eigenvalue({3, 0});
    CHECK(lam_r.real() == doctest::Approx(-9.0 - c * c));
    CHECK(lam_r.imag() == 0.0);

    const SystemPtr nm = make_neumann_rect(1.0, 0.5);
    CHECK(nm->eigenvalue({2, 1}).real() == doctest::Approx(-4.0 - 4.0));

    const SystemPtr io = make_ionkin();
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(io->eigenvalue({0}) == Cplx(0.0, 0.0));
    CHECK(io->eigenvalue({1}).real() == doctest::Approx(4.0 * pi2));
    CHECK(io->eigenvalue({2}).real() == doctest::Approx(4.0 * pi2));

    const SystemPtr mb = make_moebius();
    CHECK(mb->eigenvalue({0, 1}).real() == doctest::Approx(-0.25 - 4.0));
    CHECK(mb->eigenvalue({1, 2}).real() == doctest::Approx(-2.25 - 16.0));
}

namespace {

// The model operator whose eigen-relation the family satisfies, applied via
// Richardson finite differences on the real and imaginary parts of u.
Cplx apply_model_operator(const BiorthogonalSystem& sys, const Index& xi,
                          const std::vector<double>& x) {
    const auto d = static_cast<std::size_t>(sys.dim());
    auto part = [&](bool imag) {
        return [&sys, &xi, imag](const std::vector<double>& p) {
            const Cplx val = sys.u(xi, std::span<const double>(p.data(),
                                                               p.size()));
            return imag ? val.imag() : val.real();
        };
    };
    const auto h_re = test::richardson_hessian(part(false), x, 1e-3);
    const auto h_im = test::richardson_hessian(part(true), x, 1e-3);
    Cplx laplacian = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        laplacian += Cplx(h_re[j * d + j], h_im[j * d + j]);

    if (sys.name() == "ionkin") return -laplacian;  // -u'' = lambda u
    if (sys.name() == "h_twisted_real") {
        // Drift form: Delta u - 2 c . grad u with c = ln h / 2pi. The twist
        // parameters are recovered from the family's own eigenvalue at the
        // zero frequency: lambda(0) = -sum c_j^2 and the twist is isotropic
        // in this test (scalar h), so c_j = sqrt(-lambda(0)/d).
        Index zero(static_cast<std::size_t>(sys.lattice_dim()), 0);
        const double c2 = -sys.eigenvalue(zero).real() /
                          static_cast<double>(d);
        const double c = std::sqrt(std::max(c2, 0.0));
        const auto g_re = test::richardson_gradient(part(false), x, 1e-3);
        const auto g_im = test::richardson_gradient(part(true), x, 1e-3);
        Cplx drift = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            drift += Cplx(g_re[j], g_im[j]) * c;
        return laplacian - 2.0 * drift;
    }
    return laplacian;  // Delta u = lambda u for the remaining families
}

}  // namespace

TEST_CASE("finite differences confirm the eigen-relation") {
    for (const SystemPtr& sys : all_systems()) {
        CAPTURE(sys->name());
        const auto modes = enumerate_indices(*sys, 8);
        const auto& dom = sys->domain();
        for (const EigenData& m : modes) {
            if (!sys->eigenrelation_holds(m.index)) continue;
            // Interior probe away from boundaries and symmetry axes.
            std::vector<double> x(static_cast<std::size_t>(sys->dim()));
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = dom.lower[j] + 0.3123 * dom.length(static_cast<int>(j));
            const Cplx lhs = apply_model_operator(*sys, m.index, x);
            const Cplx rhs =
                m.lambda *
                sys->u(m.index, std::span<const double>(x.data(), x.size()));
            const double scale =
                std::max({std::abs(lhs), std::abs(rhs), 1.0});
            CAPTURE(format_index(m.index));
            CHECK(std::abs(lhs - rhs) / scale < 1e-4);
        }
    }
}

TEST_CASE("associated functions are flagged") {
    const SystemPtr io = make_ionkin();
    CHECK(io->eigenrelation_holds({0}));
    CHECK(io->eigenrelation_holds({1}));
    CHECK_FALSE(io->eigenrelation_holds({2}));
    CHECK(io->eigenrelation_holds({3}));
    CHECK_FALSE(io->eigenrelation_holds({4}));
    for (const SystemPtr& sys : all_systems()) {
        if (sys->name() == "ionkin") continue;
        for (const EigenData& m : enumerate_indices(*sys, 10))
            CHECK(sys->eigenrelation_holds(m.index));
    }
}

TEST_CASE("analytic partials match finite differences") {
    for (const SystemPtr& sys : all_systems()) {
        CAPTURE(sys->name());
        const auto modes = enumerate_indices(*sys, 6);
        const auto& dom = sys->domain();
        const auto d = static_cast<std::size_t>(sys->dim());
        std::vector<double> x(d);
        for (std::size_t j = 0; j < d; ++j)
            x[j] = dom.lower[j] + 0.437 * dom.length(static_cast<int>(j));
        for (const EigenData& m : modes) {
            auto re = [&](const std::vector<double>& p) {
                return sys->u(m.index,
                              std::span<const double>(p.data(), p.size()))
                    .real();
            };
            auto im = [&](const std::vector<double>& p) {
                return sys->u(m.index,
                              std::span<const double>(p.data(), p.size()))
                    .imag();
            };
            const auto g_re = test::richardson_gradient(re, x, 1e-4);
            const auto g_im = test::richardson_gradient(im, x, 1e-4);
            const auto h_re = test::richardson_hessian(re, x, 1e-3);
            const auto h_im = test::richardson_hessian(im, x, 1e-3);
            const std::span<const double> xs(x.data(), x.size());
            for (std::size_t j = 0; j < d; ++j) {
                const Cplx analytic =
                    sys->u_partial(m.index, xs, static_cast<int>(j));
                CHECK(std::abs(analytic - Cplx(g_re[j], g_im[j])) <
                      1e-6 * std::max(1.0, std::abs(analytic)));
                for (std::size_t k = 0; k < d; ++k) {
                    const Cplx analytic2 = sys->u_partial2(
                        m.index, xs, static_cast<int>(j),
                        static_cast<int>(k));
                    CHECK(std::abs(analytic2 -
                                   Cplx(h_re[j * d + k], h_im[j * d + k])) <
                          1e-4 * std::max(1.0, std::abs(analytic2)));
                }
            }
        }
    }
}

TEST_CASE("growth constants hold on a sample grid") {
    for (const SystemPtr& sys : all_systems()) {
        CAPTURE(sys->name());
        const double worst = growth_check(*sys, 12, 48);
        CHECK(worst <= sys->growth_constant() * (1.0 + 1e-8));
    }
}

TEST_CASE("summability partial sums are increasing and finite") {
    for (const SystemPtr& sys : all_systems()) {
        CAPTURE(sys->name());
        const auto sums = summability_partial_sums(
            *sys, sys->summability_exponent(), {8, 16, 32});
        REQUIRE(sums.size() == 3);
        CHECK(sums[0] < sums[1]);
        CHECK(sums[1] < sums[2]);
        CHECK(std::isfinite(sums[2]));
    }
}

TEST_CASE("riesz constants bracket one for orthonormal families") {
    const SystemPtr sys = make_torus(2);
    const auto modes = enumerate_indices(*sys, 16);
    const QuadPtr quad = quad_for(*sys, modes);
    const RieszEstimate r = estimate_riesz_constants(*sys, 16, *quad);
    CHECK(r.k1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.K1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.k2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.K2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.truncation_level);
}

TEST_CASE("index formatting") {
    CHECK(format_index({1, -2}) == "(1,-2)");
    CHECK(format_index({7}) == "(7)");
}
