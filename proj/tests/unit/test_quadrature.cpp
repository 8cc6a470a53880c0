// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nhs/errors.hpp"
#include "nhs/quadrature.hpp"
#include "oracles.hpp"

using namespace nhs;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace {

DomainSpec box_2pi() {
    DomainSpec d;
    d.dim = 1;
    d.lower = {0.0};
    d.upper = {kTwoPi};
    d.periodic = {true};
    d.measure_normalizer = kTwoPi;
    return d;
}

}  // namespace

TEST_CASE("weights sum to one and nodes are interior") {
    for (int order : {2, 4, 9, 33}) {
        const QuadPtr q = build_quadrature(box_2pi(), order);
        double sum = 0.0;
        for (double w : q->weights) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        for (const Point& x : q->nodes) {
            CHECK(x[0] > 0.0);
            CHECK(x[0] < kTwoPi);
        }
    }
}

TEST_CASE("rule construction validates its inputs") {
    CHECK_THROWS_AS(build_quadrature(box_2pi(), 1), PreconditionError);
    DomainSpec bad = box_2pi();
    bad.dim = 0;
    bad.lower.clear();
    bad.upper.clear();
    bad.periodic.clear();
    CHECK_THROWS_AS(build_quadrature(bad, 4), PreconditionError);
}

TEST_CASE("polynomial exactness up to degree 2n-1") {
    // Gauss-Legendre with n points integrates x^k exactly for k <= 2n-1.
    DomainSpec unit;
    unit.dim = 1;
    unit.lower = {0.0};
    unit.upper = {1.0};
    unit.periodic = {false};
    unit.measure_normalizer = 1.0;
    const int n = 6;
    const QuadPtr q = build_quadrature(unit, n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < q->size(); ++i)
            acc += q->weights[i] * std::pow(q->nodes[i][0], k);
        CHECK(acc == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
}

TEST_CASE("trig integral matches the independent Simpson oracle") {
    DomainSpec dom;
    dom.dim = 2;
    dom.lower = {0.0, 0.0};
    dom.upper = {kTwoPi, kTwoPi};
    dom.periodic = {true, true};
    dom.measure_normalizer = kTwoPi * kTwoPi;
    const QuadPtr q = build_quadrature(dom, 24);
    auto f = [](const Point& x) {
        return Complex(std::exp(std::sin(x[0])) * std::cos(2.0 * x[1]) +
                           1.0,
                       0.0);
    };
    const Complex lib = integrate(sample(q, f));
    const Complex oracle =
        test::simpson_box(
            [&](const std::vector<double>& x) {
                return f(x);
            },
            dom.lower, dom.upper, 128) /
        dom.measure_normalizer;
    CHECK(std::abs(lib - oracle) < 1e-10);
}

TEST_CASE("default order covers the stated frequency budget") {
    CHECK(default_quad_order(0) == 16);
    CHECK(default_quad_order(5) == 36);
    // An order-(4k+16) rule resolves products of two frequency-k waves:
    // the integrand degree is about 2k per factor pair.
    const QuadPtr q = build_quadrature(box_2pi(), default_quad_order(2 * 8));
    Complex acc = 0.0;
    for (std::size_t i = 0; i < q->size(); ++i) {
        const double x = q->nodes[i][0];
        acc += q->weights[i] * std::polar(1.0, 8.0 * x) *
               std::polar(1.0, -8.0 * x);
    }
    CHECK(std::abs(acc - 1.0) < 1e-12);
}

TEST_CASE("inner product and norm") {
    const QuadPtr q = build_quadrature(box_2pi(), 32);
    const GridFunction f =
        sample(q, [](const Point& x) { return std::polar(1.0, x[0]); });
    const GridFunction g =
        sample(q, [](const Point& x) { return std::polar(1.0, 2.0 * x[0]); });
    CHECK(std::abs(inner_product(f, f) - 1.0) < 1e-12);
    CHECK(std::abs(inner_product(f, g)) < 1e-12);
    CHECK(l2_norm(f) == doctest::Approx(1.0));
}

TEST_CASE("sup estimation finds off-grid maxima") {
    DomainSpec dom = box_2pi();
    // Peak at an irrational point, strictly between grid nodes.
    const double peak = 2.399;
    auto f = [peak](const Point& x) {
        return 3.0 * std::exp(-8.0 * (x[0] - peak) * (x[0] - peak));
    };
    const double est = estimate_sup_abs(f, dom, 40);
    CHECK(est == doctest::Approx(3.0).epsilon(1e-6));
    // Never above the true sup (up to refinement tolerance).
    CHECK(est <= 3.0 + 1e-9);
}
