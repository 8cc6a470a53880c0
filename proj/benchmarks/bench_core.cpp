// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.
//
// Microbenchmarks for the hot paths: plan construction, transforms, matrix
// assembly, section norms, and the expression engine. Run the binary with
// --benchmark_filter=<regex> to narrow the set.

#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <complex>

#include "nhs/assoc_matrix.hpp"
#include "nhs/basis.hpp"
#include "nhs/evolution.hpp"
#include "nhs/symbol.hpp"
#include "nhs/symexpr.hpp"
#include "nhs/transform.hpp"

namespace {

using namespace nhs;

SystemPtr torus1() {
    static const SystemPtr sys = make_torus(1);
    return sys;
}

Symbol mathieu_symbol() {
    return Symbol::separable(symexpr::Expr::parse("xi1^2"),
                             symexpr::Expr::parse("cos(x1)"));
}

GridFunction smooth_sample(const TransformPlan& plan) {
    return sample_on_plan(plan, [](const Point& x) {
        return Complex(std::cos(x[0]), std::sin(2.0 * x[0]));
    });
}

void PlanBuild(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        TransformPlan plan = make_plan(torus1(), count);
        benchmark::DoNotOptimize(plan.u_nodes.data());
    }
}
BENCHMARK(PlanBuild)->Arg(9)->Arg(17)->Arg(33)->Arg(65);

void ForwardTransform(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const TransformPlan plan = make_plan(torus1(), count);
    const GridFunction f = smooth_sample(plan);
    for (auto _ : state) {
        SpectralCoefficients hat = forward_transform(plan, f);
        benchmark::DoNotOptimize(hat.entries.size());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(count));
}
BENCHMARK(ForwardTransform)->Arg(9)->Arg(17)->Arg(33)->Arg(65);

void MatrixAssembly(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const TransformPlan plan = make_plan(torus1(), count, 0, 2);
    const Symbol sigma = mathieu_symbol();
    for (auto _ : state) {
        AssociatedMatrix M = build_matrix(plan, sigma);
        benchmark::DoNotOptimize(M.entries.data());
    }
}
BENCHMARK(MatrixAssembly)->Arg(9)->Arg(17)->Arg(33);

void FiniteSectionNorm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const AssociatedMatrix M =
        build_matrix_default(torus1(), mathieu_symbol(), 65);
    for (auto _ : state) {
        const double norm = finite_section_norm(M, n);
        benchmark::DoNotOptimize(norm);
    }
}
BENCHMARK(FiniteSectionNorm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void HeatSolveSection(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const TransformPlan plan = make_plan(torus1(), count, 0, 2);
    const Symbol sigma = mathieu_symbol();
    const GridFunction f0 = smooth_sample(plan);
    const std::vector<double> times{0.0, 0.25, 0.5, 1.0};
    for (auto _ : state) {
        HeatTrajectory traj = heat_solve(plan, sigma, f0, times);
        benchmark::DoNotOptimize(traj.l2_norms.data());
    }
}
BENCHMARK(HeatSolveSection)->Arg(9)->Arg(17)->Arg(33);

void ExpressionEvaluate(benchmark::State& state) {
    const symexpr::Expr expr = symexpr::Expr::parse(
        "xi1^2 + (2 + sin(x1)) * cos(x2) / bracket");
    const std::array<double, 2> x{0.7, -1.3};
    const std::array<double, 2> xi{3.0, -2.0};
    for (auto _ : state) {
        const double v = expr.evaluate(symexpr::EvalContext{x, xi, 2.0});
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(ExpressionEvaluate);

}  // namespace

BENCHMARK_MAIN();
