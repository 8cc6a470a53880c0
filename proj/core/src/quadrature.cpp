// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nhs/basis.hpp"
#include "nhs/errors.hpp"

namespace nhs {

namespace {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence. Accurate to machine precision for the orders used
/// here (a few hundred at most).
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 =
                    ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace

QuadPtr build_quadrature(const DomainSpec& domain, int order_per_dim) {
    if (order_per_dim < 2)
        throw PreconditionError("quadrature order must be at least 2");
    const int d = domain.dim;
    if (d < 1) throw PreconditionError("quadrature domain has no dimensions");

    std::vector<double> ref_nodes, ref_weights;
    gauss_legendre(order_per_dim, ref_nodes, ref_weights);

    auto rule = std::make_shared<QuadratureRule>();
    rule->domain = domain;
    rule->order_per_dim = order_per_dim;

    std::size_t total = 1;
    for (int j = 0; j < d; ++j) {
        total *= static_cast<std::size_t>(order_per_dim);
        if (total > (1u << 26))
            throw PreconditionError("quadrature rule too large");
    }
    rule->nodes.reserve(total);
    rule->weights.reserve(total);

    std::vector<int> pos(d, 0);
    Point node(d);
    const double inv_norm = 1.0 / domain.measure_normalizer;
    for (;;) {
        double w = inv_norm;
        for (int j = 0; j < d; ++j) {
            const double len = domain.length(j);
            node[j] = domain.lower[j] + 0.5 * (ref_nodes[pos[j]] + 1.0) * len;
            w *= 0.5 * ref_weights[pos[j]] * len;
        }
        rule->nodes.push_back(node);
        rule->weights.push_back(w);
        int j = d - 1;
        while (j >= 0 && pos[j] == order_per_dim - 1) {
            pos[j] = 0;
            --j;
        }
        if (j < 0) break;
        ++pos[j];
    }
    return rule;
}

int default_quad_order(long max_frequency) {
    return static_cast<int>(4 * std::max(max_frequency, 0L) + 16);
}

long max_resolution_frequency(const BiorthogonalSystem& system,
                              std::span<const EigenData> modes) {
    long f = 0;
    for (const EigenData& m : modes)
        f = std::max(f, system.resolution_frequency(m.index));
    return f;
}

GridFunction sample(const QuadratureRule& quad,
                    const std::function<Complex(const Point&)>& f) {
    GridFunction g;
    g.rule = std::make_shared<QuadratureRule>(quad);
    g.values.resize(static_cast<Eigen::Index>(quad.size()));
    for (std::size_t q = 0; q < quad.size(); ++q)
        g.values[static_cast<Eigen::Index>(q)] = f(quad.nodes[q]);
    return g;
}

GridFunction sample(const QuadPtr& quad,
                    const std::function<Complex(const Point&)>& f) {
    if (!quad) throw PreconditionError("sample: null quadrature rule");
    GridFunction g;
    g.rule = quad;
    g.values.resize(static_cast<Eigen::Index>(quad->size()));
    for (std::size_t q = 0; q < quad->size(); ++q)
        g.values[static_cast<Eigen::Index>(q)] = f(quad->nodes[q]);
    return g;
}

Complex integrate(const GridFunction& f) {
    if (!f.rule) throw PreconditionError("integrate: grid function has no rule");
    Complex acc = 0.0;
    for (std::size_t q = 0; q < f.rule->size(); ++q)
        acc += f.rule->weights[q] * f.values[static_cast<Eigen::Index>(q)];
    return acc;
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
    if (!f.rule || !g.rule || f.rule->size() != g.rule->size())
        throw PreconditionError("inner_product: mismatched quadrature rules");
    Complex acc = 0.0;
    for (std::size_t q = 0; q < f.rule->size(); ++q) {
        const auto i = static_cast<Eigen::Index>(q);
        acc += f.rule->weights[q] * f.values[i] * std::conj(g.values[i]);
    }
    return acc;
}

double l2_norm(const GridFunction& f) {
    if (!f.rule) throw PreconditionError("l2_norm: grid function has no rule");
    double acc = 0.0;
    for (std::size_t q = 0; q < f.rule->size(); ++q)
        acc += f.rule->weights[q] *
               std::norm(f.values[static_cast<Eigen::Index>(q)]);
    return std::sqrt(std::max(acc, 0.0));
}

namespace {

/// One golden-section maximization of t -> |f| along coordinate j, within
/// [lo, hi]. Returns the best t found.
double golden_max(const std::function<double(const Point&)>& f, Point x, int j,
                  double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    auto eval = [&](double t) {
        x[j] = t;
        return f(x);
    };
    double fc = eval(c), fd = eval(d);
    for (int iter = 0; iter < 60 && (b - a) > 1e-13 * std::max(1.0, std::abs(b));
         ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = eval(d);
        }
    }
    return fc > fd ? c : d;
}

}  // namespace

double estimate_sup_abs(const std::function<double(const Point&)>& f,
                        const DomainSpec& domain, int grid_per_dim) {
    if (grid_per_dim < 2)
        throw PreconditionError("sup estimate needs at least 2 grid points per dim");
    const int d = domain.dim;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) {
        total *= static_cast<std::size_t>(grid_per_dim);
        if (total > (1u << 26))
            throw PreconditionError("sup estimate grid too large");
    }

    std::vector<int> pos(d, 0);
    Point x(d), best_x(d);
    double best = -1.0;
    for (;;) {
        for (int j = 0; j < d; ++j) {
            const double len = domain.length(j);
            x[j] = domain.lower[j] + (pos[j] + 0.5) * len / grid_per_dim;
        }
        const double val = f(x);
        if (val > best) {
            best = val;
            best_x = x;
        }
        int j = d - 1;
        while (j >= 0 && pos[j] == grid_per_dim - 1) {
            pos[j] = 0;
            --j;
        }
        if (j < 0) break;
        ++pos[j];
    }

    // Coordinate-wise refinement around the best cell.
    Point refined = best_x;
    for (int j = 0; j < d; ++j) {
        const double cell = domain.length(j) / grid_per_dim;
        const double lo = std::max(domain.lower[j], refined[j] - cell);
        const double hi = std::min(domain.upper[j], refined[j] + cell);
        refined[j] = golden_max(f, refined, j, lo, hi);
    }
    return std::max(best, f(refined));
}

}  // namespace nhs
