// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "nhs/types.hpp"

namespace nhs {

class BiorthogonalSystem;

/// Tensor-product Gauss-Legendre rule on a box. Weights are divided by the
/// measure normalizer, so they sum to one and integrate against the
/// normalized measure directly. Nodes are stored flattened, row-major in the
/// per-dimension grids.
struct QuadratureRule {
    DomainSpec domain;
    int order_per_dim = 0;
    std::vector<Point> nodes;       // size Q, each of length d
    std::vector<double> weights;    // size Q, sum 1

    std::size_t size() const { return nodes.size(); }
};

using QuadPtr = std::shared_ptr<const QuadratureRule>;

/// Builds the rule; order_per_dim >= 2. Nodes are strictly interior.
QuadPtr build_quadrature(const DomainSpec& domain, int order_per_dim);

/// Default order for resolving products of two basis elements up to the
/// given worst-case frequency: 4 * max_frequency + 16 per dimension.
int default_quad_order(long max_frequency);

/// Largest resolution_frequency over the given modes.
long max_resolution_frequency(const BiorthogonalSystem& system,
                              std::span<const EigenData> modes);

/// Complex samples of a function on the nodes of a rule.
struct GridFunction {
    QuadPtr rule;
    Eigen::VectorXcd values;
};

GridFunction sample(const QuadratureRule& quad,
                    const std::function<Complex(const Point&)>& f);
GridFunction sample(const QuadPtr& quad,
                    const std::function<Complex(const Point&)>& f);

/// Integral of f against the normalized measure.
Complex integrate(const GridFunction& f);
/// (f, g) = integral of f * conj(g) d(mu).
Complex inner_product(const GridFunction& f, const GridFunction& g);
/// sqrt((f, f)).
double l2_norm(const GridFunction& f);

/// Grid-plus-refinement estimate of sup over the closed box of |f|.
/// Scans grid_per_dim points per dimension, then runs one coordinate-wise
/// golden-section refinement pass around the best grid point. An estimate,
/// not a certificate.
double estimate_sup_abs(const std::function<double(const Point&)>& f,
                        const DomainSpec& domain, int grid_per_dim);

}  // namespace nhs
