// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <complex>
#include <string>
#include <vector>

namespace nhs {

using Complex = std::complex<double>;

/// Lattice index of a basis element: an element of the admissible subset of
/// Z^l for its system. std::vector's built-in lexicographic comparison is the
/// tie-break order used throughout.
using Index = std::vector<long>;

/// A point of the spatial domain, length d.
using Point = std::vector<double>;

/// Product-of-intervals spatial domain. The working measure is Lebesgue
/// measure divided by `measure_normalizer`, so the box has total mass one.
struct DomainSpec {
    int dim = 0;
    std::vector<double> lower;     // length dim
    std::vector<double> upper;     // length dim
    std::vector<bool> periodic;    // true where every basis element is
                                   // periodic across the box in that
                                   // coordinate
    double measure_normalizer = 1.0;  // product of interval lengths

    double length(int j) const { return upper[j] - lower[j]; }
};

/// Eigenvalue data attached to one lattice index.
struct EigenData {
    Index index;
    Complex lambda{};
    double bracket = 1.0;  // (1 + |lambda|^2)^(1/(2m))
    int order_m = 2;
};

/// The frequency weight (1 + |lambda|^2)^(1/(2m)); always >= 1.
double bracket_of(Complex lambda, int order_m);

std::string format_index(const Index& idx);
std::string format_point(const Point& x);

}  // namespace nhs
