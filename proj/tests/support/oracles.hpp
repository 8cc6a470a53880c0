// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.
//
// Independent numerical oracles for the test suites. Everything here avoids
// the library's own quadrature and differentiation code paths on purpose:
// integration uses composite Simpson instead of Gauss-Legendre, and
// derivatives use central differences with Richardson extrapolation.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace nhs::test {

/// Composite Simpson rule over a box, `panels` panels per dimension
/// (each panel contributes two subintervals). Integrates plain Lebesgue
/// measure; divide by the box volume for a normalized measure.
std::complex<double> simpson_box(
    const std::function<std::complex<double>(const std::vector<double>&)>& f,
    const std::vector<double>& lower, const std::vector<double>& upper,
    int panels);

/// Central-difference gradient with one Richardson step:
/// (4 g(h/2) - g(h)) / 3 where g is the plain central difference.
std::vector<double> richardson_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h);

/// Same contract for the dense Hessian (row-major d*d).
std::vector<double> richardson_hessian(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h);

/// Largest singular value of a dense complex matrix by power iteration on
/// A*A (deterministic start vector), independent of Eigen's SVD.
double power_iteration_sigma_max(const Eigen::MatrixXcd& a, int iterations);

}  // namespace nhs::test
