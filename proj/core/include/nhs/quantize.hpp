// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nhs/symbol.hpp"
#include "nhs/transform.hpp"

namespace nhs {

/// T_sigma f at one point: sum over the truncation of
/// sigma(x, xi) f_hat(xi) u_xi(x). f_hat must be plain-kind.
Complex apply_operator(const Symbol& sigma, const SpectralCoefficients& f_hat,
                       const Point& x);

/// Grid variant over all plan nodes; shares the plan's node tables.
GridFunction apply_operator_grid(const TransformPlan& plan,
                                 const Symbol& sigma,
                                 const SpectralCoefficients& f_hat);

/// Starred quantization: sum of tau(x, xi) f_hat_star(xi) v_xi(x).
Complex apply_operator_star(const Symbol& tau,
                            const SpectralCoefficients& f_hat_star,
                            const Point& x);
GridFunction apply_operator_star_grid(const TransformPlan& plan,
                                      const Symbol& tau,
                                      const SpectralCoefficients& f_hat_star);

/// Estimate of the vanishing-at-infinity indicator
/// limsup over |xi| of sup over x of |sigma(x, xi)|,
/// computed over bracket shells [bounds[k], bounds[k+1]). For each shell the
/// value is the max over its indices of a grid-estimated sup over x. This is
/// an estimator with reported evidence, never a certificate.
struct ShellEstimate {
    std::vector<double> shell_bounds;   // K+1 ascending bracket boundaries
    std::vector<double> shell_values;   // K values
    std::vector<std::size_t> shell_populations;
    double d_hat = 0.0;                 // max of the last two shell values
    bool diverging = false;             // last shell exceeded the cap
    bool nonincreasing_tail = false;    // last three values nonincreasing
    std::string note;                   // estimator-not-certificate wording
};

/// Default shells are consecutive powers of two covering brackets up to
/// 2^(shell count). Throws PreconditionError for fewer than 3 shells or any
/// empty shell.
ShellEstimate gohberg_d(const BiorthogonalSystem& system, const Symbol& sigma,
                        const std::vector<double>& shell_bounds,
                        int x_grid_order = 256, double divergence_cap = 1e6);

std::vector<double> default_shell_bounds(int shell_count = 5);

enum class CompactnessVerdict {
    CompactIndicated,
    NotCompactIndicated,
    Inconclusive
};
const char* to_string(CompactnessVerdict verdict);

struct CompactnessReport {
    CompactnessVerdict verdict = CompactnessVerdict::Inconclusive;
    ShellEstimate evidence;
    double tolerance = 0.1;
    bool multiplier_criterion = false;  // used |sigma(xi)| directly
    std::string explanation;
};

/// Applies the shell evidence: compact-indicated when the sequence decreases
/// and the last value is below tolerance; not-compact-indicated when the
/// tail stabilizes above tolerance; inconclusive otherwise. Multiplier
/// symbols use |sigma(xi)| per shell directly (no x grid).
CompactnessReport compactness_verdict(const BiorthogonalSystem& system,
                                      const Symbol& sigma,
                                      const std::vector<double>& shell_bounds,
                                      double tolerance = 0.1,
                                      int x_grid_order = 256);

/// Decay table of the x-direction coefficients of the symbol:
/// sigma_hat(eta, xi) = integral of sigma(x, xi) conj(v_eta(x)) d(mu).
/// Reports t(eta) = sup over xi of |sigma_hat(eta, xi)| in enumeration
/// order of eta, with partial sums and a plateau flag (last tenth of the
/// partial-sum sequence changes by under 1%).
struct CoefficientDecay {
    std::vector<Index> eta_order;
    std::vector<double> sup_values;
    std::vector<double> partial_sums;
    bool plateau = false;
};
CoefficientDecay symbol_coefficient_decay(const TransformPlan& plan,
                                          const Symbol& sigma);

}  // namespace nhs
