// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nhs/errors.hpp"
#include "nhs/evolution.hpp"

namespace nhs {

RealExpansion::RealExpansion(SystemPtr system, std::vector<EigenData> modes,
                             Eigen::VectorXcd coefficients)
    : system_(std::move(system)),
      modes_(std::move(modes)),
      coeffs_(std::move(coefficients)) {
    if (!system_) throw PreconditionError("RealExpansion: null system");
    if (modes_.empty() ||
        static_cast<std::size_t>(coeffs_.size()) != modes_.size())
        throw PreconditionError(
            "RealExpansion: coefficient count does not match the mode list");

    const DomainSpec& dom = system_->domain();
    const int d = dom.dim;
    const int per_dim = d >= 3 ? 8 : 16;
    std::vector<int> pos(d, 0);
    Point x(d);
    double max_re = 0.0, max_im = 0.0;
    for (;;) {
        for (int j = 0; j < d; ++j)
            x[j] = dom.lower[j] + (pos[j] + 0.5) * dom.length(j) / per_dim;
        Complex val = 0.0;
        for (std::size_t k = 0; k < modes_.size(); ++k)
            val += coeffs_[static_cast<Eigen::Index>(k)] *
                   system_->u(modes_[k].index, x);
        max_re = std::max(max_re, std::abs(val.real()));
        max_im = std::max(max_im, std::abs(val.imag()));
        int j = d - 1;
        while (j >= 0 && pos[j] == per_dim - 1) {
            pos[j] = 0;
            --j;
        }
        if (j < 0) break;
        ++pos[j];
    }
    scale_ = std::max(max_re, 1e-12);
    if (max_im > 1e-8 * scale_)
        throw PreconditionError(
            "RealExpansion: expansion is not real-valued within tolerance "
            "(max imaginary part " +
            std::to_string(max_im) + " against scale " +
            std::to_string(scale_) + ")");
}

double RealExpansion::value(const Point& x) const {
    Complex val = 0.0;
    for (std::size_t k = 0; k < modes_.size(); ++k)
        val += coeffs_[static_cast<Eigen::Index>(k)] *
               system_->u(modes_[k].index, x);
    return val.real();
}

void RealExpansion::gradient(const Point& x, double* g) const {
    const int d = system_->dim();
    for (int j = 0; j < d; ++j) {
        Complex val = 0.0;
        for (std::size_t k = 0; k < modes_.size(); ++k)
            val += coeffs_[static_cast<Eigen::Index>(k)] *
                   system_->u_partial(modes_[k].index, x, j);
        g[j] = val.real();
    }
}

void RealExpansion::hessian(const Point& x, double* H) const {
    const int d = system_->dim();
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            Complex val = 0.0;
            for (std::size_t m = 0; m < modes_.size(); ++m)
                val += coeffs_[static_cast<Eigen::Index>(m)] *
                       system_->u_partial2(modes_[m].index, x, j, k);
            H[j * d + k] = val.real();
            H[k * d + j] = val.real();
        }
}

SmoothFunction as_smooth_function(const RealExpansion& f) {
    auto shared = std::make_shared<const RealExpansion>(f);
    SmoothFunction out;
    out.dim = shared->system().dim();
    out.domain = shared->system().domain();
    out.value = [shared](const Point& x) { return shared->value(x); };
    out.gradient = [shared](const Point& x, double* g) {
        shared->gradient(x, g);
    };
    out.hessian = [shared](const Point& x, double* H) {
        shared->hessian(x, H);
    };
    return out;
}

namespace {

double wrap_coordinate(double t, double lo, double len) {
    double r = std::fmod(t - lo, len);
    if (r < 0.0) r += len;
    return lo + r;
}

/// Distance that respects periodic identifications coordinate-wise.
double box_distance(const Point& a, const Point& b, const DomainSpec& dom) {
    double acc = 0.0;
    for (int j = 0; j < dom.dim; ++j) {
        double diff = std::abs(a[static_cast<std::size_t>(j)] -
                               b[static_cast<std::size_t>(j)]);
        if (dom.periodic[static_cast<std::size_t>(j)])
            diff = std::min(diff, dom.length(j) - diff);
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

struct GridScan {
    std::vector<double> grad_sq;   // |grad f|^2 at cell centers
    double max_abs_value = 0.0;
    double max_grad = 0.0;
    int per_dim = 0;
};

Point cell_center(const DomainSpec& dom, const std::vector<int>& pos,
                  int per_dim) {
    Point x(static_cast<std::size_t>(dom.dim));
    for (int j = 0; j < dom.dim; ++j)
        x[static_cast<std::size_t>(j)] =
            dom.lower[static_cast<std::size_t>(j)] +
            (pos[static_cast<std::size_t>(j)] + 0.5) * dom.length(j) / per_dim;
    return x;
}

GridScan scan_grid(const SmoothFunction& f, int per_dim) {
    const int d = f.dim;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) {
        total *= static_cast<std::size_t>(per_dim);
        if (total > (1u << 24))
            throw PreconditionError("critical-point grid too large");
    }
    GridScan scan;
    scan.per_dim = per_dim;
    scan.grad_sq.resize(total);
    std::vector<int> pos(d, 0);
    std::vector<double> g(static_cast<std::size_t>(d));
    for (std::size_t cell = 0; cell < total; ++cell) {
        const Point x = cell_center(f.domain, pos, per_dim);
        scan.max_abs_value = std::max(scan.max_abs_value, std::abs(f.value(x)));
        f.gradient(x, g.data());
        double g2 = 0.0;
        for (int j = 0; j < d; ++j) g2 += g[static_cast<std::size_t>(j)] *
                                          g[static_cast<std::size_t>(j)];
        scan.grad_sq[cell] = g2;
        scan.max_grad = std::max(scan.max_grad, std::sqrt(g2));
        int j = d - 1;
        while (j >= 0 && pos[static_cast<std::size_t>(j)] == per_dim - 1) {
            pos[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j >= 0) ++pos[static_cast<std::size_t>(j)];
    }
    return scan;
}

std::size_t flat_index(const std::vector<int>& pos, int per_dim) {
    std::size_t idx = 0;
    for (int p : pos) idx = idx * static_cast<std::size_t>(per_dim) +
                            static_cast<std::size_t>(p);
    return idx;
}

/// True when the cell is a local minimum of |grad f|^2 among its (up to)
/// 3^d - 1 neighbors, wrapping periodic coordinates.
bool is_local_min(const GridScan& scan, const DomainSpec& dom,
                  const std::vector<int>& pos) {
    const int d = dom.dim;
    const double center = scan.grad_sq[flat_index(pos, scan.per_dim)];
    std::vector<int> offset(static_cast<std::size_t>(d), -1);
    std::vector<int> neighbor(static_cast<std::size_t>(d));
    for (;;) {
        bool all_zero = true;
        bool valid = true;
        for (int j = 0; j < d; ++j) {
            const auto js = static_cast<std::size_t>(j);
            if (offset[js] != 0) all_zero = false;
            int p = pos[js] + offset[js];
            if (p < 0 || p >= scan.per_dim) {
                if (dom.periodic[js]) {
                    p = (p + scan.per_dim) % scan.per_dim;
                } else {
                    valid = false;
                    break;
                }
            }
            neighbor[js] = p;
        }
        if (!all_zero && valid &&
            scan.grad_sq[flat_index(neighbor, scan.per_dim)] < center)
            return false;
        int j = d - 1;
        while (j >= 0 && offset[static_cast<std::size_t>(j)] == 1) {
            offset[static_cast<std::size_t>(j)] = -1;
            --j;
        }
        if (j < 0) break;
        ++offset[static_cast<std::size_t>(j)];
    }
    return true;
}

}  // namespace

CriticalPointResult critical_points(const SmoothFunction& f,
                                    const CriticalPointOptions& options) {
    if (!f.value || !f.gradient || !f.hessian)
        throw PreconditionError("critical_points: incomplete function bundle");
    const int d = f.dim;
    if (d < 1 || d != f.domain.dim)
        throw PreconditionError("critical_points: inconsistent dimensions");

    CriticalPointResult result;
    const GridScan scan = scan_grid(f, options.grid_per_dim);
    if (scan.max_grad <= 1e-12 * std::max(1.0, scan.max_abs_value)) {
        result.degenerate_everywhere = true;
        return result;
    }

    // Collect seeds: grid-local minima of |grad f|^2 away from non-periodic
    // boundaries.
    std::vector<Point> seeds;
    std::vector<int> pos(static_cast<std::size_t>(d), 0);
    for (;;) {
        const Point x = cell_center(f.domain, pos, scan.per_dim);
        bool margin_ok = true;
        for (int j = 0; j < d; ++j) {
            const auto js = static_cast<std::size_t>(j);
            if (f.domain.periodic[js]) continue;
            if (x[js] - f.domain.lower[js] < options.boundary_margin ||
                f.domain.upper[js] - x[js] < options.boundary_margin)
                margin_ok = false;
        }
        if (margin_ok && is_local_min(scan, f.domain, pos)) seeds.push_back(x);
        int j = d - 1;
        while (j >= 0 && pos[static_cast<std::size_t>(j)] == scan.per_dim - 1) {
            pos[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++pos[static_cast<std::size_t>(j)];
    }
    result.seeds_tried = seeds.size();

    std::vector<double> g(static_cast<std::size_t>(d));
    std::vector<double> h(static_cast<std::size_t>(d * d));
    for (const Point& seed : seeds) {
        Point x = seed;
        bool converged = false;
        bool dropped = false;
        for (int iter = 0; iter < options.newton_max_iterations; ++iter) {
            f.gradient(x, g.data());
            double gnorm = 0.0;
            for (int j = 0; j < d; ++j)
                gnorm += g[static_cast<std::size_t>(j)] *
                         g[static_cast<std::size_t>(j)];
            gnorm = std::sqrt(gnorm);
            if (gnorm <= options.newton_tolerance) {
                converged = true;
                break;
            }
            f.hessian(x, h.data());
            Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>
                H(h.data(), d, d);
            Eigen::Map<Eigen::VectorXd> G(g.data(), d);
            const Eigen::VectorXd step = H.partialPivLu().solve(G);
            if (!step.allFinite()) {
                dropped = true;
                break;
            }
            for (int j = 0; j < d; ++j) {
                const auto js = static_cast<std::size_t>(j);
                x[js] -= step[j];
                const double len = f.domain.length(j);
                if (f.domain.periodic[js]) {
                    x[js] = wrap_coordinate(x[js], f.domain.lower[js], len);
                } else if (x[js] < f.domain.lower[js] - 0.1 * len ||
                           x[js] > f.domain.upper[js] + 0.1 * len) {
                    dropped = true;
                    break;
                }
            }
            if (dropped) break;
        }
        if (!converged || dropped) {
            result.seeds_dropped += 1;
            continue;
        }
        result.seeds_converged += 1;

        bool interior = true;
        for (int j = 0; j < d; ++j) {
            const auto js = static_cast<std::size_t>(j);
            if (f.domain.periodic[js]) {
                x[js] = wrap_coordinate(x[js], f.domain.lower[js],
                                        f.domain.length(j));
            } else if (x[js] - f.domain.lower[js] < options.boundary_margin ||
                       f.domain.upper[js] - x[js] < options.boundary_margin) {
                interior = false;
            }
        }
        if (!interior) {
            result.seeds_dropped += 1;
            continue;
        }

        bool duplicate = false;
        for (const CriticalPoint& p : result.points)
            if (box_distance(p.location, x, f.domain) <=
                options.dedupe_distance) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;

        CriticalPoint point;
        point.location = x;
        point.value = f.value(x);
        f.gradient(x, g.data());
        double gnorm = 0.0;
        for (int j = 0; j < d; ++j)
            gnorm += g[static_cast<std::size_t>(j)] *
                     g[static_cast<std::size_t>(j)];
        point.gradient_norm = std::sqrt(gnorm);
        f.hessian(x, h.data());
        point.hessian.resize(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                point.hessian(r, c) =
                    0.5 * (h[static_cast<std::size_t>(r * d + c)] +
                           h[static_cast<std::size_t>(c * d + r)]);
        point.det_hessian = point.hessian.determinant();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(point.hessian,
                                                           Eigen::EigenvaluesOnly);
        point.negative_eigenvalues = 0;
        for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
            if (eig.eigenvalues()[k] < 0.0) point.negative_eigenvalues += 1;
        result.points.push_back(std::move(point));
    }

    std::sort(result.points.begin(), result.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) {
                  return a.location < b.location;
              });
    return result;
}

MorseReport morse_report(const SmoothFunction& f,
                         const CriticalPointOptions& options) {
    MorseReport report;
    CriticalPointResult found = critical_points(f, options);
    report.degenerate_everywhere = found.degenerate_everywhere;
    report.points = std::move(found.points);
    report.count = report.points.size();

    const int d = f.dim;
    bool any_degenerate = false;
    for (CriticalPoint& p : report.points) {
        // Scale-aware degeneracy: compare |det H| to the determinant scale
        // of a matrix with the same Frobenius mass.
        const double frob = p.hessian.norm() / std::sqrt(static_cast<double>(d));
        const double det_scale = std::pow(std::max(frob, 1e-300),
                                          static_cast<double>(d));
        p.degenerate = std::abs(p.det_hessian) <=
                       report.degeneracy_tolerance * det_scale;
        any_degenerate = any_degenerate || p.degenerate;
    }
    report.is_morse = !report.degenerate_everywhere && report.count > 0 &&
                      !any_degenerate;

    double vmax = 0.0;
    for (const CriticalPoint& p : report.points)
        vmax = std::max(vmax, std::abs(p.value));
    if (report.count < 2) {
        report.min_value_gap = -1.0;  // no pairs to compare
        report.distinct_values = report.count == 1;
    } else {
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < report.points.size(); ++i)
            for (std::size_t j = i + 1; j < report.points.size(); ++j)
                min_gap = std::min(min_gap, std::abs(report.points[i].value -
                                                     report.points[j].value));
        report.min_value_gap = min_gap;
        report.distinct_values =
            min_gap > report.value_tolerance * std::max(1.0, vmax);
    }
    return report;
}

}  // namespace nhs
