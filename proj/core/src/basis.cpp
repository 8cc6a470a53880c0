// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nhs/errors.hpp"

namespace nhs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

DomainSpec make_box(std::vector<double> lower, std::vector<double> upper,
                    std::vector<bool> periodic) {
    DomainSpec d;
    d.dim = static_cast<int>(lower.size());
    d.lower = std::move(lower);
    d.upper = std::move(upper);
    d.periodic = std::move(periodic);
    d.measure_normalizer = 1.0;
    for (int j = 0; j < d.dim; ++j) {
        if (!(d.upper[j] > d.lower[j]) || !std::isfinite(d.lower[j]) ||
            !std::isfinite(d.upper[j])) {
            throw ConfigError("domain interval " + std::to_string(j) +
                              " is empty or unbounded");
        }
        d.measure_normalizer *= d.length(j);
    }
    return d;
}

/// All integer vectors of length d with entries in [-radius, radius].
std::vector<Index> integer_box(int d, long radius) {
    std::vector<Index> out;
    Index cur(d, -radius);
    for (;;) {
        out.push_back(cur);
        int j = d - 1;
        while (j >= 0 && cur[j] == radius) {
            cur[j] = -radius;
            --j;
        }
        if (j < 0) break;
        ++cur[j];
    }
    return out;
}

bool lex_positive(const Index& xi, int d) {
    for (int j = 0; j < d; ++j) {
        if (xi[j] > 0) return true;
        if (xi[j] < 0) return false;
    }
    return false;  // zero
}

// ---------------------------------------------------------------------------
// Flat torus: exponentials exp(i x.xi) on (0,2pi)^d, orthonormal.
class TorusSystem final : public BiorthogonalSystem {
public:
    explicit TorusSystem(int d) {
        if (d < 1) throw ConfigError("torus dimension must be positive");
        domain_ = make_box(std::vector<double>(d, 0.0),
                           std::vector<double>(d, kTwoPi),
                           std::vector<bool>(d, true));
        name_ = "torus";
        lattice_dim_ = d;
        growth_constant_ = 1.0;
        growth_exponent_ = 0.0;
        summability_exponent_ = d + 1;
        real_valued_ = false;
    }

    Complex eigenvalue(const Index& xi) const override {
        double s = 0.0;
        for (long k : xi) s += static_cast<double>(k) * static_cast<double>(k);
        return {-s, 0.0};
    }

    Complex u(const Index& xi, std::span<const double> x) const override {
        return phase(xi, x);
    }
    Complex v(const Index& xi, std::span<const double> x) const override {
        return phase(xi, x);
    }
    Complex u_partial(const Index& xi, std::span<const double> x,
                      int j) const override {
        return Complex(0.0, static_cast<double>(xi[j])) * phase(xi, x);
    }
    Complex u_partial2(const Index& xi, std::span<const double> x, int j,
                       int k) const override {
        return -static_cast<double>(xi[j]) * static_cast<double>(xi[k]) *
               phase(xi, x);
    }

    std::vector<Index> lattice_window(long radius) const override {
        return integer_box(domain_.dim, radius);
    }
    double min_bracket_outside(long radius) const override {
        const double r = static_cast<double>(radius + 1);
        return bracket_of(Complex(-r * r, 0.0), order_m_);
    }
    long resolution_frequency(const Index& xi) const override {
        long m = 0;
        for (long k : xi) m = std::max(m, std::labs(k));
        return m;
    }

private:
    Complex phase(const Index& xi, std::span<const double> x) const {
        double t = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j)
            t += static_cast<double>(xi[j]) * x[j];
        return std::polar(1.0, t);
    }
};

// ---------------------------------------------------------------------------
// Twisted exponentials: u = h^(x/2pi) exp(i x.xi), v with the reciprocal
// factor. Writing c_j = ln(h_j)/2pi, u = exp(sum (c_j + i xi_j) x_j) and
// lambda = sum (c_j^2 - xi_j^2) + 2i sum c_j xi_j.
class HTwistedSystem final : public BiorthogonalSystem {
public:
    HTwistedSystem(int d, std::vector<double> h) : c_(d), sum_c2_(0.0) {
        if (d < 1) throw ConfigError("twisted torus dimension must be positive");
        if (static_cast<int>(h.size()) == 1 && d > 1) h.resize(d, h[0]);
        if (static_cast<int>(h.size()) != d)
            throw ConfigError("twist parameter h must have one entry per dimension");
        double cb = 1.0;
        for (int j = 0; j < d; ++j) {
            if (!(h[j] > 0.0))
                throw ConfigError("twist parameter h must be strictly positive");
            c_[j] = std::log(h[j]) / kTwoPi;
            sum_c2_ += c_[j] * c_[j];
            cb *= std::max(h[j], 1.0 / h[j]);
        }
        domain_ = make_box(std::vector<double>(d, 0.0),
                           std::vector<double>(d, kTwoPi),
                           std::vector<bool>(d, false));
        name_ = "h_twisted";
        lattice_dim_ = d;
        growth_constant_ = cb;
        growth_exponent_ = 0.0;
        summability_exponent_ = d + 1;
        real_valued_ = false;
    }

    Complex eigenvalue(const Index& xi) const override {
        double re = sum_c2_;
        double im = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j) {
            const double k = static_cast<double>(xi[j]);
            re -= k * k;
            im += 2.0 * c_[j] * k;
        }
        return {re, im};
    }

    Complex u(const Index& xi, std::span<const double> x) const override {
        return std::exp(exponent(xi, x));
    }
    Complex v(const Index& xi, std::span<const double> x) const override {
        Complex e = exponent(xi, x);
        double twist = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j) twist += c_[j] * x[j];
        return std::exp(Complex(e.real() - 2.0 * twist, e.imag()));
    }
    Complex u_partial(const Index& xi, std::span<const double> x,
                      int j) const override {
        return Complex(c_[j], static_cast<double>(xi[j])) * u(xi, x);
    }
    Complex u_partial2(const Index& xi, std::span<const double> x, int j,
                       int k) const override {
        return Complex(c_[j], static_cast<double>(xi[j])) *
               Complex(c_[k], static_cast<double>(xi[k])) * u(xi, x);
    }

    std::vector<Index> lattice_window(long radius) const override {
        return integer_box(domain_.dim, radius);
    }
    double min_bracket_outside(long radius) const override {
        const double r = static_cast<double>(radius + 1);
        const double abs_lower = std::max(0.0, r * r - sum_c2_);
        return bracket_of(Complex(abs_lower, 0.0), order_m_);
    }
    long resolution_frequency(const Index& xi) const override {
        long m = 0;
        for (long k : xi) m = std::max(m, std::labs(k));
        double cmax = 0.0;
        for (double cj : c_) cmax = std::max(cmax, std::abs(cj));
        return m + static_cast<long>(std::ceil(cmax));
    }

private:
    Complex exponent(const Index& xi, std::span<const double> x) const {
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j) {
            re += c_[j] * x[j];
            im += static_cast<double>(xi[j]) * x[j];
        }
        return {re, im};
    }
    std::vector<double> c_;
    double sum_c2_;
};

// ---------------------------------------------------------------------------
// Real twisted family: sqrt(2) h^(x/2pi) cos(x.xi) / sin(x.xi) against
// reciprocal-twisted partners. The lattice index carries the xi vector plus
// a trailing parity slot (0 = cosine, 1 = sine); xi runs over
// lexicographically positive representatives, with the constant at xi = 0
// (cosine only, factor 1). Eigenvalues are real: -|xi|^2 - sum c_j^2.
class HTwistedRealSystem final : public BiorthogonalSystem {
public:
    HTwistedRealSystem(int d, std::vector<double> h) : c_(d), sum_c2_(0.0) {
        if (d < 1) throw ConfigError("twisted torus dimension must be positive");
        if (static_cast<int>(h.size()) == 1 && d > 1) h.resize(d, h[0]);
        if (static_cast<int>(h.size()) != d)
            throw ConfigError("twist parameter h must have one entry per dimension");
        double cb = 1.0;
        for (int j = 0; j < d; ++j) {
            if (!(h[j] > 0.0))
                throw ConfigError("twist parameter h must be strictly positive");
            c_[j] = std::log(h[j]) / kTwoPi;
            sum_c2_ += c_[j] * c_[j];
            cb *= std::max(h[j], 1.0 / h[j]);
        }
        domain_ = make_box(std::vector<double>(d, 0.0),
                           std::vector<double>(d, kTwoPi),
                           std::vector<bool>(d, false));
        name_ = "h_twisted_real";
        lattice_dim_ = d + 1;
        growth_constant_ = std::numbers::sqrt2 * cb;
        growth_exponent_ = 0.0;
        summability_exponent_ = d + 1;
        real_valued_ = true;
    }

    Complex eigenvalue(const Index& xi) const override {
        double s = 0.0;
        for (int j = 0; j + 1 < static_cast<int>(xi.size()); ++j) {
            const double k = static_cast<double>(xi[j]);
            s += k * k;
        }
        return {-s - sum_c2_, 0.0};
    }

    Complex u(const Index& xi, std::span<const double> x) const override {
        return {scale(xi) * std::exp(twist(x)) * trig(xi, x, 0), 0.0};
    }
    Complex v(const Index& xi, std::span<const double> x) const override {
        return {scale(xi) * std::exp(-twist(x)) * trig(xi, x, 0), 0.0};
    }
    Complex u_partial(const Index& xi, std::span<const double> x,
                      int j) const override {
        const double e = std::exp(twist(x));
        const double kj = static_cast<double>(xi[j]);
        return {scale(xi) * e * (c_[j] * trig(xi, x, 0) + kj * trig(xi, x, 1)),
                0.0};
    }
    Complex u_partial2(const Index& xi, std::span<const double> x, int j,
                       int k) const override {
        const double e = std::exp(twist(x));
        const double kj = static_cast<double>(xi[j]);
        const double kk = static_cast<double>(xi[k]);
        const double t0 = trig(xi, x, 0);
        const double t1 = trig(xi, x, 1);
        return {scale(xi) * e *
                    (c_[j] * c_[k] * t0 + (c_[j] * kk + c_[k] * kj) * t1 -
                     kj * kk * t0),
                0.0};
    }

    std::vector<Index> lattice_window(long radius) const override {
        const int d = domain_.dim;
        std::vector<Index> out;
        for (Index xi : integer_box(d, radius)) {
            const bool zero = std::all_of(xi.begin(), xi.end(),
                                          [](long k) { return k == 0; });
            if (zero) {
                xi.push_back(0);
                out.push_back(xi);
            } else if (lex_positive(xi, d)) {
                xi.push_back(0);
                out.push_back(xi);
                xi.back() = 1;
                out.push_back(xi);
            }
        }
        return out;
    }
    double min_bracket_outside(long radius) const override {
        const double r = static_cast<double>(radius + 1);
        return bracket_of(Complex(-(r * r + sum_c2_), 0.0), order_m_);
    }
    long resolution_frequency(const Index& xi) const override {
        long m = 0;
        for (int j = 0; j + 1 < static_cast<int>(xi.size()); ++j)
            m = std::max(m, std::labs(xi[j]));
        double cmax = 0.0;
        for (double cj : c_) cmax = std::max(cmax, std::abs(cj));
        return m + static_cast<long>(std::ceil(cmax));
    }

private:
    double scale(const Index& xi) const {
        for (int j = 0; j + 1 < static_cast<int>(xi.size()); ++j)
            if (xi[j] != 0) return std::numbers::sqrt2;
        return 1.0;
    }
    double twist(std::span<const double> x) const {
        double t = 0.0;
        for (std::size_t j = 0; j < c_.size(); ++j) t += c_[j] * x[j];
        return t;
    }
    // trig(.., 0) is the basis factor itself; trig(.., 1) its derivative
    // with respect to the phase (cos -> -sin, sin -> cos).
    double trig(const Index& xi, std::span<const double> x, int deriv) const {
        double theta = 0.0;
        for (int j = 0; j + 1 < static_cast<int>(xi.size()); ++j)
            theta += static_cast<double>(xi[j]) * x[j];
        const bool sine = xi.back() == 1;
        if (deriv == 0) return sine ? std::sin(theta) : std::cos(theta);
        return sine ? std::cos(theta) : -std::sin(theta);
    }
    std::vector<double> c_;
    double sum_c2_;
};

// ---------------------------------------------------------------------------
// Neumann cosines on (0,2pi a) x (0,2pi b).
class NeumannRectSystem final : public BiorthogonalSystem {
public:
    NeumannRectSystem(double a, double b) : a_(a), b_(b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw ConfigError("rectangle parameters a, b must be positive");
        domain_ = make_box({0.0, 0.0}, {kTwoPi * a, kTwoPi * b}, {true, true});
        name_ = "neumann_rect";
        lattice_dim_ = 2;
        growth_constant_ = 2.0;
        growth_exponent_ = 0.0;
        summability_exponent_ = 3.0;
        real_valued_ = true;
    }

    Complex eigenvalue(const Index& xi) const override {
        const double n = static_cast<double>(xi[0]) / a_;
        const double m = static_cast<double>(xi[1]) / b_;
        return {-n * n - m * m, 0.0};
    }

    Complex u(const Index& xi, std::span<const double> x) const override {
        return {factor(xi[0]) * factor(xi[1]) * cx(xi, x, 0) * cy(xi, x, 0),
                0.0};
    }
    Complex v(const Index& xi, std::span<const double> x) const override {
        return u(xi, x);
    }
    Complex u_partial(const Index& xi, std::span<const double> x,
                      int j) const override {
        const double s = factor(xi[0]) * factor(xi[1]);
        if (j == 0) return {s * cx(xi, x, 1) * cy(xi, x, 0), 0.0};
        return {s * cx(xi, x, 0) * cy(xi, x, 1), 0.0};
    }
    Complex u_partial2(const Index& xi, std::span<const double> x, int j,
                       int k) const override {
        const double s = factor(xi[0]) * factor(xi[1]);
        if (j == k) {
            if (j == 0) return {s * cx(xi, x, 2) * cy(xi, x, 0), 0.0};
            return {s * cx(xi, x, 0) * cy(xi, x, 2), 0.0};
        }
        return {s * cx(xi, x, 1) * cy(xi, x, 1), 0.0};
    }

    std::vector<Index> lattice_window(long radius) const override {
        std::vector<Index> out;
        for (long n = 0; n <= radius; ++n)
            for (long m = 0; m <= radius; ++m) out.push_back({n, m});
        return out;
    }
    double min_bracket_outside(long radius) const override {
        const double r = static_cast<double>(radius + 1) / std::max(a_, b_);
        return bracket_of(Complex(-r * r, 0.0), order_m_);
    }
    long resolution_frequency(const Index& xi) const override {
        return std::max(xi[0], xi[1]);
    }

private:
    static double factor(long k) { return k == 0 ? 1.0 : std::numbers::sqrt2; }
    double cx(const Index& xi, std::span<const double> x, int deriv) const {
        const double w = static_cast<double>(xi[0]) / a_;
        const double t = w * x[0];
        if (deriv == 0) return std::cos(t);
        if (deriv == 1) return -w * std::sin(t);
        return -w * w * std::cos(t);
    }
    double cy(const Index& xi, std::span<const double> x, int deriv) const {
        const double w = static_cast<double>(xi[1]) / b_;
        const double t = w * x[1];
        if (deriv == 0) return std::cos(t);
        if (deriv == 1) return -w * std::sin(t);
        return -w * w * std::cos(t);
    }
    double a_, b_;
};

// ---------------------------------------------------------------------------
// Interval system with associated functions on (0,1):
//   u_0 = x,  u_{2k-1} = sin(2 pi k x),  u_{2k} = x cos(2 pi k x)
//   v_0 = 2,  v_{2k-1} = 4 (1-x) sin(2 pi k x),  v_{2k} = 4 cos(2 pi k x)
// lambda_0 = 0 and lambda_{2k-1} = lambda_{2k} = (2 pi k)^2; the even,
// associated elements satisfy the eigen-relation only up to a coupling term.
class IonkinSystem final : public BiorthogonalSystem {
public:
    IonkinSystem() {
        domain_ = make_box({0.0}, {1.0}, {false});
        name_ = "ionkin";
        lattice_dim_ = 1;
        growth_constant_ = 1.0;
        growth_exponent_ = 0.0;
        summability_exponent_ = 2.0;
        real_valued_ = true;
    }

    Complex eigenvalue(const Index& xi) const override {
        const double k = static_cast<double>((xi[0] + 1) / 2);
        const double w = kTwoPi * k;
        return {w * w, 0.0};
    }

    Complex u(const Index& xi, std::span<const double> x) const override {
        const long n = xi[0];
        const double t = x[0];
        if (n == 0) return {t, 0.0};
        const double w = kTwoPi * static_cast<double>((n + 1) / 2);
        if (n % 2 == 1) return {std::sin(w * t), 0.0};
        return {t * std::cos(w * t), 0.0};
    }
    Complex v(const Index& xi, std::span<const double> x) const override {
        const long n = xi[0];
        const double t = x[0];
        if (n == 0) return {2.0, 0.0};
        const double w = kTwoPi * static_cast<double>((n + 1) / 2);
        if (n % 2 == 1) return {4.0 * (1.0 - t) * std::sin(w * t), 0.0};
        return {4.0 * std::cos(w * t), 0.0};
    }
    Complex u_partial(const Index& xi, std::span<const double> x,
                      int) const override {
        const long n = xi[0];
        const double t = x[0];
        if (n == 0) return {1.0, 0.0};
        const double w = kTwoPi * static_cast<double>((n + 1) / 2);
        if (n % 2 == 1) return {w * std::cos(w * t), 0.0};
        return {std::cos(w * t) - w * t * std::sin(w * t), 0.0};
    }
    Complex u_partial2(const Index& xi, std::span<const double> x, int,
                       int) const override {
        const long n = xi[0];
        const double t = x[0];
        if (n == 0) return {0.0, 0.0};
        const double w = kTwoPi * static_cast<double>((n + 1) / 2);
        if (n % 2 == 1) return {-w * w * std::sin(w * t), 0.0};
        return {-2.0 * w * std::sin(w * t) - w * w * t * std::cos(w * t), 0.0};
    }

    std::vector<Index> lattice_window(long radius) const override {
        std::vector<Index> out;
        for (long n = 0; n <= radius; ++n) out.push_back({n});
        return out;
    }
    double min_bracket_outside(long radius) const override {
        const double k = static_cast<double>((radius + 2) / 2);
        const double w = kTwoPi * k;
        return bracket_of(Complex(w * w, 0.0), order_m_);
    }
    long resolution_frequency(const Index& xi) const override {
        return (xi[0] + 1) / 2;
    }
    bool eigenrelation_holds(const Index& xi) const override {
        return xi[0] == 0 || xi[0] % 2 == 1;
    }
};

// ---------------------------------------------------------------------------
// Product sines with half-integer x-frequencies on (-pi,pi) x (-pi/2,pi/2).
class MoebiusSystem final : public BiorthogonalSystem {
public:
    MoebiusSystem() {
        domain_ = make_box({-kPi, -kPi / 2.0}, {kPi, kPi / 2.0}, {false, true});
        name_ = "moebius";
        lattice_dim_ = 2;
        growth_constant_ = 2.0;
        growth_exponent_ = 0.0;
        summability_exponent_ = 3.0;
        real_valued_ = true;
    }

    Complex eigenvalue(const Index& xi) const override {
        const double p = (2.0 * static_cast<double>(xi[0]) + 1.0) / 2.0;
        const double q = 2.0 * static_cast<double>(xi[1]);
        return {-p * p - q * q, 0.0};
    }

    Complex u(const Index& xi, std::span<const double> x) const override {
        return {2.0 * sx(xi, x, 0) * sy(xi, x, 0), 0.0};
    }
    Complex v(const Index& xi, std::span<const double> x) const override {
        return u(xi, x);
    }
    Complex u_partial(const Index& xi, std::span<const double> x,
                      int j) const override {
        if (j == 0) return {2.0 * sx(xi, x, 1) * sy(xi, x, 0), 0.0};
        return {2.0 * sx(xi, x, 0) * sy(xi, x, 1), 0.0};
    }
    Complex u_partial2(const Index& xi, std::span<const double> x, int j,
                       int k) const override {
        if (j == k) {
            if (j == 0) return {2.0 * sx(xi, x, 2) * sy(xi, x, 0), 0.0};
            return {2.0 * sx(xi, x, 0) * sy(xi, x, 2), 0.0};
        }
        return {2.0 * sx(xi, x, 1) * sy(xi, x, 1), 0.0};
    }

    std::vector<Index> lattice_window(long radius) const override {
        std::vector<Index> out;
        for (long m = 0; m <= radius; ++m)
            for (long n = 1; n <= radius; ++n) out.push_back({m, n});
        return out;
    }
    double min_bracket_outside(long radius) const override {
        const double r = static_cast<double>(radius + 1);
        const double via_m = (2.0 * r + 1.0) * (2.0 * r + 1.0) / 4.0 + 4.0;
        const double via_n = 0.25 + 4.0 * r * r;
        return bracket_of(Complex(-std::min(via_m, via_n), 0.0), order_m_);
    }
    long resolution_frequency(const Index& xi) const override {
        return std::max(xi[0] + 1, xi[1]);
    }

private:
    double sx(const Index& xi, std::span<const double> x, int deriv) const {
        const double w = (2.0 * static_cast<double>(xi[0]) + 1.0) / 2.0;
        const double t = w * x[0];
        if (deriv == 0) return std::sin(t);
        if (deriv == 1) return w * std::cos(t);
        return -w * w * std::sin(t);
    }
    double sy(const Index& xi, std::span<const double> x, int deriv) const {
        const double w = 2.0 * static_cast<double>(xi[1]);
        const double t = w * x[1];
        if (deriv == 0) return std::sin(t);
        if (deriv == 1) return w * std::cos(t);
        return -w * w * std::sin(t);
    }
};

}  // namespace

double bracket_of(Complex lambda, int order_m) {
    return std::pow(1.0 + std::norm(lambda), 1.0 / (2.0 * order_m));
}

std::string format_index(const Index& idx) {
    std::ostringstream out;
    out << '(';
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (j) out << ',';
        out << idx[j];
    }
    out << ')';
    return out.str();
}

std::string format_point(const Point& x) {
    std::ostringstream out;
    out << '(';
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j) out << ',';
        out << x[j];
    }
    out << ')';
    return out.str();
}

EigenData BiorthogonalSystem::eigen_data(const Index& xi) const {
    EigenData d;
    d.index = xi;
    d.lambda = eigenvalue(xi);
    d.order_m = order_m_;
    d.bracket = bracket_of(d.lambda, order_m_);
    return d;
}

SystemPtr make_torus(int d) { return std::make_shared<TorusSystem>(d); }

SystemPtr make_h_twisted(int d, std::vector<double> h) {
    return std::make_shared<HTwistedSystem>(d, std::move(h));
}

SystemPtr make_h_twisted_real(int d, std::vector<double> h) {
    return std::make_shared<HTwistedRealSystem>(d, std::move(h));
}

SystemPtr make_neumann_rect(double a, double b) {
    return std::make_shared<NeumannRectSystem>(a, b);
}

SystemPtr make_ionkin() { return std::make_shared<IonkinSystem>(); }

SystemPtr make_moebius() { return std::make_shared<MoebiusSystem>(); }

SystemPtr make_system(const std::string& name, int d,
                      const std::vector<double>& h, double a, double b) {
    if (name == "torus") return make_torus(d);
    if (name == "h_twisted") return make_h_twisted(d, h);
    if (name == "h_twisted_real") return make_h_twisted_real(d, h);
    if (name == "neumann_rect") return make_neumann_rect(a, b);
    if (name == "ionkin") return make_ionkin();
    if (name == "moebius") return make_moebius();
    throw ConfigError("unknown basis family: " + name);
}

namespace {

bool eigen_less(const EigenData& a, const EigenData& b) {
    if (a.bracket != b.bracket) return a.bracket < b.bracket;
    return a.index < b.index;
}

std::vector<EigenData> window_data(const BiorthogonalSystem& system,
                                   long radius) {
    std::vector<EigenData> data;
    for (const Index& xi : system.lattice_window(radius))
        data.push_back(system.eigen_data(xi));
    std::sort(data.begin(), data.end(), eigen_less);
    return data;
}

}  // namespace

std::vector<EigenData> enumerate_indices(const BiorthogonalSystem& system,
                                         std::size_t count) {
    if (count == 0) throw PreconditionError("enumeration count must be positive");
    for (long radius = 2;; radius *= 2) {
        auto data = window_data(system, radius);
        if (data.size() >= count &&
            data[count - 1].bracket < system.min_bracket_outside(radius)) {
            data.resize(count);
            return data;
        }
        if (radius > (1L << 40))
            throw NumericalError("enumeration window exceeded its growth cap");
    }
}

std::vector<EigenData> enumerate_up_to_bracket(const BiorthogonalSystem& system,
                                               double max_bracket) {
    if (!(max_bracket >= 1.0))
        throw PreconditionError("bracket cutoff must be at least 1");
    long radius = 2;
    while (system.min_bracket_outside(radius) < max_bracket) {
        radius *= 2;
        if (radius > (1L << 40))
            throw NumericalError("enumeration window exceeded its growth cap");
    }
    auto data = window_data(system, radius);
    std::erase_if(data, [&](const EigenData& d) {
        return !(d.bracket < max_bracket);
    });
    return data;
}

std::vector<double> summability_partial_sums(
    const BiorthogonalSystem& system, double s,
    const std::vector<std::size_t>& counts) {
    if (counts.empty()) return {};
    const std::size_t top = *std::max_element(counts.begin(), counts.end());
    auto modes = enumerate_indices(system, top);
    std::vector<double> prefix(top + 1, 0.0);
    for (std::size_t i = 0; i < top; ++i)
        prefix[i + 1] = prefix[i] + std::pow(modes[i].bracket, -s);
    std::vector<double> out;
    out.reserve(counts.size());
    for (std::size_t c : counts) out.push_back(prefix[c]);
    return out;
}

}  // namespace nhs
