// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/symbol.hpp"

#include <array>

#include "nhs/errors.hpp"

namespace nhs {

const char* to_string(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Multiplier:
            return "multiplier";
        case SymbolKind::Separable:
            return "separable";
        case SymbolKind::General:
            return "general";
    }
    return "?";
}

namespace {

constexpr std::size_t kMaxLatticeDim = 16;

/// Lattice coordinates as doubles in a fixed-size buffer; avoids a heap
/// allocation per evaluation in the hot assembly loops.
std::size_t fill_xi(const EigenData& xi, std::array<double, kMaxLatticeDim>& buf) {
    const std::size_t n = std::min(xi.index.size(), kMaxLatticeDim);
    for (std::size_t j = 0; j < n; ++j)
        buf[j] = static_cast<double>(xi.index[j]);
    return n;
}

}  // namespace

Symbol Symbol::multiplier(symexpr::Expr sigma_of_xi) {
    if (sigma_of_xi.depends_on_x())
        throw ConfigError("a multiplier symbol must not use x variables");
    Symbol s;
    s.kind_ = SymbolKind::Multiplier;
    s.label_ = sigma_of_xi.print();
    s.alpha_ = std::move(sigma_of_xi);
    return s;
}

Symbol Symbol::separable(symexpr::Expr alpha_of_xi,
                         symexpr::Expr potential_of_x) {
    if (alpha_of_xi.depends_on_x())
        throw ConfigError("the frequency part of a separable symbol must not "
                          "use x variables");
    if (potential_of_x.depends_on_xi())
        throw ConfigError("the potential of a separable symbol must not use "
                          "xi variables or bracket");
    Symbol s;
    s.kind_ = SymbolKind::Separable;
    s.label_ = alpha_of_xi.print() + " + " + potential_of_x.print();
    s.alpha_ = std::move(alpha_of_xi);
    s.potential_ = std::move(potential_of_x);
    return s;
}

Symbol Symbol::general(symexpr::Expr sigma) {
    Symbol s;
    s.kind_ = SymbolKind::General;
    s.label_ = sigma.print();
    s.alpha_ = std::move(sigma);
    return s;
}

Symbol Symbol::from_expression(const std::string& text) {
    symexpr::Expr e = symexpr::Expr::parse(text);
    if (!e.depends_on_x()) return multiplier(std::move(e));
    return general(std::move(e));
}

Symbol Symbol::multiplier_fn(MultiplierFn fn, std::string label) {
    if (!fn) throw PreconditionError("multiplier_fn: null callable");
    Symbol s;
    s.kind_ = SymbolKind::Multiplier;
    s.mult_fn_ = std::move(fn);
    s.label_ = std::move(label);
    return s;
}

Symbol Symbol::general_fn(GeneralFn fn, std::string label) {
    if (!fn) throw PreconditionError("general_fn: null callable");
    Symbol s;
    s.kind_ = SymbolKind::General;
    s.general_fn_ = std::move(fn);
    s.label_ = std::move(label);
    return s;
}

Complex Symbol::value(const Point& x, const EigenData& xi) const {
    switch (kind_) {
        case SymbolKind::Multiplier:
            return xi_part(xi);
        case SymbolKind::Separable:
            return xi_part(xi) + Complex(x_part(x), 0.0);
        case SymbolKind::General: {
            if (general_fn_) return general_fn_(x, xi) - shift_;
            std::array<double, kMaxLatticeDim> buf{};
            const std::size_t n = fill_xi(xi, buf);
            symexpr::EvalContext ctx;
            ctx.x = std::span<const double>(x.data(), x.size());
            ctx.xi = std::span<const double>(buf.data(), n);
            ctx.bracket = xi.bracket;
            return Complex(alpha_.evaluate(ctx), 0.0) - shift_;
        }
    }
    throw PreconditionError("corrupt symbol kind");
}

Complex Symbol::xi_part(const EigenData& xi) const {
    if (kind_ == SymbolKind::General)
        throw PreconditionError(
            "xi_part is undefined for a general symbol; it mixes x and xi");
    if (mult_fn_) return mult_fn_(xi) - shift_;
    std::array<double, kMaxLatticeDim> buf{};
    const std::size_t n = fill_xi(xi, buf);
    symexpr::EvalContext ctx;
    ctx.xi = std::span<const double>(buf.data(), n);
    ctx.bracket = xi.bracket;
    return Complex(alpha_.evaluate(ctx), 0.0) - shift_;
}

double Symbol::x_part(const Point& x) const {
    if (kind_ == SymbolKind::Multiplier) return 0.0;
    if (kind_ == SymbolKind::General)
        throw PreconditionError(
            "x_part is undefined for a general symbol; it mixes x and xi");
    symexpr::EvalContext ctx;
    ctx.x = std::span<const double>(x.data(), x.size());
    return potential_.evaluate(ctx);
}

Symbol Symbol::shifted(Complex lambda) const {
    Symbol s = *this;
    s.shift_ += lambda;
    s.label_ = label_ + " - (" + std::to_string(s.shift_.real()) + "+" +
               std::to_string(s.shift_.imag()) + "i)";
    return s;
}

}  // namespace nhs
