// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "nhs/symexpr.hpp"
#include "nhs/types.hpp"

namespace nhs {

enum class SymbolKind { Multiplier, Separable, General };

const char* to_string(SymbolKind kind);

/// A symbol sigma(x, xi). Three structural kinds:
///   Multiplier: depends on xi only; acts diagonally.
///   Separable:  alpha(xi) + V(x).
///   General:    arbitrary dependence on (x, xi).
/// Built from parsed expressions (real-valued) or from native callables
/// (complex-valued, used by tests and the resolvent shift). An additive
/// complex shift is carried explicitly so shifted symbols keep their kind.
class Symbol {
public:
    /// Structural validation: a Multiplier expression must not use x
    /// variables; a Separable potential must not use xi or bracket.
    static Symbol multiplier(symexpr::Expr sigma_of_xi);
    static Symbol separable(symexpr::Expr alpha_of_xi,
                            symexpr::Expr potential_of_x);
    static Symbol general(symexpr::Expr sigma);

    /// Infers the kind of a single expression from the variables it uses:
    /// no x dependence gives a Multiplier, otherwise General.
    static Symbol from_expression(const std::string& text);

    using MultiplierFn = std::function<Complex(const EigenData&)>;
    using GeneralFn =
        std::function<Complex(const Point&, const EigenData&)>;
    static Symbol multiplier_fn(MultiplierFn fn, std::string label);
    static Symbol general_fn(GeneralFn fn, std::string label);

    SymbolKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    Complex shift() const { return shift_; }

    /// sigma(x, xi) minus the carried shift.
    Complex value(const Point& x, const EigenData& xi) const;
    /// Multiplier / Separable xi-part only; throws PreconditionError for
    /// General symbols.
    Complex xi_part(const EigenData& xi) const;
    /// Separable x-part; zero for Multiplier, throws for General.
    double x_part(const Point& x) const;

    bool depends_on_x() const { return kind_ != SymbolKind::Multiplier; }

    /// The symbol sigma - lambda (same kind, shift folded into the carried
    /// constant). Used for resolvent membership.
    Symbol shifted(Complex lambda) const;

private:
    Symbol() = default;
    SymbolKind kind_ = SymbolKind::Multiplier;
    symexpr::Expr alpha_;      // Multiplier and Separable xi-part, General full
    symexpr::Expr potential_;  // Separable x-part
    MultiplierFn mult_fn_;
    GeneralFn general_fn_;
    Complex shift_{0.0, 0.0};
    std::string label_;
};

}  // namespace nhs
