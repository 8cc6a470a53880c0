// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nhs/errors.hpp"
#include "nhs/types.hpp"

namespace nhs::symexpr {

/// Raised for lexer and parser failures; carries the byte offset of the
/// offending token in the source text.
class ParseError : public ConfigError {
public:
    ParseError(const std::string& message, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Raised when evaluation hits a real-arithmetic domain violation (log of a
/// non-positive value, division by zero, fractional power of a negative
/// base); identifies the offending sub-expression.
class EvalError : public NumericalError {
public:
    EvalError(const std::string& message, std::string subexpr);
    const std::string& subexpression() const { return subexpr_; }

private:
    std::string subexpr_;
};

enum class NodeKind : unsigned char {
    Number,
    VarX,      // x1..xd, payload: zero-based coordinate
    VarXi,     // xi1..xil, payload: zero-based slot
    Bracket,   // the frequency weight of the bound system
    Negate,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Call,      // payload: function id
};

enum class FuncId : unsigned char { Sin, Cos, Exp, Log, Abs, Sqrt };

struct Node {
    NodeKind kind;
    int payload = 0;        // variable slot or function id
    double number = 0.0;
    int left = -1;          // child node ids into the arena
    int right = -1;
};

/// Values bound to the free variables during evaluation. xi holds the
/// lattice coordinates as reals; bracket the frequency weight.
struct EvalContext {
    std::span<const double> x;
    std::span<const double> xi;
    double bracket = 1.0;
};

/// A parsed, immutable expression over x1..xd, xi1..xil and bracket.
/// Arithmetic: + - * / ^ with ^ right-associative and binding tighter than
/// unary minus; functions sin, cos, exp, log, abs, sqrt. Evaluation is
/// real-valued and pure.
class Expr {
public:
    Expr() = default;

    /// Parses text; throws ParseError with the byte offset on failure.
    /// Accepts inputs up to 64 KiB and bounded nesting depth.
    static Expr parse(const std::string& text);

    bool empty() const { return nodes_.empty(); }

    /// Highest x / xi variable actually used (0 when unused); lets callers
    /// validate an expression against a system's dimensions.
    int max_x_var() const { return max_x_; }
    int max_xi_var() const { return max_xi_; }
    bool uses_bracket() const { return uses_bracket_; }
    bool depends_on_x() const { return max_x_ > 0; }
    bool depends_on_xi() const { return max_xi_ > 0 || uses_bracket_; }

    double evaluate(const EvalContext& ctx) const;

    /// Canonical form with minimal parentheses; parse(print(e)) is
    /// structurally equal to e and printing is idempotent.
    std::string print() const;

    const std::string& source() const { return source_; }

private:
    std::vector<Node> nodes_;
    int root_ = -1;
    int max_x_ = 0;
    int max_xi_ = 0;
    bool uses_bracket_ = false;
    std::string source_;

    friend class Parser;
    double eval_node(int id, const EvalContext& ctx, int depth) const;
    void print_node(int id, std::string& out, int parent_prec,
                    bool right_side) const;
    std::string subexpr_text(int id) const;
};

/// Structural equality of two parsed expressions (tree shape, payloads and
/// literal values; source text is ignored).
bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace nhs::symexpr
