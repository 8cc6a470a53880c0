// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs/symexpr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>

namespace nhs::symexpr {

namespace {

constexpr std::size_t kMaxInput = 64 * 1024;
constexpr int kMaxDepth = 256;
constexpr int kMaxVarSlot = 64;

// Binding strength; unary minus sits between multiplication and the
// right-associative power operator, so -x^2 reads as -(x^2).
constexpr int kPrecAdd = 10;
constexpr int kPrecMul = 20;
constexpr int kPrecNeg = 25;
constexpr int kPrecPow = 30;

struct FuncName {
    const char* name;
    FuncId id;
};
constexpr std::array<FuncName, 6> kFunctions = {{
    {"sin", FuncId::Sin},
    {"cos", FuncId::Cos},
    {"exp", FuncId::Exp},
    {"log", FuncId::Log},
    {"abs", FuncId::Abs},
    {"sqrt", FuncId::Sqrt},
}};

const char* func_name(FuncId id) {
    for (const auto& f : kFunctions)
        if (f.id == id) return f.name;
    return "?";
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset)
    : ConfigError(message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

EvalError::EvalError(const std::string& message, std::string subexpr)
    : NumericalError(message + " in '" + subexpr + "'"),
      subexpr_(std::move(subexpr)) {}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) { advance(); }

    Expr run() {
        expr_.source_ = text_;
        expr_.root_ = parse_expr(0, 0);
        if (cur_.kind != TokKind::End)
            throw ParseError("unexpected trailing input", cur_.offset);
        return std::move(expr_);
    }

private:
    enum class TokKind { Number, Ident, Op, End };
    struct Token {
        TokKind kind = TokKind::End;
        double number = 0.0;
        std::string ident;
        char op = 0;
        std::size_t offset = 0;
    };

    void advance() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
        cur_ = Token{};
        cur_.offset = pos_;
        if (pos_ >= text_.size()) {
            cur_.kind = TokKind::End;
            return;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            double value = 0.0;
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec == std::errc::result_out_of_range)
                throw ParseError("numeric literal out of range", pos_);
            if (ec != std::errc() || ptr == begin)
                throw ParseError("malformed numeric literal", pos_);
            cur_.kind = TokKind::Number;
            cur_.number = value;
            pos_ += static_cast<std::size_t>(ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                    text_[end] == '_'))
                ++end;
            cur_.kind = TokKind::Ident;
            cur_.ident = text_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        if (std::strchr("+-*/^()", c) != nullptr) {
            cur_.kind = TokKind::Op;
            cur_.op = c;
            ++pos_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    bool at_op(char c) const {
        return cur_.kind == TokKind::Op && cur_.op == c;
    }

    int add_node(Node n) {
        if (n.kind == NodeKind::VarX)
            expr_.max_x_ = std::max(expr_.max_x_, n.payload + 1);
        if (n.kind == NodeKind::VarXi)
            expr_.max_xi_ = std::max(expr_.max_xi_, n.payload + 1);
        if (n.kind == NodeKind::Bracket) expr_.uses_bracket_ = true;
        expr_.nodes_.push_back(n);
        return static_cast<int>(expr_.nodes_.size()) - 1;
    }

    int parse_expr(int min_prec, int depth) {
        if (depth > kMaxDepth)
            throw ParseError("expression nests too deeply", cur_.offset);
        int lhs = parse_atom(depth);
        for (;;) {
            NodeKind kind;
            int prec;
            if (at_op('+')) {
                kind = NodeKind::Add;
                prec = kPrecAdd;
            } else if (at_op('-')) {
                kind = NodeKind::Sub;
                prec = kPrecAdd;
            } else if (at_op('*')) {
                kind = NodeKind::Mul;
                prec = kPrecMul;
            } else if (at_op('/')) {
                kind = NodeKind::Div;
                prec = kPrecMul;
            } else if (at_op('^')) {
                kind = NodeKind::Pow;
                prec = kPrecPow;
            } else {
                break;
            }
            if (prec < min_prec) break;
            advance();
            // Power is right-associative: its right operand re-admits the
            // same precedence level.
            const int next_min = kind == NodeKind::Pow ? prec : prec + 1;
            const int rhs = parse_expr(next_min, depth + 1);
            Node n;
            n.kind = kind;
            n.left = lhs;
            n.right = rhs;
            lhs = add_node(n);
        }
        return lhs;
    }

    int parse_atom(int depth) {
        if (depth > kMaxDepth)
            throw ParseError("expression nests too deeply", cur_.offset);
        if (at_op('-')) {
            advance();
            const int child = parse_expr(kPrecNeg + 1, depth + 1);
            Node n;
            n.kind = NodeKind::Negate;
            n.left = child;
            return add_node(n);
        }
        if (at_op('(')) {
            const std::size_t open_at = cur_.offset;
            advance();
            const int inner = parse_expr(0, depth + 1);
            if (!at_op(')'))
                throw ParseError("expected ')' to close '(' ", open_at);
            advance();
            return inner;
        }
        if (cur_.kind == TokKind::Number) {
            Node n;
            n.kind = NodeKind::Number;
            n.number = cur_.number;
            advance();
            return add_node(n);
        }
        if (cur_.kind == TokKind::Ident) {
            const std::string name = cur_.ident;
            const std::size_t at = cur_.offset;
            advance();
            for (const auto& f : kFunctions) {
                if (name == f.name) {
                    if (!at_op('('))
                        throw ParseError("expected '(' after function '" +
                                             name + "'",
                                         cur_.offset);
                    advance();
                    const int arg = parse_expr(0, depth + 1);
                    if (!at_op(')'))
                        throw ParseError("expected ')' after argument of '" +
                                             name + "'",
                                         cur_.offset);
                    advance();
                    Node n;
                    n.kind = NodeKind::Call;
                    n.payload = static_cast<int>(f.id);
                    n.left = arg;
                    return add_node(n);
                }
            }
            return add_node(parse_variable(name, at));
        }
        if (cur_.kind == TokKind::End)
            throw ParseError("unexpected end of input", cur_.offset);
        throw ParseError(std::string("unexpected token '") + cur_.op + "'",
                         cur_.offset);
    }

    Node parse_variable(const std::string& name, std::size_t at) const {
        if (name == "bracket") {
            Node n;
            n.kind = NodeKind::Bracket;
            return n;
        }
        std::size_t digits_from = 0;
        NodeKind kind;
        if (name.size() >= 2 && name[0] == 'x' && name[1] == 'i') {
            kind = NodeKind::VarXi;
            digits_from = 2;
        } else if (name.size() >= 1 && name[0] == 'x') {
            kind = NodeKind::VarX;
            digits_from = 1;
        } else {
            throw ParseError("unknown identifier '" + name + "'", at);
        }
        if (digits_from >= name.size())
            throw ParseError("variable '" + name +
                                 "' needs a 1-based index (x1, xi1, ...)",
                             at);
        int slot = 0;
        const auto [ptr, ec] = std::from_chars(
            name.data() + digits_from, name.data() + name.size(), slot);
        if (ec != std::errc() || ptr != name.data() + name.size())
            throw ParseError("unknown identifier '" + name + "'", at);
        if (slot < 1) throw ParseError("variable indices start at 1", at);
        if (slot > kMaxVarSlot)
            throw ParseError("variable index too large", at);
        Node n;
        n.kind = kind;
        n.payload = slot - 1;
        return n;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    Token cur_;
    Expr expr_;
};

Expr Expr::parse(const std::string& text) {
    if (text.size() > kMaxInput)
        throw ParseError("input exceeds the 64 KiB limit", kMaxInput);
    return Parser(text).run();
}

double Expr::eval_node(int id, const EvalContext& ctx, int depth) const {
    if (depth > kMaxDepth)
        throw EvalError("evaluation recursion too deep", subexpr_text(id));
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.kind) {
        case NodeKind::Number:
            return n.number;
        case NodeKind::VarX:
            if (static_cast<std::size_t>(n.payload) >= ctx.x.size())
                throw EvalError("coordinate variable out of range",
                                subexpr_text(id));
            return ctx.x[static_cast<std::size_t>(n.payload)];
        case NodeKind::VarXi:
            if (static_cast<std::size_t>(n.payload) >= ctx.xi.size())
                throw EvalError("frequency variable out of range",
                                subexpr_text(id));
            return ctx.xi[static_cast<std::size_t>(n.payload)];
        case NodeKind::Bracket:
            return ctx.bracket;
        case NodeKind::Negate:
            return -eval_node(n.left, ctx, depth + 1);
        case NodeKind::Add:
            return eval_node(n.left, ctx, depth + 1) +
                   eval_node(n.right, ctx, depth + 1);
        case NodeKind::Sub:
            return eval_node(n.left, ctx, depth + 1) -
                   eval_node(n.right, ctx, depth + 1);
        case NodeKind::Mul:
            return eval_node(n.left, ctx, depth + 1) *
                   eval_node(n.right, ctx, depth + 1);
        case NodeKind::Div: {
            const double num = eval_node(n.left, ctx, depth + 1);
            const double den = eval_node(n.right, ctx, depth + 1);
            if (den == 0.0) throw EvalError("division by zero", subexpr_text(id));
            return num / den;
        }
        case NodeKind::Pow: {
            const double base = eval_node(n.left, ctx, depth + 1);
            const double expo = eval_node(n.right, ctx, depth + 1);
            if (base < 0.0 && expo != std::rint(expo))
                throw EvalError("fractional power of a negative base",
                                subexpr_text(id));
            if (base == 0.0 && expo < 0.0)
                throw EvalError("zero raised to a negative power",
                                subexpr_text(id));
            return std::pow(base, expo);
        }
        case NodeKind::Call: {
            const double arg = eval_node(n.left, ctx, depth + 1);
            switch (static_cast<FuncId>(n.payload)) {
                case FuncId::Sin:
                    return std::sin(arg);
                case FuncId::Cos:
                    return std::cos(arg);
                case FuncId::Exp:
                    return std::exp(arg);
                case FuncId::Log:
                    if (arg <= 0.0)
                        throw EvalError("logarithm of a non-positive value",
                                        subexpr_text(id));
                    return std::log(arg);
                case FuncId::Abs:
                    return std::abs(arg);
                case FuncId::Sqrt:
                    if (arg < 0.0)
                        throw EvalError("square root of a negative value",
                                        subexpr_text(id));
                    return std::sqrt(arg);
            }
            break;
        }
    }
    throw EvalError("corrupt expression node", "?");
}

double Expr::evaluate(const EvalContext& ctx) const {
    if (empty()) throw PreconditionError("evaluating an empty expression");
    const double value = eval_node(root_, ctx, 0);
    if (!std::isfinite(value))
        throw EvalError("expression evaluated to a non-finite value", print());
    return value;
}

void Expr::print_node(int id, std::string& out, int parent_prec,
                      bool right_side) const {
    (void)right_side;
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    const auto wrap_open = [&](int my_prec) {
        if (my_prec < parent_prec) out += '(';
        return my_prec < parent_prec;
    };
    switch (n.kind) {
        case NodeKind::Number: {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), n.number);
            out.append(buf, ptr);
            return;
        }
        case NodeKind::VarX:
            out += 'x';
            out += std::to_string(n.payload + 1);
            return;
        case NodeKind::VarXi:
            out += "xi";
            out += std::to_string(n.payload + 1);
            return;
        case NodeKind::Bracket:
            out += "bracket";
            return;
        case NodeKind::Negate: {
            const bool wrapped = wrap_open(kPrecNeg);
            out += '-';
            print_node(n.left, out, kPrecNeg + 1, false);
            if (wrapped) out += ')';
            return;
        }
        case NodeKind::Add:
        case NodeKind::Sub: {
            const bool wrapped = wrap_open(kPrecAdd);
            print_node(n.left, out, kPrecAdd, false);
            out += n.kind == NodeKind::Add ? '+' : '-';
            print_node(n.right, out, kPrecAdd + 1, true);
            if (wrapped) out += ')';
            return;
        }
        case NodeKind::Mul:
        case NodeKind::Div: {
            const bool wrapped = wrap_open(kPrecMul);
            print_node(n.left, out, kPrecMul, false);
            out += n.kind == NodeKind::Mul ? '*' : '/';
            print_node(n.right, out, kPrecMul + 1, true);
            if (wrapped) out += ')';
            return;
        }
        case NodeKind::Pow: {
            const bool wrapped = wrap_open(kPrecPow);
            print_node(n.left, out, kPrecPow + 1, false);
            out += '^';
            print_node(n.right, out, kPrecPow, true);
            if (wrapped) out += ')';
            return;
        }
        case NodeKind::Call: {
            out += func_name(static_cast<FuncId>(n.payload));
            out += '(';
            print_node(n.left, out, 0, false);
            out += ')';
            return;
        }
    }
}

std::string Expr::print() const {
    if (empty()) return "";
    std::string out;
    print_node(root_, out, 0, false);
    return out;
}

std::string Expr::subexpr_text(int id) const {
    std::string out;
    print_node(id, out, 0, false);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    // Re-parse the canonical prints; equal canonical text is equivalent to
    // equal structure because printing is injective on parse trees.
    return a.print() == b.print();
}

}  // namespace nhs::symexpr
