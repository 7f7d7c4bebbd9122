#include "slspec/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

namespace slspec {
namespace detail {

enum class NodeKind { Constant, Variable, Unary, Binary, Call };

enum class BinOp { Add, Sub, Mul, Div, Pow };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Abs, Re, Im, Conj };

struct ExprNode {
    NodeKind kind;
    cplx value{};                 // Constant
    BinOp op{};                   // Binary
    Func func{};                  // Call
    std::shared_ptr<const ExprNode> lhs; // Binary lhs, Unary/Call operand
    std::shared_ptr<const ExprNode> rhs; // Binary rhs
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::array<std::pair<std::string_view, Func>, 12> kFuncs = {{
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
    {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
    {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"abs", Func::Abs},
    {"re", Func::Re},     {"im", Func::Im},     {"conj", Func::Conj},
}};

bool lookup_func(std::string_view name, Func& out) {
    for (auto& [n, f] : kFuncs) {
        if (n == name) {
            out = f;
            return true;
        }
    }
    return false;
}

bool is_builtin_name(std::string_view name) {
    Func f;
    return name == "i" || name == "pi" || name == "e" || lookup_func(name, f);
}

NodePtr make_const(cplx v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
}

NodePtr make_var() {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Variable;
    return n;
}

NodePtr make_unary(NodePtr operand) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Unary;
    n->lhs = std::move(operand);
    return n;
}

NodePtr make_binary(BinOp op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_call(Func f, NodePtr arg) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Call;
    n->func = f;
    n->lhs = std::move(arg);
    return n;
}

// Recursive-descent parser. Grammar (EBNF mirrored in docs/expression-grammar.md):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := ('+' | '-') factor | power
//   power  := atom ('^' factor)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
public:
    Parser(std::string_view src, std::string_view free_var)
        : src_(src), free_var_(free_var) {}

    NodePtr run() {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view src_;
    std::string_view free_var_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& p) : p(p) {
            if (++p.depth_ > 256)
                p.fail("expression too deeply nested");
        }
        ~DepthGuard() { --p.depth_; }
    };

    NodePtr parse_expr() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = make_binary(BinOp::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = make_binary(BinOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_factor();
        for (;;) {
            if (eat('*'))
                lhs = make_binary(BinOp::Mul, lhs, parse_factor());
            else if (eat('/'))
                lhs = make_binary(BinOp::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    NodePtr parse_factor() {
        DepthGuard guard(*this);
        if (eat('-'))
            return make_unary(parse_factor());
        if (eat('+'))
            return parse_factor();
        return parse_power();
    }

    NodePtr parse_power() {
        DepthGuard guard(*this);
        NodePtr base = parse_atom();
        // Right-associative; exponent may carry a unary sign (2^-3).
        if (eat('^'))
            return make_binary(BinOp::Pow, base, parse_factor());
        return base;
    }

    NodePtr parse_atom() {
        DepthGuard guard(*this);
        skip_ws();
        if (pos_ >= src_.size())
            fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!eat(')'))
                fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
                ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // 'e' belongs to the next token, not an exponent
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        if (text == ".") {
            pos_ = start;
            fail("malformed number");
        }
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) {
            pos_ = start;
            fail("malformed number");
        }
        if (!std::isfinite(v)) {
            pos_ = start;
            fail("number out of range");
        }
        return make_const(cplx(v, 0.0));
    }

    NodePtr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);

        Func f;
        if (lookup_func(name, f)) {
            if (!eat('('))
                fail("expected '(' after function name");
            NodePtr arg = parse_expr();
            if (!eat(')'))
                fail("expected ')'");
            return make_call(f, arg);
        }
        if (name == free_var_)
            return make_var();
        if (name == "i")
            return make_const(cplx(0.0, 1.0));
        if (name == "pi")
            return make_const(cplx(3.14159265358979323846, 0.0));
        if (name == "e")
            return make_const(cplx(2.71828182845904523536, 0.0));
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "' (free variable is '" +
             std::string(free_var_) + "')");
    }
};

cplx eval_node(const ExprNode& n, cplx binding);

cplx checked(cplx v, cplx binding) {
    if (!is_finite(v))
        throw EvalError("non-finite value during expression evaluation", binding);
    return v;
}

cplx eval_pow(cplx base, cplx expo, cplx binding) {
    if (base == cplx(0.0, 0.0)) {
        if (expo == cplx(0.0, 0.0))
            return cplx(1.0, 0.0);
        if (expo.imag() == 0.0 && expo.real() > 0.0)
            return cplx(0.0, 0.0);
        throw EvalError("zero raised to a non-positive power", binding);
    }
    return checked(std::pow(base, expo), binding);
}

cplx eval_call(Func f, cplx a, cplx binding) {
    switch (f) {
    case Func::Sin: return checked(std::sin(a), binding);
    case Func::Cos: return checked(std::cos(a), binding);
    case Func::Tan: return checked(std::tan(a), binding);
    case Func::Exp: return checked(std::exp(a), binding);
    case Func::Log: return checked(std::log(a), binding);
    case Func::Sqrt: return checked(std::sqrt(a), binding);
    case Func::Sinh: return checked(std::sinh(a), binding);
    case Func::Cosh: return checked(std::cosh(a), binding);
    case Func::Abs: return checked(cplx(std::abs(a), 0.0), binding);
    case Func::Re: return cplx(a.real(), 0.0);
    case Func::Im: return cplx(a.imag(), 0.0);
    case Func::Conj: return std::conj(a);
    }
    throw EvalError("corrupt expression node", binding);
}

cplx eval_node(const ExprNode& n, cplx binding) {
    switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return binding;
    case NodeKind::Unary: return -eval_node(*n.lhs, binding);
    case NodeKind::Call: return eval_call(n.func, eval_node(*n.lhs, binding), binding);
    case NodeKind::Binary: {
        cplx a = eval_node(*n.lhs, binding);
        cplx b = eval_node(*n.rhs, binding);
        switch (n.op) {
        case BinOp::Add: return checked(a + b, binding);
        case BinOp::Sub: return checked(a - b, binding);
        case BinOp::Mul: return checked(a * b, binding);
        case BinOp::Div: return checked(a / b, binding);
        case BinOp::Pow: return eval_pow(a, b, binding);
        }
        break;
    }
    }
    throw EvalError("corrupt expression node", binding);
}

std::string_view func_name(Func f) {
    for (auto& [n, g] : kFuncs)
        if (g == f)
            return n;
    return "?";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Precedence levels used when printing: higher binds tighter.
int precedence(const ExprNode& n) {
    switch (n.kind) {
    case NodeKind::Binary:
        switch (n.op) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
        }
        return 0;
    case NodeKind::Unary: return 3;
    default: return 5;
    }
}

void print_node(const ExprNode& n, const std::string& var, std::string& out);

void print_child(const ExprNode& child, int parent_prec, bool needs_parens_on_tie,
                 const std::string& var, std::string& out) {
    int cp = precedence(child);
    bool parens = cp < parent_prec || (cp == parent_prec && needs_parens_on_tie);
    if (parens)
        out += '(';
    print_node(child, var, out);
    if (parens)
        out += ')';
}

void print_node(const ExprNode& n, const std::string& var, std::string& out) {
    switch (n.kind) {
    case NodeKind::Constant:
        if (n.value == cplx(0.0, 1.0)) {
            out += 'i';
        } else {
            out += format_double(n.value.real());
        }
        return;
    case NodeKind::Variable:
        out += var;
        return;
    case NodeKind::Unary:
        out += '-';
        print_child(*n.lhs, precedence(n), false, var, out);
        return;
    case NodeKind::Call:
        out += func_name(n.func);
        out += '(';
        print_node(*n.lhs, var, out);
        out += ')';
        return;
    case NodeKind::Binary: {
        int p = precedence(n);
        const char* op = nullptr;
        bool lhs_tie = false, rhs_tie = true; // left-assoc: parenthesize rhs on tie
        switch (n.op) {
        case BinOp::Add: op = "+"; break;
        case BinOp::Sub: op = "-"; break;
        case BinOp::Mul: op = "*"; break;
        case BinOp::Div: op = "/"; break;
        case BinOp::Pow:
            op = "^";
            lhs_tie = true; // right-assoc: parenthesize lhs on tie
            rhs_tie = false;
            break;
        }
        print_child(*n.lhs, p, lhs_tie, var, out);
        out += op;
        print_child(*n.rhs, p, rhs_tie, var, out);
        return;
    }
    }
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case NodeKind::Constant:
        return a.value.real() == b.value.real() && a.value.imag() == b.value.imag();
    case NodeKind::Variable:
        return true;
    case NodeKind::Unary:
        return nodes_equal(*a.lhs, *b.lhs);
    case NodeKind::Call:
        return a.func == b.func && nodes_equal(*a.lhs, *b.lhs);
    case NodeKind::Binary:
        return a.op == b.op && nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    }
    return false;
}

} // namespace
} // namespace detail

Expr Expr::parse(std::string_view source, std::string_view free_var) {
    if (detail::is_builtin_name(free_var))
        throw std::invalid_argument("free variable '" + std::string(free_var) +
                                    "' collides with a builtin name");
    if (free_var.empty())
        throw std::invalid_argument("free variable name must not be empty");
    detail::Parser parser(source, free_var);
    Expr e;
    e.root_ = parser.run();
    e.free_var_ = std::string(free_var);
    return e;
}

cplx Expr::eval(cplx binding) const {
    if (!root_)
        throw EvalError("evaluating an empty expression", binding);
    return detail::eval_node(*root_, binding);
}

std::string Expr::to_string() const {
    if (!root_)
        return "";
    std::string out;
    detail::print_node(*root_, free_var_, out);
    return out;
}

bool operator==(const Expr& a, const Expr& b) {
    if (!a.root_ || !b.root_)
        return a.root_ == b.root_;
    return detail::nodes_equal(*a.root_, *b.root_);
}

bool evaluable_at(const Expr& e, cplx binding) {
    try {
        e.eval(binding);
        return true;
    } catch (const EvalError&) {
        return false;
    }
}

} // namespace slspec
