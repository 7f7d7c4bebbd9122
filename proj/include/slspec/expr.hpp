#ifndef SLSPEC_EXPR_HPP
#define SLSPEC_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>

#include "slspec/types.hpp"

namespace slspec {

namespace detail {
struct ExprNode;
}

/// Parsed arithmetic expression over complex scalars with one free
/// variable. Supports + - * / ^ (principal branch), unary minus, the
/// constants i, pi, e and the functions sin, cos, tan, exp, log, sqrt,
/// sinh, cosh, abs, re, im, conj.
///
/// Precedence: ^  >  unary -  >  * /  >  + -.  ^ is right-associative,
/// the others left-associative. Implicit multiplication is rejected.
///
/// An Expr is immutable after parse; eval() is reentrant and may be
/// called from many threads concurrently.
class Expr {
public:
    Expr() = default;

    /// Parse `source`, permitting `free_var` as the single free variable.
    /// Throws ParseError on malformed input or unknown identifiers, and
    /// std::invalid_argument if `free_var` collides with a builtin name.
    static Expr parse(std::string_view source, std::string_view free_var);

    /// Evaluate with the free variable bound to `binding`. Throws
    /// EvalError if any intermediate result is non-finite.
    cplx eval(cplx binding) const;

    /// Render back to parseable source. parse(to_string()) yields a
    /// structurally identical tree.
    std::string to_string() const;

    const std::string& free_var() const { return free_var_; }
    bool empty() const { return root_ == nullptr; }

    /// Structural equality of the syntax trees (same shape, same ops,
    /// bit-identical constants).
    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const detail::ExprNode> root_;
    std::string free_var_;
};

/// True if the expression evaluates without error at the given binding.
bool evaluable_at(const Expr& e, cplx binding);

} // namespace slspec

#endif
