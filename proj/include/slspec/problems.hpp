#ifndef SLSPEC_PROBLEMS_HPP
#define SLSPEC_PROBLEMS_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "slspec/expr.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// A Sturm-Liouville problem -y'' + q(x) y = mu^2 y on [0, b] with the
/// rank-2 boundary condition A(mu) * (y(0), y'(0), y(b), y'(b))^T = 0.
/// A's entries are expressions in `mu`; q is an expression in `x`.
struct Problem {
    std::string name;
    double b = 1.0;
    Expr q;
    std::array<std::array<Expr, 4>, 2> boundary; // rows of A(mu)

    /// Closed-form k-th eigenvalue (k = 1, 2, ...) when known.
    std::function<cplx(int)> exact_eigenvalue;
    /// Exact characteristic function when known (its zeros are the
    /// square roots of the eigenvalues).
    std::function<cplx(cplx)> exact_char;

    cplx boundary_entry(int row, int col, cplx mu) const {
        return boundary[row][col].eval(mu);
    }

    /// Sanity diagnostics: numerical rank of A(mu) at 16 seeded random mu
    /// values, b > 0, and q evaluable at a few probe points in (0, b].
    /// Returns human-readable warnings; never throws.
    std::vector<std::string> validate() const;
};

/// Built-in problem registry. Known names:
///   ex3.1              singular, truncated at b = 10, q = 10i sin(x) e^-x,
///                      y(0) = 0 and the radiation condition y'(b) = i mu y(b)
///   ex3.2              as ex3.1 with q = 10i e^-x
///   ex3.3              b = pi, q = 3 - 2i, Dirichlet; lambda_k = k^2 + 3 - 2i
///   ex3.4              b = 1, q = e^{2ix}, y(0) + mu y(1) = 0, y'(0) = 0;
///                      exact characteristic function in terms of Bessel J
///   dirichlet-const(c) b = 1, constant potential c, Dirichlet;
///                      lambda_k = k^2 pi^2 + c
/// Throws std::invalid_argument for unknown names.
Problem builtin(const std::string& name);

/// Names accepted by builtin(), for CLI listings.
std::vector<std::string> builtin_names();

/// Exact characteristic function of the "ex3.4" problem, expressed with
/// Bessel functions of orders mu and -mu. The order must not be an
/// integer (the two Bessel solutions degenerate there).
cplx exact_char_ex34(cplx mu);

} // namespace slspec

#endif
