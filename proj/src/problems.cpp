#include "slspec/problems.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "slspec/bessel.hpp"

namespace slspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<Expr, 4> bc_row(const char* c1, const char* c2, const char* c3,
                           const char* c4) {
    return {Expr::parse(c1, "mu"), Expr::parse(c2, "mu"), Expr::parse(c3, "mu"),
            Expr::parse(c4, "mu")};
}

Problem make_ex31() {
    Problem p;
    p.name = "ex3.1";
    p.b = 10.0;
    p.q = Expr::parse("10*i*sin(x)*exp(-x)", "x");
    p.boundary[0] = bc_row("1", "0", "0", "0");       // y(0) = 0
    p.boundary[1] = bc_row("0", "0", "-i*mu", "1");   // y'(b) - i mu y(b) = 0
    return p;
}

Problem make_ex32() {
    Problem p;
    p.name = "ex3.2";
    p.b = 10.0;
    p.q = Expr::parse("10*i*exp(-x)", "x");
    p.boundary[0] = bc_row("1", "0", "0", "0");
    p.boundary[1] = bc_row("0", "0", "-i*mu", "1");
    return p;
}

Problem make_ex33() {
    Problem p;
    p.name = "ex3.3";
    p.b = kPi;
    p.q = Expr::parse("3-2*i", "x");
    p.boundary[0] = bc_row("1", "0", "0", "0");
    p.boundary[1] = bc_row("0", "0", "1", "0");       // Dirichlet at both ends
    p.exact_eigenvalue = [](int k) { return cplx(double(k) * k + 3.0, -2.0); };
    return p;
}

Problem make_ex34() {
    Problem p;
    p.name = "ex3.4";
    p.b = 1.0;
    p.q = Expr::parse("exp(2*i*x)", "x");
    p.boundary[0] = bc_row("1", "0", "mu", "0");      // y(0) + mu y(1) = 0
    p.boundary[1] = bc_row("0", "1", "0", "0");       // y'(0) = 0
    p.exact_char = [](cplx mu) { return exact_char_ex34(mu); };
    return p;
}

Problem make_dirichlet_const(const std::string& carg) {
    Expr cexpr;
    try {
        cexpr = Expr::parse(carg, "x");
    } catch (const ParseError& e) {
        throw std::invalid_argument("dirichlet-const: bad constant '" + carg +
                                    "': " + e.what());
    }
    cplx c = cexpr.eval(cplx(0.0));
    Problem p;
    p.name = "dirichlet-const(" + carg + ")";
    p.b = 1.0;
    p.q = cexpr;
    p.boundary[0] = bc_row("1", "0", "0", "0");
    p.boundary[1] = bc_row("0", "0", "1", "0");
    p.exact_eigenvalue = [c](int k) {
        return cplx(double(k) * k * kPi * kPi, 0.0) + c;
    };
    return p;
}

} // namespace

Problem builtin(const std::string& name) {
    if (name == "ex3.1")
        return make_ex31();
    if (name == "ex3.2")
        return make_ex32();
    if (name == "ex3.3")
        return make_ex33();
    if (name == "ex3.4")
        return make_ex34();
    constexpr std::string_view prefix = "dirichlet-const(";
    if (name.starts_with(prefix) && name.ends_with(")"))
        return make_dirichlet_const(
            name.substr(prefix.size(), name.size() - prefix.size() - 1));
    throw std::invalid_argument("unknown builtin problem '" + name + "'");
}

std::vector<std::string> builtin_names() {
    return {"ex3.1", "ex3.2", "ex3.3", "ex3.4", "dirichlet-const(c)"};
}

std::vector<std::string> Problem::validate() const {
    std::vector<std::string> warnings;
    if (!(b > 0.0))
        warnings.push_back("interval length b must be positive (b = " +
                           std::to_string(b) + ")");

    // Numerical rank of the 2x4 boundary matrix at seeded random mu: the
    // singular values are the square roots of the eigenvalues of the 2x2
    // Gram matrix A A^H.
    std::mt19937_64 rng(0x51c3a11au);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int trial = 0; trial < 16; ++trial) {
        cplx mu(coord(rng), coord(rng));
        cplx a[2][4];
        bool eval_ok = true;
        for (int r = 0; r < 2 && eval_ok; ++r)
            for (int c = 0; c < 4 && eval_ok; ++c) {
                try {
                    a[r][c] = boundary_entry(r, c, mu);
                } catch (const EvalError&) {
                    eval_ok = false;
                }
            }
        if (!eval_ok)
            continue;
        double g00 = 0.0, g11 = 0.0;
        cplx g01 = 0.0;
        for (int c = 0; c < 4; ++c) {
            g00 += std::norm(a[0][c]);
            g11 += std::norm(a[1][c]);
            g01 += a[0][c] * std::conj(a[1][c]);
        }
        double tr = g00 + g11;
        double det = g00 * g11 - std::norm(g01);
        double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        double smin2 = 0.5 * (tr - disc);
        if (!(smin2 > 1e-24 * std::max(1.0, tr))) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "boundary matrix is rank deficient near mu = %g%+gi",
                          mu.real(), mu.imag());
            warnings.push_back(buf);
        }
    }

    for (double frac : {1e-3, 0.25, 0.5, 0.75, 1.0}) {
        cplx x(b * frac, 0.0);
        if (!evaluable_at(q, x)) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "potential not evaluable at x = %g",
                          x.real());
            warnings.push_back(buf);
        }
    }
    return warnings;
}

cplx exact_char_ex34(cplx mu) {
    if (std::abs(mu.imag()) < 1e-9 &&
        std::abs(mu.real() - std::round(mu.real())) < 1e-9)
        throw std::invalid_argument(
            "exact_char_ex34: integer order (Bessel solutions degenerate)");

    const cplx one(1.0);
    const cplx ei = std::exp(cplx(0.0, 1.0));

    cplx top_p = bessel_j(mu, one) + mu * bessel_j(mu, ei);
    cplx top_m = bessel_j(-mu, one) + mu * bessel_j(-mu, ei);
    // J_nu'(1) = (J_{nu-1}(1) - J_{nu+1}(1)) / 2 at nu = mu and nu = -mu.
    cplx bot_p = 0.5 * (bessel_j(mu - 1.0, one) - bessel_j(mu + 1.0, one));
    cplx bot_m = 0.5 * (bessel_j(-mu - 1.0, one) - bessel_j(-mu + 1.0, one));

    return top_p * bot_m - top_m * bot_p;
}

} // namespace slspec
