#include "slspec/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace slspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Godfrey's g = 7 coefficient set.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

bool is_nonpositive_integer(cplx z, double tol = 1e-12) {
    if (std::abs(z.imag()) > tol)
        return false;
    double r = z.real();
    return r < 0.5 && std::abs(r - std::round(r)) <= tol;
}

cplx gamma_positive_half(cplx z) {
    // Requires Re z >= 0.5.
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int k = 1; k < 9; ++k)
        x += kLanczos[k] / (z + static_cast<double>(k));
    cplx t = z + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

} // namespace

cplx gamma_lanczos(cplx z) {
    if (is_nonpositive_integer(z))
        throw std::invalid_argument("gamma: pole at nonpositive integer");
    if (z.real() < 0.5)
        return kPi / (std::sin(kPi * z) * gamma_positive_half(1.0 - z));
    return gamma_positive_half(z);
}

cplx reciprocal_gamma(cplx z) {
    if (is_nonpositive_integer(z))
        return cplx(0.0);
    if (z.real() < 0.5)
        return std::sin(kPi * z) * gamma_positive_half(1.0 - z) / kPi;
    cplx g = gamma_positive_half(z);
    if (!is_finite(g))
        return cplx(0.0); // overflow: 1/Gamma underflows
    return 1.0 / g;
}

cplx bessel_j(cplx nu, cplx z) {
    if (std::abs(z) > 50.0)
        throw std::invalid_argument("bessel_j: |z| > 50 is outside the series regime");
    if (z == cplx(0.0)) {
        if (nu == cplx(0.0))
            return cplx(1.0);
        if (nu.real() > 0.0)
            return cplx(0.0);
        throw std::invalid_argument("bessel_j: z = 0 with Re(nu) <= 0");
    }

    const cplx half_z = z / 2.0;
    const cplx w = half_z * half_z;
    const cplx prefactor = std::exp(nu * std::log(half_z)); // principal branch

    cplx sum = 0.0;
    cplx p = 1.0; // w^k / k!
    double sign = 1.0;
    bool seen_nonzero = false;
    int tiny_streak = 0;
    for (int k = 0; k < 200; ++k) {
        cplx term = sign * p * reciprocal_gamma(nu + static_cast<double>(k) + 1.0);
        sum += term;
        if (term != cplx(0.0))
            seen_nonzero = true;
        if (seen_nonzero && std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++tiny_streak >= 2)
                return prefactor * sum;
        } else {
            tiny_streak = 0;
        }
        p *= w / static_cast<double>(k + 1);
        sign = -sign;
    }
    if (!seen_nonzero)
        return cplx(0.0); // every term underflowed
    throw Error("bessel_j: power series did not converge within 200 terms");
}

} // namespace slspec
