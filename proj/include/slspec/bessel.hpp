#ifndef SLSPEC_BESSEL_HPP
#define SLSPEC_BESSEL_HPP

#include "slspec/types.hpp"

namespace slspec {

/// Complex gamma function (Lanczos approximation, g = 7, nine
/// coefficients, reflection formula for Re z < 0.5). Relative accuracy is
/// around 1e-13 over the moderate arguments used here.
cplx gamma_lanczos(cplx z);

/// 1/Gamma(z); returns exactly 0 at the poles (nonpositive integers) and
/// underflows cleanly to 0 for large positive arguments.
cplx reciprocal_gamma(cplx z);

/// Bessel function of the first kind of complex order nu at complex z,
/// by the ascending power series with principal branch for (z/2)^nu.
/// Valid in the series regime |z| <= 50; terms are summed until the
/// relative term drops below 1e-17 (at most 200 terms). Terms whose
/// gamma factor sits on a pole contribute zero.
cplx bessel_j(cplx nu, cplx z);

} // namespace slspec

#endif
