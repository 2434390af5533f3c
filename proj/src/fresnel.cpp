#include "qabsorb/fresnel.hpp"

#include <cmath>
#include <limits>

#include "qabsorb/core.hpp"

namespace qabsorb {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 300;
constexpr double kTiny = 1e-300;
// Below this argument the power series converges quickly; above it the
// continued fraction for erfc does.
constexpr double kSeriesLimit = 1.5;

FresnelPair series(double x) {
    // C = sum (-1)^k (pi/2)^{2k} x^{4k+1} / ((2k)! (4k+1))
    // S = sum (-1)^k (pi/2)^{2k+1} x^{4k+3} / ((2k+1)! (4k+3))
    const double fact = 0.5 * kPi * x * x;
    double term = x;  // x * fact^j / j!
    double c = x, s = 0.0;
    for (int j = 1; j < kMaxIter; ++j) {
        term *= fact / j;
        const double contrib = term / (2 * j + 1);
        const int k = j / 2;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        if (j % 2 == 1)
            s += sign * contrib;
        else
            c += sign * contrib;
        if (contrib < kEps * (std::abs(c) + std::abs(s))) break;
    }
    return {c, s};
}

FresnelPair continued_fraction(double x) {
    // Modified Lentz evaluation of the continued fraction for erfc on the
    // diagonal: C + iS = (1+i)/2 * [1 - erfc((1-i) sqrt(pi)/2 x)].
    using C = std::complex<double>;
    const double pix2 = kPi * x * x;
    C b(1.0, -pix2);
    C cc(1.0 / kTiny, 0.0);
    C d = 1.0 / b;
    C h = d;
    int n = -1;
    for (int k = 2; k <= kMaxIter; ++k) {
        n += 2;
        const double a = -static_cast<double>(n) * (n + 1);
        b += 4.0;
        d = 1.0 / (a * d + b);
        cc = b + a / cc;
        const C del = cc * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    h *= C(x, -x);
    const C phase(std::cos(0.5 * pix2), std::sin(0.5 * pix2));
    const C cs = C(0.5, 0.5) * (1.0 - phase * h);
    return {cs.real(), cs.imag()};
}

}  // namespace

FresnelPair fresnel(double x) {
    const double ax = std::abs(x);
    FresnelPair r{};
    if (ax < std::sqrt(std::numeric_limits<double>::min()))
        r = {ax, 0.0};
    else if (ax <= kSeriesLimit)
        r = series(ax);
    else
        r = continued_fraction(ax);
    if (x < 0.0) r = {-r.c, -r.s};
    return r;
}

std::complex<double> fresnel_phase_integral(double beta, double u) {
    const double scale = std::sqrt(kPi / (2.0 * beta));
    const FresnelPair f = fresnel(u / scale);
    return scale * std::complex<double>(f.c, f.s);
}

}  // namespace qabsorb
