#pragma once

#include <complex>

namespace qabsorb {

struct FresnelPair {
    double c;  ///< C(x) = int_0^x cos(pi t^2 / 2) dt
    double s;  ///< S(x) = int_0^x sin(pi t^2 / 2) dt
};

/// Fresnel integrals in the normalized (pi t^2 / 2) convention, double precision.
FresnelPair fresnel(double x);

/// int_0^u exp(i beta v^2) dv for beta > 0.
std::complex<double> fresnel_phase_integral(double beta, double u);

}  // namespace qabsorb
