#pragma once

#include "heun/common.hpp"

namespace heun {

struct HypergeometricArgs {
    cplx a;
    cplx c;
    cplx y;
};

enum class BesselKind { J, H1, H2, K };

cplx ln_gamma(cplx z);
cplx rgamma(cplx z);        // 1/Gamma, entire
Scaled gamma_s(cplx z);
Scaled rgamma_s(cplx z);
cplx sinpi(cplx z);
Scaled sinpi_s(cplx z);

// (a)_k y^k / ((c)_k k!) summed directly; throws on non-convergence
cplx kummer_series(cplx a, cplx c, cplx y);

cplx phi_regular(const HypergeometricArgs& h);
Scaled phi_regular_s(const HypergeometricArgs& h);

// Phi / Gamma(c); finite for every c
Scaled phi_reg_s(cplx a, cplx c, cplx y);

cplx phi_tilde(const HypergeometricArgs& h);
Scaled phi_tilde_s(const HypergeometricArgs& h);

cplx psi_irregular(const HypergeometricArgs& h);
Scaled psi_irregular_s(const HypergeometricArgs& h);

// y^{-a} sum (a)_k (a-c+1)_k / k! (-y)^{-k}; false when optimal truncation misses eps
bool psi_asymptotic(cplx a, cplx c, cplx y, cplx& out);

cplx bessel(BesselKind kind, cplx order, cplx x);

// s^{-lam} C_lam(2 s) for the Ince bases; J form is entire in s^2
Scaled cyl_scaled(BesselKind kind, cplx lam, cplx s);
// sum (-w)^k / (k! Gamma(lam+k+1)) = s^{-lam} J_lam(2s), w = s^2
Scaled bessel_j_w(cplx lam, cplx w);

}  // namespace heun
