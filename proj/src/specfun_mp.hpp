#pragma once

// 50-digit fallbacks, used when the double-precision sums lose too many digits

#include "heun/common.hpp"

namespace heun::mp {

// Phi(a,c;y) / Gamma(c)
Scaled m_reg(cplx a, cplx c, cplx y);

// continuation formula for Psi; c must not be an integer
Scaled psi_cont(cplx a, cplx c, cplx y);

// sum (-w)^k / (k! Gamma(lam+k+1))
Scaled j_w(cplx lam, cplx w);

}  // namespace heun::mp
