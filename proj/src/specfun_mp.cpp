#include "specfun_mp.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace heun::mp {

namespace {

using R = boost::multiprecision::cpp_bin_float_50;
using C = boost::multiprecision::cpp_complex_50;

const R& pi_r() {
    static const R v = boost::math::constants::pi<R>();
    return v;
}

C to_c(cplx z) { return C(R(z.real()), R(z.imag())); }

Scaled to_scaled(const C& v) {
    if (v.real() == 0 && v.imag() == 0) return Scaled();
    C L = log(v);
    return Scaled::from_log(cplx(L.real().convert_to<double>(), L.imag().convert_to<double>()));
}

C ln_gamma_right(C z) {
    C prod(1);
    while (abs(z) < 40 || z.real() < 20) {
        prod *= z;
        z += 1;
    }
    C zi = C(1) / z, zi2 = zi * zi, p = zi, s(0);
    for (int k = 1; k <= 25; ++k) {
        R b = boost::math::bernoulli_b2n<R>(k);
        s += p * C(b / R((2 * k) * (2 * k - 1)));
        p *= zi2;
    }
    return (z - C(R(0.5))) * log(z) - z + C(log(2 * pi_r()) / 2) + s - log(prod);
}

C sinpi_c(const C& z) { return sin(C(pi_r()) * z); }

// 1/Gamma, exactly zero at the poles
C rgamma_c(const C& z) {
    if (z.imag() == 0 && z.real() <= 0 && floor(z.real()) == z.real()) return C(0);
    if (z.real() >= R(0.5)) return exp(-ln_gamma_right(z));
    return sinpi_c(z) * exp(ln_gamma_right(C(1) - z)) / C(pi_r());
}

// regularised series, y already on the good side
C m_direct(const C& a, const C& c, const C& y) {
    int k0 = 0;
    double cr = c.real().convert_to<double>();
    if (cr < 0.5) k0 = static_cast<int>(std::ceil(0.5 - cr));
    std::vector<C> rg(k0 + 1);
    rg[k0] = rgamma_c(c + C(k0));
    for (int k = k0 - 1; k >= 0; --k) rg[k] = rg[k + 1] * (c + C(k));

    const R tol = R(1e-40);
    C sum(0), p(1);
    int small = 0;
    for (int k = 0; k < k0 + series_max_terms; ++k) {
        C t = k <= k0 ? p * rg[k] : p;
        sum += t;
        R at = abs(t);
        small = (at <= tol * abs(sum)) ? small + 1 : 0;
        if (k > k0 && small >= 3) return sum;
        if (k < k0) {
            p *= (a + C(k)) * y / C(k + 1);
        } else if (k == k0) {
            p = t * (a + C(k)) * y / (C(k + 1) * (c + C(k)));
        } else {
            p *= (a + C(k)) * y / (C(k + 1) * (c + C(k)));
        }
        if (p.real() == 0 && p.imag() == 0) return sum;
    }
    throw HeunError(ErrorKind::nonconvergence, "regularised Kummer series (extended precision) did not converge");
}

C m_reg_c(const C& a, const C& c, const C& y) {
    if (y.real() < 0) return exp(y) * m_direct(c - a, c, -y);
    return m_direct(a, c, y);
}

}  // namespace

Scaled m_reg(cplx a, cplx c, cplx y) { return to_scaled(m_reg_c(to_c(a), to_c(c), to_c(y))); }

// derived parameters are formed here, so a, c are not rounded before the 1/sin(pi c) cancellation
Scaled psi_cont(cplx ad, cplx cd, cplx yd) {
    C a = to_c(ad), c = to_c(cd), y = to_c(yd);
    C b = a - c + C(1);
    C m1 = m_reg_c(a, c, y) * rgamma_c(b);
    C m2 = m_reg_c(b, C(2) - c, y) * rgamma_c(a) * exp((C(1) - c) * log(y));
    return to_scaled((m1 - m2) * C(pi_r()) / sinpi_c(c));
}

Scaled j_w(cplx lamd, cplx wd) {
    C lam = to_c(lamd), w = to_c(wd);
    C c1 = lam + C(1);
    int k0 = 0;
    if (lamd.real() + 1.0 < 0.5) k0 = static_cast<int>(std::ceil(-0.5 - lamd.real()));
    std::vector<C> rg(k0 + 1);
    rg[k0] = rgamma_c(c1 + C(k0));
    for (int k = k0 - 1; k >= 0; --k) rg[k] = rg[k + 1] * (lam + C(k + 1));

    const R tol = R(1e-40);
    C sum(0), p(1);
    int small = 0;
    for (int k = 0; k < k0 + series_max_terms; ++k) {
        C t = k <= k0 ? p * rg[k] : p;
        sum += t;
        small = (abs(t) <= tol * abs(sum)) ? small + 1 : 0;
        if (k > k0 && small >= 3) return to_scaled(sum);
        if (k < k0) {
            p *= -w / C(k + 1);
        } else if (k == k0) {
            p = -t * w / (C(k + 1) * (lam + C(k + 1)));
        } else {
            p *= -w / (C(k + 1) * (lam + C(k + 1)));
        }
        if (p.real() == 0 && p.imag() == 0) return to_scaled(sum);
    }
    throw HeunError(ErrorKind::nonconvergence, "Bessel series (extended precision) did not converge");
}

}  // namespace heun::mp
