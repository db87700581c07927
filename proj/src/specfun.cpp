#include "heun/specfun.hpp"

#include <array>
#include <vector>

#include "specfun_mp.hpp"

namespace heun {

namespace {

// B_{2k} / (2k (2k-1))
constexpr std::array<double, 10> stirling = {
    1.0 / 12.0,         -1.0 / 360.0,          1.0 / 1260.0, -1.0 / 1680.0,       1.0 / 1188.0,
    -691.0 / 360360.0,  1.0 / 156.0,           -3617.0 / 122400.0, 43867.0 / 244188.0, -174611.0 / 125400.0};

// digits we tolerate losing before redoing a sum in extended precision (natural log)
constexpr double max_loss = 5.0;

cplx ln_gamma_right(cplx z) {
    cplx shift{0.0, 0.0};
    while (std::abs(z) < 18.0 || z.real() < 10.0) {
        shift += std::log(z);
        z += 1.0;
    }
    cplx zi = 1.0 / z, zi2 = zi * zi, s{0.0, 0.0}, p = zi;
    for (double b : stirling) {
        s += b * p;
        p *= zi2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + s - shift;
}

double reduce2(double x) { return x - 2.0 * std::round(0.5 * x); }

// log sin(pi z), no overflow for large |Im z|
cplx ln_sinpi(cplx z) {
    if (std::abs(z.imag()) < 20.0) return std::log(sinpi(z));
    cplx zr(reduce2(z.real()), z.imag());
    if (z.imag() > 0) return -I * pi * zr + std::log(I / 2.0) + std::log(1.0 - std::exp(2.0 * I * pi * zr));
    return I * pi * zr + std::log(-I / 2.0) + std::log(1.0 - std::exp(-2.0 * I * pi * zr));
}

[[noreturn]] void throw_pole(const char* what, cplx z) {
    throw HeunError(ErrorKind::pole, std::string(what) + ": pole at (" + std::to_string(z.real()) + "," +
                                         std::to_string(z.imag()) + ")");
}

bool exact_nonpos_int(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real()); }

struct SeriesOut {
    Scaled sum;
    double loss = 0.0;  // ln(max term / |sum|)
};

// sum_k (a)_k y^k / (k! Gamma(c+k)); with_a=false drops the Pochhammer (0F1 type).
// 1/Gamma(c+k) is seeded where Re(c+k) > 1/2 and pulled back by multiplication, so exact zeros stay exact.
SeriesOut regularised_sum(cplx a, bool with_a, cplx c, cplx y) {
    int k0 = 0;
    if (c.real() < 0.5) k0 = static_cast<int>(std::ceil(0.5 - c.real()));
    std::vector<Scaled> rg(k0 + 1);
    rg[k0] = rgamma_s(c + double(k0));
    for (int k = k0 - 1; k >= 0; --k) rg[k] = rg[k + 1] * (c + double(k));

    SeriesOut out;
    double max_log = -std::numeric_limits<double>::infinity();
    Scaled p(cplx(1.0, 0.0));
    int small = 0;
    const double tiny = std::log(eps_mach);
    for (int k = 0; k < k0 + series_max_terms; ++k) {
        Scaled t = k <= k0 ? p * rg[k] : p;
        out.sum = out.sum + t;
        if (!t.is_zero()) max_log = std::max(max_log, t.e);
        bool neg = t.is_zero() || (!out.sum.is_zero() && t.e <= out.sum.e + tiny);
        small = neg ? small + 1 : 0;
        if (k > k0 && small >= 3) break;
        cplx num = (with_a ? a + double(k) : cplx(1.0, 0.0)) * y;
        if (k < k0) {
            p = p * (num / double(k + 1));
        } else {
            p = t * (num / (double(k + 1) * (c + double(k))));
        }
        if (p.is_zero()) break;
        if (k == k0 + series_max_terms - 1)
            throw HeunError(ErrorKind::nonconvergence, "hypergeometric series: N_max terms reached");
    }
    if (out.sum.is_zero())
        out.loss = std::isfinite(max_log) ? std::numeric_limits<double>::infinity() : 0.0;
    else
        out.loss = max_log - out.sum.e;
    return out;
}

// Psi(a,c;y) = y^{-a} 2F0(a, a-c+1;; -1/y).  Terminating when either parameter is a nonpositive integer.
bool psi_asym_log(cplx a, cplx c, cplx y, cplx logy, Scaled& out) {
    cplx b = a - c + 1.0;
    bool terminating = exact_nonpos_int(a) || exact_nonpos_int(b);
    cplx sum{1.0, 0.0}, t{1.0, 0.0};
    double prev = 1.0;
    int small = 0;
    for (int k = 0; k < (terminating ? series_max_terms : 400); ++k) {
        t *= (a + double(k)) * (b + double(k)) / (double(k + 1) * (-y));
        double at = std::abs(t);
        if (!terminating && at > prev && at > eps_mach * std::abs(sum)) return false;
        sum += t;
        prev = at;
        small = (at <= eps_mach * std::abs(sum)) ? small + 1 : 0;
        if (at == 0.0 || (!terminating && small >= 3)) {
            out = Scaled(sum) * Scaled::from_log(-a * logy);
            return true;
        }
    }
    return false;
}

// Phi/Gamma(c) from the two Psi's, for large |y|
bool phi_via_psi(cplx a, cplx c, cplx y, Scaled& out) {
    double s = y.imag() >= 0 ? 1.0 : -1.0;
    cplx ly = std::log(y);
    Scaled p1, p2;
    if (!psi_asym_log(a, c, y, ly, p1)) return false;
    // -y = e^{-i pi s} y keeps -y principal on both sides of the real axis
    if (!psi_asym_log(c - a, c, -y, ly - I * pi * s, p2)) return false;
    Scaled t1 = rgamma_s(c - a) * p1 * std::exp(I * pi * s * a);
    Scaled t2 = rgamma_s(a) * p2 * Scaled::from_log(y) * std::exp(I * pi * s * (a - c));
    out = t1 + t2;
    return true;
}

bool large_arg(cplx a, cplx c, cplx y) { return std::abs(y) > 30.0 + 2.0 * (std::abs(a) + std::abs(c)); }

Scaled m_series(cplx a, cplx c, cplx y) {
    bool kummer = y.real() < 0.0;
    SeriesOut r = kummer ? regularised_sum(c - a, true, c, -y) : regularised_sum(a, true, c, y);
    if (r.loss > max_loss) return mp::m_reg(a, c, y);
    return kummer ? r.sum * Scaled::from_log(y) : r.sum;
}

Scaled psi_continuation(cplx a, cplx c, cplx y) {
    Scaled m1 = m_series(a, c, y) * rgamma_s(a - c + 1.0);
    Scaled m2 = m_series(a - c + 1.0, 2.0 - c, y) * rgamma_s(a) * Scaled::from_log((1.0 - c) * std::log(y));
    Scaled d = m1 - m2;
    double big = std::max(m1.log_abs(), m2.log_abs());
    if (d.is_zero() || big - d.e > max_loss) return mp::psi_cont(a, c, y);
    return d * (Scaled(cplx(pi, 0.0)) / sinpi_s(c));
}

}  // namespace

cplx sinpi(cplx z) {
    double x = reduce2(z.real()), y = z.imag();
    double s, c;
    if (x == std::round(x)) {
        s = 0.0;
        c = (x == 0.0) ? 1.0 : -1.0;
    } else if (2.0 * x == std::round(2.0 * x)) {
        s = (x == 0.5 || x == -1.5) ? 1.0 : -1.0;
        c = 0.0;
    } else {
        s = std::sin(pi * x);
        c = std::cos(pi * x);
    }
    return {s * std::cosh(pi * y), c * std::sinh(pi * y)};
}

Scaled sinpi_s(cplx z) {
    if (std::abs(z.imag()) < 20.0) return Scaled(sinpi(z));
    return Scaled::from_log(ln_sinpi(z));
}

cplx ln_gamma(cplx z) {
    if (near_nonpos_int(z)) throw_pole("ln_gamma", z);
    // upward shift keeps the branch continuous off the negative real axis
    return ln_gamma_right(z);
}

Scaled gamma_s(cplx z) { return Scaled::from_log(ln_gamma(z)); }

Scaled rgamma_s(cplx z) {
    if (z.real() >= 0.5) return Scaled::from_log(-ln_gamma_right(z));
    return sinpi_s(z) * Scaled::from_log(ln_gamma_right(1.0 - z) - std::log(pi));
}

cplx rgamma(cplx z) { return rgamma_s(z).value(); }

cplx kummer_series(cplx a, cplx c, cplx y) {
    cplx sum{1.0, 0.0}, t{1.0, 0.0};
    int small = 0;
    for (int k = 0; k < series_max_terms; ++k) {
        t *= (a + double(k)) * y / ((c + double(k)) * double(k + 1));
        sum += t;
        small = (std::abs(t) <= eps_mach * std::abs(sum)) ? small + 1 : 0;
        if (small >= 3 || t == cplx(0.0, 0.0)) return sum;
    }
    throw HeunError(ErrorKind::nonconvergence, "Kummer series: N_max terms reached");
}

Scaled phi_reg_s(cplx a, cplx c, cplx y) {
    if (y == cplx(0.0, 0.0)) return rgamma_s(c);
    if (large_arg(a, c, y)) {
        Scaled r;
        if (phi_via_psi(a, c, y, r)) return r;
    }
    return m_series(a, c, y);
}

Scaled phi_regular_s(const HypergeometricArgs& h) {
    if (near_nonpos_int(h.c)) throw_pole("phi_regular", h.c);
    if (h.y == cplx(0.0, 0.0)) return Scaled(cplx(1.0, 0.0));
    return phi_reg_s(h.a, h.c, h.y) * gamma_s(h.c);
}

cplx phi_regular(const HypergeometricArgs& h) { return phi_regular_s(h).value(); }

Scaled phi_tilde_s(const HypergeometricArgs& h) {
    cplx cma = h.c - h.a;
    if (near_nonpos_int(cma)) throw_pole("phi_tilde", cma);
    return gamma_s(cma) * phi_reg_s(h.a, h.c, h.y);
}

cplx phi_tilde(const HypergeometricArgs& h) { return phi_tilde_s(h).value(); }

bool psi_asymptotic(cplx a, cplx c, cplx y, cplx& out) {
    Scaled s;
    if (!psi_asym_log(a, c, y, std::log(y), s)) return false;
    out = s.value();
    return true;
}

Scaled psi_irregular_s(const HypergeometricArgs& h) {
    const cplx a = h.a, c = h.c, y = h.y;
    if (y == cplx(0.0, 0.0)) throw HeunError(ErrorKind::origin, "psi_irregular: y = 0");
    if (y.imag() == 0.0 && y.real() < 0.0)
        throw HeunError(ErrorKind::branch, "psi_irregular: y on the branch cut (negative real axis)");
    Scaled out;
    if (exact_nonpos_int(a) || exact_nonpos_int(a - c + 1.0)) {
        if (psi_asym_log(a, c, y, std::log(y), out)) return out;
    }
    if (std::abs(y) > 30.0 && psi_asym_log(a, c, y, std::log(y), out)) return out;

    constexpr double delta = 1e-6;
    if (dist_to_int(c) < delta) {
        // Psi is entire in c: symmetric average at the integer, then first-order shift to c
        cplx cr(std::round(c.real()), 0.0);
        Scaled lo = mp::psi_cont(a, cr - delta, y), hi = mp::psi_cont(a, cr + delta, y);
        Scaled avg = (lo + hi) * cplx(0.5, 0.0);
        return avg + (hi - lo) * ((c - cr) / (2.0 * delta));
    }
    return psi_continuation(a, c, y);
}

cplx psi_irregular(const HypergeometricArgs& h) { return psi_irregular_s(h).value(); }

Scaled bessel_j_w(cplx lam, cplx w) {
    cplx s = std::sqrt(w);
    if (std::abs(s) > 20.0 + std::abs(lam) && s.real() > 0.1 * std::abs(s)) {
        return (cyl_scaled(BesselKind::H1, lam, s) + cyl_scaled(BesselKind::H2, lam, s)) * cplx(0.5, 0.0);
    }
    SeriesOut r = regularised_sum(0.0, false, lam + 1.0, -w);
    if (r.loss > max_loss) return mp::j_w(lam, w);
    return r.sum;
}

namespace {

// K_lam(zeta) = sqrt(pi) (2 zeta)^lam e^{-zeta} Psi(lam+1/2, 2 lam+1; 2 zeta), |arg zeta| < pi
Scaled k_scaled(cplx lam, cplx zeta) {
    Scaled psi = psi_irregular_s({lam + 0.5, 2.0 * lam + 1.0, 2.0 * zeta});
    return psi * Scaled::from_log(0.5 * std::log(pi) + lam * std::log(2.0 * zeta) - zeta);
}

}  // namespace

// s^{-lam} C_lam(2 s)
Scaled cyl_scaled(BesselKind kind, cplx lam, cplx s) {
    if (kind == BesselKind::J) return bessel_j_w(lam, s * s);
    if (s == cplx(0.0, 0.0)) throw HeunError(ErrorKind::origin, "cyl_scaled: irregular function at the origin");
    cplx x = 2.0 * s;
    Scaled spow = Scaled::from_log(-lam * std::log(s));
    double ax = std::arg(x);
    if (kind == BesselKind::K) return k_scaled(lam, x) * spow;
    if (kind == BesselKind::H1) {
        if (ax > -pi / 2) {
            Scaled k = k_scaled(lam, -I * x);
            return k * spow * (2.0 / (I * pi) * std::exp(-I * pi * lam / 2.0));
        }
        return bessel_j_w(lam, s * s) * cplx(2.0, 0.0) - cyl_scaled(BesselKind::H2, lam, s);
    }
    if (ax < pi / 2) {
        Scaled k = k_scaled(lam, I * x);
        return k * spow * (-2.0 / (I * pi) * std::exp(I * pi * lam / 2.0));
    }
    return bessel_j_w(lam, s * s) * cplx(2.0, 0.0) - cyl_scaled(BesselKind::H1, lam, s);
}

cplx bessel(BesselKind kind, cplx order, cplx x) {
    if (x == cplx(0.0, 0.0) && kind == BesselKind::J) {
        if (order == cplx(0.0, 0.0)) return 1.0;
        if (order.real() > 0) return 0.0;
    }
    cplx s = 0.5 * x;
    Scaled f = cyl_scaled(kind, order, s);
    return (f * Scaled::from_log(order * std::log(s))).value();
}

}  // namespace heun
