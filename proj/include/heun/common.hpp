#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace heun {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double eps_mach = std::numeric_limits<double>::epsilon();

// "is an integer" cutoff used by every pole/validity predicate
inline constexpr double tau_int = 1e-8;

// (-1) = e^{+i pi} in the Phi <-> Psi continuation
inline constexpr int branch_eps = +1;

inline constexpr int series_max_terms = 10000;

inline const cplx I{0.0, 1.0};

enum class ErrorKind { pole, nonconvergence, branch, origin, domain, validity, parse, invariant };

class HeunError : public std::runtime_error {
public:
    HeunError(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline double dist_to_int(cplx z) {
    double r = std::round(z.real());
    return std::abs(z - cplx(r, 0.0));
}

inline bool near_int(cplx z, double tol = tau_int) { return dist_to_int(z) < tol; }

// zero or a negative integer
inline bool near_nonpos_int(cplx z, double tol = tau_int) {
    return near_int(z, tol) && std::round(z.real()) <= 0.0;
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// value = m * exp(e); keeps Gamma-weighted terms representable far out in n
struct Scaled {
    cplx m{0.0, 0.0};
    double e = 0.0;

    Scaled() = default;
    Scaled(cplx v) : m(v), e(0.0) { normalize(); }
    Scaled(cplx mm, double ee) : m(mm), e(ee) { normalize(); }

    static Scaled from_log(cplx L) {
        Scaled s;
        if (!std::isfinite(L.real()) && L.real() < 0) return s;
        s.m = std::polar(1.0, L.imag());
        s.e = L.real();
        return s;
    }

    void normalize() {
        double a = std::abs(m);
        if (a == 0.0 || !std::isfinite(a)) {
            if (a == 0.0) e = 0.0;
            return;
        }
        e += std::log(a);
        m /= a;
    }

    bool is_zero() const { return m == cplx(0.0, 0.0); }

    // ln of the magnitude, -inf for zero
    double log_abs() const { return is_zero() ? -std::numeric_limits<double>::infinity() : e; }

    cplx value() const {
        if (is_zero()) return {0.0, 0.0};
        return m * std::exp(e);
    }

    Scaled operator*(const Scaled& o) const { return Scaled(m * o.m, e + o.e); }
    Scaled operator/(const Scaled& o) const { return Scaled(m / o.m, e - o.e); }
    Scaled operator*(cplx v) const { return Scaled(m * v, e); }

    Scaled operator+(const Scaled& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        if (e >= o.e) return Scaled(m + o.m * std::exp(o.e - e), e);
        return Scaled(m * std::exp(e - o.e) + o.m, o.e);
    }
    Scaled operator-(const Scaled& o) const { return *this + Scaled(-o.m, o.e); }
};

}  // namespace heun
