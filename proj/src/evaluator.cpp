#include "heun/evaluator.hpp"

#include <algorithm>
#include <map>

#include "heun/specfun.hpp"

namespace heun {

namespace {

constexpr int min_terms = 10;  // per direction, before the 3-small-terms rule may stop

struct Sum3 {
    cplx u{0.0, 0.0}, d1{0.0, 0.0}, d2{0.0, 0.0};
    void operator+=(const Sum3& o) {
        u += o.u;
        d1 += o.d1;
        d2 += o.d2;
    }
    double mag() const { return std::abs(u) + std::abs(d1) + std::abs(d2); }
};

bool one_sided(const SeriesSolution& s) { return s.basis == Basis::power || s.rec.kind == IndexKind::one_sided; }

cplx inner_z0(const SeriesSolution& s) { return s.inner.has_z0() ? s.inner.z0 : cplx(0.0, 0.0); }

// coefficient store that grows by doubling
class Coeffs {
public:
    explicit Coeffs(SeriesSolution& s) : s_(s) {}

    // false when n lies beyond a finite series
    bool ensure(int n) {
        if (s_.has_coefficients() && s_.coeffs.contains(n)) return true;
        if (s_.basis == Basis::power) {
            if (finite_) return false;
            int want = std::max(2 * std::max(n, 1), 64);
            bool trunc = false;
            s_.coeffs = forward_coefficients(s_.rec, want + 1, &trunc);
            if (trunc) finite_ = true;
            return s_.coeffs.contains(n);
        }
        if (n < 0 && one_sided(s_)) return false;
        int lo = s_.has_coefficients() ? s_.coeffs.n_min : 0, hi = s_.has_coefficients() ? s_.coeffs.n_max() : 0;
        if (n < lo) lo = std::min(2 * n, -64);
        if (n > hi) hi = std::max(2 * n, 64);
        lo = std::min(lo, -64);
        hi = std::max(hi, 64);
        attach_coefficients(s_, lo, hi);
        return s_.coeffs.contains(n);
    }
    const Scaled& at(int n) const { return s_.coeffs.at(n); }

private:
    SeriesSolution& s_;
    bool finite_ = false;
};

// term n of the bracketed sum and its x-derivatives
class Terms {
public:
    Terms(SeriesSolution& s, cplx x) : s_(s), x_(x), co_(s) {
        const EquationParams& in = s.inner;
        switch (s.basis) {
            case Basis::phi_tilde:
            case Basis::psi_plus:
                y_ = 2.0 * I * in.omega * x;
                dy_ = 2.0 * I * in.omega;
                break;
            case Basis::psi_minus:
                y_ = -2.0 * I * in.omega * x;
                dy_ = -2.0 * I * in.omega;
                break;
            case Basis::bessel_J:
            case Basis::hankel_1:
            case Basis::hankel_2:
                y_ = in.q * x;
                dy_ = in.q;
                sq_ = std::sqrt(y_);
                break;
            case Basis::power:
                y_ = x - inner_z0(s);
                dy_ = 1.0;
                break;
        }
    }

    bool available(int n) { return co_.ensure(n); }

    Sum3 term(int n) {
        const Scaled& c = co_.at(n);
        if (c.is_zero()) return {};
        const EquationParams& in = s_.inner;
        const cplx m = double(n) + s_.nu;
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        Scaled g0, g1;  // basis value and its y-derivative
        cplx a{0.0, 0.0}, cc{0.0, 0.0};
        switch (s_.basis) {
            case Basis::phi_tilde: {
                a = in.B2 / 2.0 - I * in.eta;
                cc = m + in.B2;
                g0 = phi_reg_s(a, cc, y_) * sgn;
                g1 = phi_reg_s(a + 1.0, cc + 1.0, y_) * (sgn * a);
                break;
            }
            case Basis::psi_plus: {
                a = in.B2 / 2.0 - I * in.eta;
                cc = m + in.B2;
                Scaled w = rgamma_s(m + I * in.eta + in.B2 / 2.0) * sgn;
                if (w.is_zero()) return {};
                g0 = w * psi_irregular_s({a, cc, y_});
                g1 = w * psi_irregular_s({a + 1.0, cc + 1.0, y_}) * (-a);
                break;
            }
            case Basis::psi_minus: {
                a = m + I * in.eta + in.B2 / 2.0;
                cc = m + in.B2;
                g0 = basis(n);
                g1 = basis(n + 1) * (-a);
                break;
            }
            case Basis::bessel_J:
            case Basis::hankel_1:
            case Basis::hankel_2: {
                g0 = basis(n) * sgn;
                g1 = basis(n + 1) * (-sgn);
                const cplx lam = m + in.B2 - 1.0;
                Scaled v0 = c * g0, v1 = c * g1;
                cplx u = v0.value(), d1 = v1.value();
                cplx d2 = -((lam + 1.0) * d1 + u) / y_;
                return {u, d1 * dy_, d2 * dy_ * dy_};
            }
            case Basis::power: {
                if (n == 0) return {c.value(), 0.0, 0.0};
                if (y_ == cplx(0.0, 0.0)) {
                    if (n == 1) return {0.0, c.value(), 0.0};
                    if (n == 2) return {0.0, 0.0, 2.0 * c.value()};
                    return {};
                }
                Scaled tn = c * Scaled::from_log(double(n) * std::log(y_));
                cplx t = tn.value();
                return {t, double(n) * t / y_, double(n) * double(n - 1) * t / (y_ * y_)};
            }
        }
        // confluent hypergeometric bases: y g'' + (c - y) g' - a g = 0
        Scaled v0 = c * g0, v1 = c * g1;
        cplx u = v0.value(), d1 = v1.value();
        cplx d2 = ((y_ - cc) * d1 + a * u) / y_;
        return {u, d1 * dy_, d2 * dy_ * dy_};
    }

private:
    // the basis functions whose parameters move with n (shared between value and derivative)
    Scaled basis(int n) {
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        const EquationParams& in = s_.inner;
        const cplx m = double(n) + s_.nu;
        Scaled v;
        switch (s_.basis) {
            case Basis::psi_minus: v = psi_irregular_s({m + I * in.eta + in.B2 / 2.0, m + in.B2, y_}); break;
            case Basis::bessel_J: v = bessel_j_w(m + in.B2 - 1.0, y_); break;
            case Basis::hankel_1: v = cyl_scaled(BesselKind::H1, m + in.B2 - 1.0, sq_); break;
            case Basis::hankel_2: v = cyl_scaled(BesselKind::H2, m + in.B2 - 1.0, sq_); break;
            default: break;
        }
        cache_.emplace(n, v);
        return v;
    }

    SeriesSolution& s_;
    cplx x_;
    Coeffs co_;
    cplx y_, dy_{1.0, 0.0}, sq_;
    std::map<int, Scaled> cache_;
};

struct DirResult {
    Sum3 sum;
    int last = 0;
    bool converged = true;
    double ratio = 0.0;
};

DirResult sum_direction(Terms& t, int start, int step, const EvalOptions& opt, const Sum3& base) {
    DirResult r;
    int small = 0;
    double prev = 0.0;
    int count = 0;
    for (int n = start;; n += step) {
        if (opt.fixed_window) {
            const auto& w = *opt.fixed_window;
            if (n < w[0] || n > w[1] || !t.available(n)) return r;
        } else {
            if (!t.available(n)) return r;  // finite series or left truncation
            if (count >= opt.max_terms) {
                r.converged = false;
                return r;
            }
        }
        Sum3 term = t.term(n);
        r.sum += term;
        r.last = n;
        ++count;
        double mag = term.mag();
        if (prev > 0.0) r.ratio = mag / prev;
        prev = mag;
        if (opt.fixed_window) continue;
        Sum3 total = base;
        total += r.sum;
        small = (mag <= opt.rel_tol * total.mag() + opt.abs_tol) ? small + 1 : 0;
        if (count >= min_terms && small >= 3) return r;
    }
}

}  // namespace

bool in_domain(const SeriesSolution& s, cplx z) {
    const cplx x = s.prefactor.inner(z), z0 = inner_z0(s);
    switch (s.domain) {
        case Domain::all_finite: return true;
        case Domain::outside_z0: return std::abs(x) > std::abs(z0);
        case Domain::outside_origin: return x != cplx(0.0, 0.0);
        case Domain::disc_z0: return std::abs(x - z0) < std::abs(z0);
    }
    return false;
}

PointValue evaluate_point(SeriesSolution& s, cplx z, const EvalOptions& opt) {
    PointValue pv;
    pv.z = z;
    pv.in_domain = in_domain(s, z);
    if (!pv.in_domain && opt.enforce_domain) {
        pv.converged = false;
        pv.flag = "domain";
        const double nan = std::numeric_limits<double>::quiet_NaN();
        pv.jet = {cplx(nan, nan), cplx(nan, nan), cplx(nan, nan)};
        return pv;
    }
    const cplx x = s.prefactor.inner(z);
    Terms terms(s, x);

    DirResult right = sum_direction(terms, 0, +1, opt, {});
    Sum3 S = right.sum;
    pv.n_hi = right.last;
    pv.converged = right.converged;
    if (!right.converged) pv.tail_ratio = right.ratio;
    if (!one_sided(s)) {
        DirResult left = sum_direction(terms, -1, -1, opt, S);
        S += left.sum;
        pv.n_lo = left.last;
        if (!left.converged) {
            pv.converged = false;
            pv.tail_ratio = left.ratio;
        }
    }
    if (!pv.converged) pv.flag = "tail";

    // exponential factor of the hypergeometric and power bases
    Jet V{S.u, S.d1, S.d2};
    cplx k{0.0, 0.0};
    switch (s.basis) {
        case Basis::phi_tilde:
        case Basis::psi_plus: k = -I * s.inner.omega; break;
        case Basis::psi_minus:
        case Basis::power: k = I * s.inner.omega; break;
        default: break;
    }
    if (k != cplx(0.0, 0.0)) {
        cplx e = std::exp(k * x);
        V = {e * S.u, e * (S.d1 + k * S.u), e * (S.d2 + 2.0 * k * S.d1 + k * k * S.u)};
    }

    const cplx sc = s.prefactor.scale;
    if (s.prefactor.powers.empty() && s.prefactor.kappa == cplx(0.0, 0.0)) {
        pv.jet = {V.u, sc * V.d1, sc * sc * V.d2};
    } else {
        PrefactorMap::Jet P = s.prefactor.jet(z);
        pv.jet.u = P.f * V.u;
        pv.jet.d1 = P.d1 * V.u + P.f * sc * V.d1;
        pv.jet.d2 = P.d2 * V.u + 2.0 * P.d1 * sc * V.d1 + P.f * sc * sc * V.d2;
    }
    return pv;
}

std::vector<PointValue> evaluate(const EvalRequest& req) {
    SeriesSolution s = req.solution;
    EvalOptions opt;
    opt.rel_tol = req.rel_tol;
    opt.abs_tol = req.abs_tol;
    opt.max_terms = req.max_terms;
    std::vector<PointValue> out;
    out.reserve(req.points.size());
    for (cplx z : req.points) out.push_back(evaluate_point(s, z, opt));
    return out;
}

ResidualEntry ode_residual(const EquationParams& p, const Jet& U, cplx z, double tol) {
    OdeCoefficients o = ode_coefficients(p, z);
    if (std::abs(o.p2) < 1e-300) throw HeunError(ErrorKind::origin, "residual requested at a singular point");
    const cplx t2 = o.p2 * U.d2, t1 = o.p1 * U.d1, t0 = o.p0 * U.u;
    ResidualEntry e;
    e.z = z;
    e.abs_residual = std::abs(t2 + t1 + t0);
    e.scale = std::max({std::abs(t2), std::abs(t1), std::abs(t0)});
    e.residual = e.scale > 0.0 ? e.abs_residual / e.scale : 0.0;
    e.pass = std::isfinite(e.residual) && e.residual < tol;
    return e;
}

ResidualReport residual_report(SeriesSolution& s, const std::vector<cplx>& points, double tol, const EvalOptions& opt) {
    ResidualReport r;
    r.pass = true;
    for (cplx z : points) {
        ResidualEntry e;
        e.z = z;
        try {
            PointValue pv = evaluate_point(s, z, opt);
            if (!pv.in_domain && opt.enforce_domain) {
                e.flag = "domain";
                e.residual = std::numeric_limits<double>::quiet_NaN();
            } else {
                e = ode_residual(s.outer, pv.jet, z, tol);
                e.flag = pv.flag;
            }
        } catch (const HeunError& ex) {
            e.flag = ex.what();
            e.residual = std::numeric_limits<double>::quiet_NaN();
        }
        if (!(e.residual < tol)) e.pass = false;
        r.pass = r.pass && e.pass;
        if (std::isfinite(e.residual))
            r.max_relative = std::max(r.max_relative, e.residual);
        else
            r.max_relative = std::numeric_limits<double>::infinity();
        r.points.push_back(e);
    }
    return r;
}

std::array<cplx, 2> default_anchors(const SolutionSet& s) {
    double r = 3.0 * std::max(std::abs(s.members.empty() ? cplx(1.0) : inner_z0(s.members[0])), 1.0);
    if (!s.members.empty() && !s.members[0].inner.has_z0()) r = 3.0;
    const cplx e = std::polar(1.0, pi / 4.0);
    return {r * e, r * std::conj(e)};
}

Connection connect(SolutionSet& s, const std::array<cplx, 2>& anchors, const std::vector<cplx>& check_points,
                   const EvalOptions& opt_in) {
    if (s.members.size() != 3) throw HeunError(ErrorKind::domain, "connect needs a three-member set");
    EvalOptions opt = opt_in;
    if (!opt.fixed_window) opt.fixed_window = std::array<int, 2>{-80, 160};

    auto values = [&](cplx z) {
        std::array<cplx, 3> v;
        for (int i = 0; i < 3; ++i) {
            PointValue pv = evaluate_point(s.members[std::size_t(i)], z, opt);
            if (!pv.in_domain) throw HeunError(ErrorKind::domain, "connect: point outside the common domain");
            v[std::size_t(i)] = pv.jet.u;
        }
        return v;
    };
    auto a0 = values(anchors[0]), a1 = values(anchors[1]);
    // [H0(a0) H1(a0); H0(a1) H1(a1)] (A, B)^T = (U(a0), U(a1))
    const cplx m00 = a0[1], m01 = a0[2], m10 = a1[1], m11 = a1[2];
    const cplx det = m00 * m11 - m01 * m10;
    const double nrm = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
    if (std::abs(det) < 1e-14 * nrm * nrm) throw HeunError(ErrorKind::domain, "connect: anchor system is singular");
    Connection c;
    c.A = (a0[0] * m11 - m01 * a1[0]) / det;
    c.B = (m00 * a1[0] - a0[0] * m10) / det;
    c.condition = nrm * nrm / std::abs(det);
    for (cplx z : check_points) {
        auto v = values(z);
        cplx fit = c.A * v[1] + c.B * v[2];
        double scale = std::max({std::abs(v[0]), std::abs(c.A * v[1]), std::abs(c.B * v[2])});
        c.max_defect = std::max(c.max_defect, std::abs(v[0] - fit) / scale);
    }

    const SeriesSolution& m = s.members[0];
    if (m.inner.is_ince()) {
        c.A_pred = c.B_pred = 0.5;
        c.prediction_available = true;
    } else {
        // term by term continuation; the sign follows Im y of the first anchor (principal branches)
        const cplx y = 2.0 * I * m.inner.omega * m.prefactor.inner(anchors[0]);
        const double eps = y.imag() >= 0 ? 1.0 : -1.0;
        const cplx a = m.inner.B2 / 2.0 - I * m.inner.eta;
        c.A_pred = std::exp(I * pi * eps * a);
        c.B_pred = std::exp(I * pi * eps * (a - m.nu - m.inner.B2)) * rgamma(a);
        c.prediction_available = true;
    }
    return c;
}

RatioDiagnostics convergence_ratios(SeriesSolution& s, cplx z, int window) {
    if (s.basis != Basis::psi_minus) throw HeunError(ErrorKind::domain, "convergence_ratios expects the psi_minus member");
    if (window < 2) throw HeunError(ErrorKind::domain, "convergence_ratios: window too small");
    const cplx x = s.prefactor.inner(z), y = -2.0 * I * s.inner.omega * x;
    const EquationParams& in = s.inner;
    if (!s.has_coefficients() || s.coeffs.n_max() < window + 1 || s.coeffs.n_min > -window - 1)
        attach_coefficients(s, -window - 2, window + 2);
    auto term = [&](int n) {
        const cplx m = double(n) + s.nu;
        return s.coeffs.at(n) * psi_irregular_s({m + I * in.eta + in.B2 / 2.0, m + in.B2, y});
    };
    RatioDiagnostics d;
    d.n = window;
    const cplx z0 = inner_z0(s), u = z0 != cplx(0.0, 0.0) ? in.B1 / z0 : cplx(0.0, 0.0);
    d.right = (term(window + 1) / term(window)).value();
    d.right_pred = z0 / x;
    d.right_pred_1 = z0 / x * (1.0 + (in.B2 + u - 2.0) / double(window));
    if (!one_sided(s)) {
        d.left = (term(-window - 1) / term(-window)).value();
        d.left_pred = 1.0;
        d.left_pred_1 = 1.0 + 2.0 / double(-window);
        d.left_err = std::abs(d.left / d.left_pred - 1.0);
    }
    d.right_err = std::abs(d.right / d.right_pred - 1.0);
    return d;
}

}  // namespace heun
