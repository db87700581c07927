#include "heun/recurrence.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstdlib>

namespace heun {

namespace {

constexpr int miller_runway = 40;
constexpr int max_cf_depth = 7680;

[[noreturn]] void cf_pole(const char* dir, int level) {
    throw HeunError(ErrorKind::pole, std::string("continued fraction (") + dir + "): zero denominator at level " +
                                         std::to_string(level));
}

cplx right_fraction(const ThreeTermRecurrence& rec, int depth) {
    // alpha_0 gamma_1 / (beta_1 - alpha_1 gamma_2 / (beta_2 - ...))
    cplx t{0.0, 0.0};
    for (int n = depth; n >= 1; --n) {
        cplx num = rec.a(n - 1) * rec.g(n);
        if (num == cplx(0.0, 0.0)) {
            t = 0.0;
            continue;
        }
        cplx den = rec.b(n) - t;
        if (den == cplx(0.0, 0.0)) cf_pole("rightward", n);
        t = num / den;
    }
    return t;
}

cplx left_fraction(const ThreeTermRecurrence& rec, int depth) {
    cplx l{0.0, 0.0};
    for (int m = -depth; m <= -1; ++m) {
        cplx num = rec.a(m) * rec.g(m + 1);
        if (num == cplx(0.0, 0.0)) {
            l = 0.0;
            continue;
        }
        cplx den = rec.b(m) - l;
        if (den == cplx(0.0, 0.0)) cf_pole("leftward", m);
        l = num / den;
    }
    return l;
}

cplx residual_at(const ThreeTermRecurrence& rec, int depth) {
    cplx r = rec.b(0) - right_fraction(rec, depth);
    if (rec.kind == IndexKind::two_sided) r -= left_fraction(rec, depth);
    return r;
}

double res_scale(const ThreeTermRecurrence& rec) { return 1.0 + std::abs(rec.b(0)); }

}  // namespace

int default_cf_depth() {
    if (const char* s = std::getenv("HEUN_CF_DEPTH")) {
        int d = std::atoi(s);
        if (d >= 1) return d;
    }
    return 60;
}

cplx cf_residual_one_sided(const ThreeTermRecurrence& rec, int depth) {
    if (depth < 1) throw HeunError(ErrorKind::domain, "cf depth must be >= 1");
    return rec.b(0) - right_fraction(rec, depth);
}

cplx cf_residual_two_sided(const ThreeTermRecurrence& rec, cplx nu, int depth) {
    if (depth < 1) throw HeunError(ErrorKind::domain, "cf depth must be >= 1");
    ThreeTermRecurrence r = rec;
    r.nu = nu;
    return r.b(0) - right_fraction(r, depth) - left_fraction(r, depth);
}

CfValue cf_residual_auto(const ThreeTermRecurrence& rec) {
    int d = default_cf_depth();
    cplx prev = residual_at(rec, d);
    const double scale = res_scale(rec);
    while (d < max_cf_depth) {
        cplx next = residual_at(rec, 2 * d);
        d *= 2;
        if (std::abs(next - prev) <= 1e-12 * scale) return {next, d, true};
        prev = next;
    }
    return {prev, d, false};
}

namespace {

// damped secant on f; returns (root, f(root), iterations)
struct SecantOut {
    cplx x, fx;
    int it;
};

SecantOut secant(const std::function<cplx(cplx)>& f, const std::function<double(cplx)>& scale, cplx seed) {
    cplx x0 = seed;
    cplx x1 = seed + cplx(1e-4, 1e-5) * std::max(1.0, std::abs(seed));
    cplx f0 = f(x0), f1 = f(x1);
    if (!finite(f0) || !finite(f1)) throw HeunError(ErrorKind::nonconvergence, "residual not finite at seed");
    for (int it = 1; it <= 200; ++it) {
        if (f1 == f0) {
            if (std::abs(f1) < 1e-10 * scale(x1)) return {x1, f1, it};
            throw HeunError(ErrorKind::nonconvergence, "secant stalled (flat residual)");
        }
        cplx dx = -f1 * (x1 - x0) / (f1 - f0);
        // damping: cap the step, then halve while the residual grows a lot (pole avoidance)
        double cap = 0.5 * std::max(1.0, std::abs(x1));
        if (std::abs(dx) > cap) dx *= cap / std::abs(dx);
        cplx x2 = x1 + dx, f2 = f(x2);
        for (int h = 0; h < 8 && (!finite(f2) || std::abs(f2) > 10.0 * std::abs(f1) + 1e-300); ++h) {
            dx *= 0.5;
            x2 = x1 + dx;
            f2 = f(x2);
        }
        if (!finite(f2)) throw HeunError(ErrorKind::nonconvergence, "residual not finite during secant");
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (std::abs(dx) < 1e-12 * std::max(1.0, std::abs(x1)) && std::abs(f1) < 1e-10 * scale(x1)) return {x1, f1, it};
        if (f1 == cplx(0.0, 0.0)) return {x1, f1, it};
    }
    throw HeunError(ErrorKind::nonconvergence, "secant: no convergence after 200 iterations");
}

cplx canonical_nu(cplx nu) { return nu - std::floor(nu.real() + 1e-13); }

}  // namespace

SolveResult solve_characteristic(const CharacteristicProblem& problem, cplx seed) {
    auto run = [&](int depth, cplx s) {
        auto f = [&](cplx x) {
            ThreeTermRecurrence r = problem.build(x);
            r.kind = problem.kind;
            return residual_at(r, depth);
        };
        auto sc = [&](cplx x) {
            ThreeTermRecurrence r = problem.build(x);
            return res_scale(r);
        };
        return secant(f, sc, s);
    };
    ThreeTermRecurrence r0 = problem.build(seed);
    r0.kind = problem.kind;
    int depth = cf_residual_auto(r0).depth;
    SecantOut a = run(depth, seed);
    SecantOut b = run(depth * 3 / 2, a.x);

    SolveResult out;
    out.root = a.x;
    out.residual = a.fx;
    out.depth = depth;
    out.iterations = a.it;
    out.depth_shift = std::abs(a.x - b.x);
    out.depth_stable = out.depth_shift < 1e-10 * std::max(1.0, std::abs(a.x));
    if (problem.unknown == Unknown::nu && problem.kind == IndexKind::two_sided) {
        out.root = canonical_nu(out.root);
        ThreeTermRecurrence r = problem.build(out.root);
        r.kind = problem.kind;
        out.residual = residual_at(r, depth);
    }
    return out;
}

namespace {

// r_n = c_n / c_{n-1} for n = 1..top, from a zero tail at top + runway
std::vector<cplx> right_ratios(const ThreeTermRecurrence& rec, int top, int runway) {
    std::vector<cplx> r(top + 2, cplx(0.0, 0.0));
    cplx t{0.0, 0.0};
    for (int n = top + runway; n >= 1; --n) {
        cplx den = rec.b(n) + rec.a(n) * t;
        if (den == cplx(0.0, 0.0)) {
            if (rec.g(n) == cplx(0.0, 0.0)) {
                t = 0.0;
            } else {
                cf_pole("rightward ratio", n);
            }
        } else {
            t = -rec.g(n) / den;
        }
        if (n <= top) r[n] = t;
    }
    return r;
}

// s_n = c_n / c_{n+1} for n = -1..-bottom
std::vector<cplx> left_ratios(const ThreeTermRecurrence& rec, int bottom, int runway) {
    std::vector<cplx> s(bottom + 2, cplx(0.0, 0.0));
    cplx t{0.0, 0.0};
    for (int n = -(bottom + runway); n <= -1; ++n) {
        cplx den = rec.b(n) + rec.g(n) * t;
        if (den == cplx(0.0, 0.0)) {
            if (rec.a(n) == cplx(0.0, 0.0)) {
                t = 0.0;
            } else {
                cf_pole("leftward ratio", n);
            }
        } else {
            t = -rec.a(n) / den;
        }
        if (-n <= bottom) s[-n] = t;
    }
    return s;
}

double max_rel_diff(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    double m = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) {
        double d = std::abs(u[i] - v[i]);
        double s = std::abs(u[i]);
        m = std::max(m, s > 0 ? d / s : d);
    }
    return m;
}

}  // namespace

CoefficientSequence minimal_solution(const ThreeTermRecurrence& rec_in, cplx nu, int n_min, int n_max) {
    if (n_min > 0 || n_max < 0) throw HeunError(ErrorKind::domain, "minimal_solution: range must contain n = 0");
    ThreeTermRecurrence rec = rec_in;
    rec.nu = nu;
    if (rec.kind == IndexKind::one_sided) n_min = 0;

    int runway = miller_runway;
    std::vector<cplx> r, s;
    for (;;) {
        r = right_ratios(rec, n_max, runway);
        std::vector<cplx> r2 = right_ratios(rec, n_max, 2 * runway);
        bool ok = max_rel_diff(r, r2) < 1e-13;
        if (rec.kind == IndexKind::two_sided && n_min < 0) {
            s = left_ratios(rec, -n_min, runway);
            std::vector<cplx> s2 = left_ratios(rec, -n_min, 2 * runway);
            ok = ok && max_rel_diff(s, s2) < 1e-13;
        }
        if (ok) break;
        runway *= 2;
        if (runway > 20000)
            throw HeunError(ErrorKind::nonconvergence, "minimal_solution: backward recurrence runway did not settle");
    }

    CoefficientSequence out;
    out.n_min = n_min;
    out.c.assign(std::size_t(n_max - n_min + 1), Scaled());
    out.c[std::size_t(-n_min)] = Scaled(cplx(1.0, 0.0));
    for (int n = 1; n <= n_max; ++n) out.c[std::size_t(n - n_min)] = out.c[std::size_t(n - 1 - n_min)] * r[n];
    for (int n = -1; n >= n_min; --n) out.c[std::size_t(n - n_min)] = out.c[std::size_t(n + 1 - n_min)] * s[-n];
    return out;
}

double max_row_defect(const ThreeTermRecurrence& rec, const CoefficientSequence& c) {
    double worst = 0.0;
    for (int n = c.n_min + 1; n < c.n_max(); ++n) {
        if (n == 0) continue;  // row 0 is the characteristic equation itself
        Scaled t1 = c.at(n + 1) * rec.a(n), t2 = c.at(n) * rec.b(n), t3 = c.at(n - 1) * rec.g(n);
        Scaled sum = t1 + t2 + t3;
        double big = std::max({t1.log_abs(), t2.log_abs(), t3.log_abs()});
        if (!std::isfinite(big) || sum.is_zero()) continue;
        worst = std::max(worst, std::exp(sum.e - big));
    }
    return worst;
}

Spectrum finite_spectrum(const CharacteristicProblem& problem, int N) {
    if (N < 0) throw HeunError(ErrorKind::domain, "finite_spectrum: N must be >= 0");
    const int dim = N + 1;
    ThreeTermRecurrence r0 = problem.build(0.0), r1 = problem.build(1.0), r2 = problem.build(2.0);
    Eigen::MatrixXcd M(dim, dim);
    M.setZero();
    Eigen::VectorXcd slope(dim);
    for (int n = 0; n < dim; ++n) {
        cplx s = r1.b(n) - r0.b(n);
        cplx s2 = r2.b(n) - r0.b(n);
        if (std::abs(s2 - 2.0 * s) > 1e-12 * (1.0 + std::abs(s2)) || s == cplx(0.0, 0.0))
            throw HeunError(ErrorKind::domain, "finite_spectrum: unknown does not enter beta_n affinely");
        for (int k : {n - 1, n + 1}) {
            if (k < 0 || k >= dim) continue;
            cplx v0 = k < n ? r0.g(n) : r0.a(n), v1 = k < n ? r1.g(n) : r1.a(n);
            if (std::abs(v1 - v0) > 1e-12 * (1.0 + std::abs(v0)))
                throw HeunError(ErrorKind::domain, "finite_spectrum: off-diagonal entries depend on the unknown");
        }
        slope(n) = s;
        M(n, n) = r0.b(n);
        if (n + 1 < dim) M(n, n + 1) = r0.a(n);
        if (n >= 1) M(n, n - 1) = r0.g(n);
    }

    Spectrum sp;
    // det(M + lambda S) = 0  <=>  lambda eigenvalue of -S^{-1} M
    Eigen::MatrixXcd A = -(slope.cwiseInverse().asDiagonal() * M);

    bool real_entries = true;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (A(i, j).imag() != 0.0) real_entries = false;
    sp.hypothesis_holds = real_entries;
    for (int i = 0; i + 1 < dim && sp.hypothesis_holds; ++i)
        if (!(A(i, i + 1).real() * A(i + 1, i).real() > 0.0)) sp.hypothesis_holds = false;

    if (sp.hypothesis_holds) {
        // balancing similarity makes the matrix symmetric tridiagonal
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i) {
            T(i, i) = A(i, i).real();
            if (i + 1 < dim) {
                double off = std::sqrt(A(i, i + 1).real() * A(i + 1, i).real());
                off = A(i, i + 1).real() < 0 ? -off : off;
                T(i, i + 1) = T(i + 1, i) = off;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        for (int i = 0; i < dim; ++i) sp.roots.emplace_back(es.eigenvalues()(i), 0.0);
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
        for (int i = 0; i < dim; ++i) sp.roots.push_back(es.eigenvalues()(i));
        std::sort(sp.roots.begin(), sp.roots.end(), [](cplx u, cplx v) {
            return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
        });
    }
    // a few guarded Newton steps on the continuant; the nonsymmetric eigensolver leaves ~1e-12 relative error
    auto det = [&](cplx lam, cplx& d) {
        cplx pm = 1.0, p0 = M(0, 0) + lam * slope(0), dm = 0.0, d0 = slope(0);
        for (int k = 1; k < dim; ++k) {
            const cplx diag = M(k, k) + lam * slope(k), off = M(k, k - 1) * M(k - 1, k);
            cplx p1 = diag * p0 - off * pm, d1 = slope(k) * p0 + diag * d0 - off * dm;
            const double s = std::max(std::abs(p1), std::abs(p0));
            if (s > 1e100 || (s < 1e-100 && s > 0.0)) p0 /= s, p1 /= s, d0 /= s, d1 /= s;
            pm = p0, p0 = p1, dm = d0, d0 = d1;
        }
        d = d0;
        return p0;
    };
    for (int i = 0; i < dim; ++i) {
        double guard = std::numeric_limits<double>::infinity();
        for (int j = 0; j < dim; ++j)
            if (j != i) guard = std::min(guard, std::abs(sp.roots[i] - sp.roots[j]));
        cplx lam = sp.roots[i], d;
        cplx f = det(lam, d);
        for (int it = 0; it < 3 && f != cplx(0.0, 0.0); ++it) {
            if (d == cplx(0.0, 0.0)) break;
            cplx step = f / d;
            if (!(std::abs(step) < 0.25 * guard)) break;
            cplx dn, fn = det(lam - step, dn);
            if (!(std::abs(fn) < std::abs(f))) break;
            lam -= step, f = fn, d = dn;
        }
        sp.roots[i] = sp.hypothesis_holds ? cplx(lam.real(), 0.0) : lam;
    }

    sp.all_real = std::all_of(sp.roots.begin(), sp.roots.end(),
                              [](cplx z) { return std::abs(z.imag()) <= 1e-12 * (1.0 + std::abs(z)); });
    sp.min_gap = dim > 1 ? std::numeric_limits<double>::infinity() : 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) sp.min_gap = std::min(sp.min_gap, std::abs(sp.roots[i] - sp.roots[j]));
    return sp;
}

}  // namespace heun
