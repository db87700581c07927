#include "heun/special_cases.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace heun {

cplx trig_scale(TrigKind t) { return t == TrigKind::real ? cplx(1.0, 0.0) : I; }

EquationParams mathieu_to_ince(const MathieuParams& m) {
    if (m.k2 == cplx(0.0, 0.0)) throw HeunError(ErrorKind::invariant, "Mathieu map: k2 = 0 is the free equation");
    return EquationParams::ince_che(-0.5, 1.0, m.k2 / 2.0 - m.a / 4.0, 1.0, m.k2);
}

EquationParams whe_to_che(const WHEParams& w) {
    if (w.xi == cplx(0.0, 0.0)) throw HeunError(ErrorKind::invariant, "WHE map: xi = 0");
    // i omega = xi/2, i eta = (p+1)/2
    cplx omega = -I * w.xi / 2.0, eta = -I * (w.p + 1.0) / 2.0;
    return EquationParams::che(-0.5, 1.0, ((w.p + 1.0) * w.xi - w.vartheta) / 4.0, 1.0, omega, eta);
}

EquationParams whe_ince_limit(cplx vartheta, cplx k2) {
    // (p+1) xi -> p xi = 2 k2 and -2 eta omega = (p+1) xi / 2 -> k2
    EquationParams c;
    c.kind = EquationKind::CHE;
    c.B1 = -0.5;
    c.B2 = 1.0;
    c.B3 = (2.0 * k2 - vartheta) / 4.0;
    c.z0 = 1.0;
    return whittaker_ince_limit(c, k2);
}

std::optional<int> whe_finite_series(const WHEParams& w) {
    cplx s = (w.p + 1.0) / 2.0 + 0.5;
    if (!near_nonpos_int(s)) return std::nullopt;
    return int(std::lround(-s.real()));
}

Jet jet_in_u(const Jet& U, cplx u, TrigKind t) {
    cplx s = trig_scale(t);
    cplx z1 = -s * std::sin(2.0 * s * u), z2 = -2.0 * s * s * std::cos(2.0 * s * u);
    return {U.u, U.d1 * z1, U.d2 * z1 * z1 + U.d1 * z2};
}

static double rel(cplx r, std::initializer_list<double> parts) {
    double sc = 0.0;
    for (double p : parts) sc = std::max(sc, p);
    if (sc == 0.0) return std::abs(r) == 0.0 ? 0.0 : INFINITY;
    return std::abs(r) / sc;
}

double mathieu_residual(const MathieuParams& m, const Jet& w, cplx u) {
    cplx s = trig_scale(m.sigma);
    cplx pot = s * s * (m.a - 2.0 * m.k2 * std::cos(2.0 * s * u));
    return rel(w.d2 + pot * w.u, {std::abs(w.d2), std::abs(pot * w.u)});
}

double whe_residual(const WHEParams& p, const Jet& w, cplx u) {
    cplx s = trig_scale(p.kappa);
    cplx x2 = p.xi * p.xi / 8.0;
    cplx pot = s * s * (p.vartheta - x2 - (p.p + 1.0) * p.xi * std::cos(2.0 * s * u) + x2 * std::cos(4.0 * s * u));
    return rel(w.d2 + pot * w.u, {std::abs(w.d2), std::abs(pot * w.u)});
}

// ---- Fourier oracle ------------------------------------------------------------------------

const char* fourier_class_name(FourierClass c) {
    switch (c) {
        case FourierClass::even_pi: return "ce_2n";
        case FourierClass::even_2pi: return "ce_2n+1";
        case FourierClass::odd_2pi: return "se_2n+1";
        case FourierClass::odd_pi: return "se_2n+2";
    }
    return "?";
}

std::vector<cplx> mathieu_fourier_values(cplx k2, FourierClass c, int N) {
    if (N < 8) throw HeunError(ErrorKind::domain, "Fourier oracle: truncation must be >= 8");
    // symmetric tridiagonal: diagonal = squared wavenumbers (with the +-k2 corner for the 2pi classes),
    // off-diagonal k2; the cos(0) row is rescaled by sqrt(2)
    Eigen::VectorXcd d(N);
    for (int r = 0; r < N; ++r) {
        double w = 0.0;
        switch (c) {
            case FourierClass::even_pi: w = 2.0 * r; break;
            case FourierClass::even_2pi:
            case FourierClass::odd_2pi: w = 2.0 * r + 1.0; break;
            case FourierClass::odd_pi: w = 2.0 * r + 2.0; break;
        }
        d(r) = w * w;
    }
    if (c == FourierClass::even_2pi) d(0) += k2;
    if (c == FourierClass::odd_2pi) d(0) -= k2;
    auto off = [&](int r) { return (c == FourierClass::even_pi && r == 0) ? std::sqrt(2.0) * k2 : k2; };

    std::vector<cplx> out;
    if (k2 == cplx(0.0, 0.0)) {
        // diagonal; the eigensolver's scaling would cost an ulp
        for (int r = 0; r < N; ++r) out.push_back(d(r));
    } else if (k2.imag() == 0.0) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
        for (int r = 0; r < N; ++r) {
            T(r, r) = d(r).real();
            if (r + 1 < N) T(r, r + 1) = T(r + 1, r) = off(r).real();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
        for (int r = 0; r < N; ++r) out.emplace_back(es.eigenvalues()(r), 0.0);
    } else {
        Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N, N);
        for (int r = 0; r < N; ++r) {
            T(r, r) = d(r);
            if (r + 1 < N) T(r, r + 1) = T(r + 1, r) = off(r);
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, false);
        for (int r = 0; r < N; ++r) out.push_back(es.eigenvalues()(r));
    }
    std::sort(out.begin(), out.end(),
              [](cplx u, cplx v) { return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag(); });
    return out;
}

OracleResult mathieu_fourier_oracle(cplx k2, FourierClass c, int truncation) {
    const int keep = truncation / 2;
    std::vector<cplx> lo = mathieu_fourier_values(k2, c, truncation);
    for (int N = truncation; N <= 4096; N *= 2) {
        std::vector<cplx> hi = mathieu_fourier_values(k2, c, 2 * N);
        double shift = 0.0;
        for (int i = 0; i < keep; ++i) shift = std::max(shift, std::abs(hi[i] - lo[i]) / std::max(1.0, std::abs(hi[i])));
        if (shift <= 1e-10) {
            OracleResult r;
            r.values.assign(hi.begin(), hi.begin() + keep);
            r.truncation = N;
            r.doubling_shift = shift;
            return r;
        }
        lo = std::move(hi);
    }
    throw HeunError(ErrorKind::nonconvergence, "Fourier oracle: no agreement under doubling up to size 4096");
}

// ---- Bessel-series solutions ---------------------------------------------------------------

FourierClass mathieu_set_class(int set) {
    switch (set) {
        case 1: return FourierClass::even_pi;
        case 2: return FourierClass::even_2pi;
        case 3: return FourierClass::odd_pi;
        case 4: return FourierClass::odd_2pi;
    }
    throw HeunError(ErrorKind::domain, "Mathieu: set must be 1..4");
}

MathieuCharacteristic mathieu_characteristic(cplx k2, int set, int index, TrigKind sigma) {
    mathieu_set_class(set);
    if (index < 0) throw HeunError(ErrorKind::domain, "Mathieu: index must be >= 0");
    EquationParams p = mathieu_to_ince({0.0, k2, sigma});
    CharacteristicProblem pr = b3_problem(set, p);

    // seeds from the truncated determinant of the same recurrence
    Spectrum sp = finite_spectrum(pr, std::max(40, 8 * (index + 2)));
    std::vector<cplx> seeds;
    for (cplx b3 : sp.roots) seeds.push_back(2.0 * k2 - 4.0 * b3);
    std::sort(seeds.begin(), seeds.end(),
              [](cplx u, cplx v) { return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag(); });
    cplx seed = seeds.at(std::size_t(index));

    MathieuCharacteristic out;
    out.set = set;
    out.index = index;
    out.solve = solve_characteristic(pr, k2 / 2.0 - seed / 4.0);
    out.a = 2.0 * k2 - 4.0 * out.solve.root;

    // landing on a neighbouring root is a failure, not an answer
    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (i != std::size_t(index) && std::abs(out.a - seeds[i]) < std::abs(out.a - seed))
            throw HeunError(ErrorKind::nonconvergence, "Mathieu: secant left the seed's basin");
    return out;
}

MathieuSolution mathieu_solution(const MathieuParams& m, int set) {
    mathieu_set_class(set);
    MathieuSolution w;
    w.set = set;
    w.params = m;
    SolutionSet s = ince_set(set, mathieu_to_ince(m), 0.0);
    w.series = s.members.at(0);
    if (w.series.prefactor.scale != cplx(1.0, 0.0) || w.series.prefactor.shift != cplx(0.0, 0.0))
        throw HeunError(ErrorKind::invariant, "Mathieu: unexpected change of variable in the set word");
    w.series.prefactor = PrefactorMap{};
    w.series.name = "w" + std::to_string(set);
    return w;
}

Jet mathieu_eval(MathieuSolution& w, cplx u) {
    cplx s = trig_scale(w.params.sigma);
    cplx z = std::cos(s * u);
    z *= z;
    PointValue pv = evaluate_point(w.series, z);
    if (!pv.converged) throw HeunError(ErrorKind::nonconvergence, "Mathieu: series did not settle");
    Jet G = jet_in_u(pv.jet, u, w.params.sigma);

    cplx T(1.0, 0.0), T1(0.0, 0.0), T2(0.0, 0.0);
    switch (w.set) {
        case 2: T = std::cos(s * u), T1 = -s * std::sin(s * u), T2 = -s * s * T; break;
        case 3: T = std::sin(2.0 * s * u), T1 = 2.0 * s * std::cos(2.0 * s * u), T2 = -4.0 * s * s * T; break;
        case 4: T = std::sin(s * u), T1 = s * std::cos(s * u), T2 = -s * s * T; break;
        default: break;
    }
    return {T * G.u, T1 * G.u + T * G.d1, T2 * G.u + 2.0 * T1 * G.d1 + T * G.d2};
}

// ---- normal forms ------------------------------------------------------------------------------

NormalFormQ NormalFormQ::canonical() const {
    NormalFormQ c;
    c.poly_degree = poly_degree < 0 ? -1 : poly_degree;
    for (const Pole& p : poles)
        if (p.order >= 1) c.poles.push_back(p);
    auto less = [](const Pole& u, const Pole& v) {
        if (u.at.real() != v.at.real()) return u.at.real() < v.at.real();
        if (u.at.imag() != v.at.imag()) return u.at.imag() < v.at.imag();
        return u.order < v.order;
    };
    std::sort(c.poles.begin(), c.poles.end(), less);
    std::vector<Pole> merged;
    for (const Pole& p : c.poles) {
        if (!merged.empty() && std::abs(merged.back().at - p.at) <= 1e-12 * (1.0 + std::abs(p.at)))
            merged.back().order = std::max(merged.back().order, p.order);
        else
            merged.push_back(p);
    }
    c.poles = std::move(merged);
    return c;
}

const char* heun_class_name(HeunClass c) {
    switch (c) {
        case HeunClass::General: return "General";
        case HeunClass::Confluent: return "Confluent";
        case HeunClass::DoubleConfluent: return "DoubleConfluent";
        case HeunClass::Biconfluent: return "Biconfluent";
        case HeunClass::Triconfluent: return "Triconfluent";
        case HeunClass::NotHeun: return "NotHeun";
    }
    return "?";
}

// Templates up to an affine relabelling of the finite singular points. The first matching template wins,
// so degenerate forms (vanishing leading coefficients) land in the least confluent class they fit.
HeunClass classify_normal_form(const NormalFormQ& qf) {
    NormalFormQ c = qf.canonical();
    int np = int(c.poles.size()), maxo = 0;
    for (const auto& p : c.poles) maxo = std::max(maxo, p.order);
    const int d = c.poly_degree;

    if (d < 0 && np <= 3 && maxo <= 2) return HeunClass::General;
    if (d == 0 && np <= 2 && maxo <= 2) return HeunClass::Confluent;
    if (d == 0 && np == 1 && maxo <= 4) return HeunClass::DoubleConfluent;
    if (d >= 1 && d <= 2 && np <= 1 && maxo <= 2) return HeunClass::Biconfluent;
    if (d >= 3 && d <= 4 && np == 0) return HeunClass::Triconfluent;
    return HeunClass::NotHeun;
}

PotentialRecord cho_ho_record() {
    return {"Cho-Ho", "V(u) = -(b^2/4) sinh^2 u - (l^2 - 1/4) / cosh^2 u, l = 1, 2, 3, ...",
            "Whittaker-Ince limit of the confluent Heun equation"};
}

}  // namespace heun
