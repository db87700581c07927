#include "doctest.h"

#include <random>

#include "heun/recurrence.hpp"

using namespace heun;

namespace {

ThreeTermRecurrence constant_rec(cplx a, cplx b, cplx g, IndexKind kind) {
    ThreeTermRecurrence r;
    r.alpha = [a](cplx) { return a; };
    r.beta = [b](cplx) { return b; };
    r.gamma = [g](cplx) { return g; };
    r.kind = kind;
    return r;
}

// CHE set-1 c-recurrence written out by hand for the tests
struct Che {
    cplx B1{0.7, 0.2}, B2{1.3, -0.1}, B3{0.4, 0.3}, z0{1.0, 0.0}, w{0.8, 0.1}, eta{0.3, -0.2};
};

ThreeTermRecurrence che_c(const Che& p) {
    ThreeTermRecurrence r;
    r.alpha = [](cplx m) { return m + 1.0; };
    r.beta = [p](cplx m) {
        return m * (m + p.B2 - 1.0 + 2.0 * I * p.w * p.z0) + p.B3 + I * p.w * (p.z0 * p.B2 + p.B1);
    };
    r.gamma = [p](cplx m) {
        return 2.0 * I * p.w * (p.z0 * (m + p.B2 - 1.0) + p.B1) * (m + I * p.eta + p.B2 / 2.0 - 1.0);
    };
    return r;
}

ThreeTermRecurrence che_b(const Che& p) {
    ThreeTermRecurrence r = che_c(p);
    r.alpha = [p](cplx m) { return (m + 1.0) * (m + I * p.eta + p.B2 / 2.0); };
    r.gamma = [p](cplx m) { return 2.0 * I * p.w * p.z0 * (m + p.B2 + p.B1 / p.z0 - 1.0); };
    return r;
}

CharacteristicProblem nu_problem(const ThreeTermRecurrence& base) {
    CharacteristicProblem pr;
    pr.build = [base](cplx nu) {
        ThreeTermRecurrence r = base;
        r.nu = nu;
        return r;
    };
    return pr;
}

}  // namespace

TEST_CASE("one-sided continued fraction basics") {
    auto r = constant_rec(1.0, 3.0, 0.0, IndexKind::one_sided);
    CHECK(cf_residual_one_sided(r, 10) == cplx(3.0, 0.0));
    r = constant_rec(1.0, 3.0, 2.0, IndexKind::one_sided);
    // depth 1: 3 - 2/3; depth 2: 3 - 2/(3 - 2/3)
    CHECK(std::abs(cf_residual_one_sided(r, 1) - (3.0 - 2.0 / 3.0)) < 1e-15);
    CHECK(std::abs(cf_residual_one_sided(r, 2) - (3.0 - 2.0 / (3.0 - 2.0 / 3.0))) < 1e-15);
    CHECK_THROWS_AS(cf_residual_one_sided(r, 0), HeunError);
}

TEST_CASE("two-sided residual collapses when alpha gamma vanishes") {
    auto r = constant_rec(0.0, {2.0, 1.0}, 5.0, IndexKind::two_sided);
    CHECK(cf_residual_two_sided(r, 0.3, 60) == cplx(2.0, 1.0));
}

TEST_CASE("HEUN_CF_DEPTH overrides the default depth") {
    setenv("HEUN_CF_DEPTH", "17", 1);
    CHECK(default_cf_depth() == 17);
    unsetenv("HEUN_CF_DEPTH");
    CHECK(default_cf_depth() == 60);
}

TEST_CASE("equal beta and alpha gamma products give equal residuals") {
    Che p;
    auto c = che_c(p), b = che_b(p);
    for (cplx nu : {cplx(0.3, 0.1), cplx(0.77, -0.4)}) {
        cplx rc = cf_residual_two_sided(c, nu, 60), rb = cf_residual_two_sided(b, nu, 60);
        CHECK(std::abs(rc - rb) < 1e-12 * (1.0 + std::abs(rc)));
    }
}

TEST_CASE("solving for nu: shift covariance, self-consistency, decay of the coefficients") {
    Che p;
    auto c = che_c(p);
    SolveResult s = solve_characteristic(nu_problem(c), {0.4, 0.2});
    CHECK(s.depth_stable);
    CHECK(s.root.real() >= 0.0);
    CHECK(s.root.real() < 1.0);

    // relabelling nu -> nu + 1 gives the same root set modulo 1
    SolveResult s1 = solve_characteristic(nu_problem(c), s.root + 1.0 + cplx(0.01, 0.0));
    CHECK(std::abs(s1.root - s.root) < 1e-9);

    CoefficientSequence cs = minimal_solution(c, s.root, -60, 80);
    CHECK(cs.value(0) == cplx(1.0, 0.0));
    ThreeTermRecurrence rr = c;
    rr.nu = s.root;
    // row 0 of the raw recurrence is the characteristic equation
    cplx row0 = rr.a(0) * cs.value(1) + rr.b(0) + rr.g(0) * cs.value(-1);
    CHECK(std::abs(row0) < 1e-9 * (1.0 + std::abs(rr.b(0))));
    CHECK(max_row_defect(rr, cs) < 1e-9);

    // c_{n+1}/c_n -> -2 i w z0 and c_{n-1}/c_n -> -1/n (n negative)
    cplx right = cs.value(80) / cs.value(79);
    CHECK(std::abs(right / (-2.0 * I * p.w * p.z0) - 1.0) < 0.05);
    cplx left = cs.at(-60).value() / cs.at(-59).value();
    CHECK(std::abs(left * 59.0 - 1.0) < 0.1);
}

TEST_CASE("solving for an equation constant") {
    // gamma = 0: root where beta_0 = 0
    CharacteristicProblem pr;
    pr.kind = IndexKind::one_sided;
    pr.unknown = Unknown::equation_constant;
    pr.build = [](cplx x) { return constant_rec(1.0, x - cplx(2.0, 1.0), 0.0, IndexKind::one_sided); };
    SolveResult s = solve_characteristic(pr, 0.0);
    CHECK(std::abs(s.root - cplx(2.0, 1.0)) < 1e-12);
}

TEST_CASE("one-sided truncation and finite series") {
    // alpha_{-1} = 0 at nu = 0 makes everything left of n = 0 vanish
    ThreeTermRecurrence r;
    r.alpha = [](cplx m) { return m + 1.0; };
    r.beta = [](cplx m) { return m * m + 0.3; };
    r.gamma = [](cplx m) { return cplx(0.7, 0.0) * (m - 0.5); };
    r.kind = IndexKind::two_sided;
    CoefficientSequence cs = minimal_solution(r, 0.0, -10, 20);
    for (int n = -10; n < 0; ++n) CHECK(cs.at(n).is_zero());

    // gamma_{N+1} = 0 terminates at n = N
    const int N = 4;
    ThreeTermRecurrence f;
    f.alpha = [](cplx m) { return (m + 1.0) * 2.0; };
    f.beta = [](cplx m) { return -m * m; };
    f.gamma = [](cplx m) { return m - double(N + 1); };
    f.kind = IndexKind::one_sided;
    CoefficientSequence fs = minimal_solution(f, 0.0, 0, 12);
    int nonzero = 0;
    for (int n = 0; n <= 12; ++n) nonzero += fs.at(n).is_zero() ? 0 : 1;
    CHECK(nonzero == N + 1);
}

TEST_CASE("finite spectra") {
    CharacteristicProblem p0;
    p0.unknown = Unknown::equation_constant;
    p0.build = [](cplx lam) { return constant_rec(0.0, cplx(3.0, 0.0) - lam, 0.0, IndexKind::one_sided); };
    Spectrum s0 = finite_spectrum(p0, 0);
    REQUIRE(s0.roots.size() == 1);
    CHECK(std::abs(s0.roots[0] - 3.0) < 1e-14);

    // alpha_0 = gamma_1 = 1, beta_0 = -lam, beta_1 = 2 - lam  ->  1 +- sqrt 2
    CharacteristicProblem p1;
    p1.build = [](cplx lam) {
        ThreeTermRecurrence r;
        r.alpha = [](cplx) { return cplx(1.0, 0.0); };
        r.gamma = [](cplx) { return cplx(1.0, 0.0); };
        r.beta = [lam](cplx m) { return 2.0 * m - lam; };
        r.kind = IndexKind::one_sided;
        return r;
    };
    Spectrum s1 = finite_spectrum(p1, 1);
    CHECK(s1.hypothesis_holds);
    CHECK(std::abs(s1.roots[0] - (1.0 - std::sqrt(2.0))) < 1e-14);
    CHECK(std::abs(s1.roots[1] - (1.0 + std::sqrt(2.0))) < 1e-14);

    CharacteristicProblem bad;
    bad.build = [](cplx lam) { return constant_rec(1.0, lam * lam, 1.0, IndexKind::one_sided); };
    CHECK_THROWS_AS(finite_spectrum(bad, 2), HeunError);
}

TEST_CASE("random real recurrences with alpha_i gamma_{i+1} > 0 have real simple spectra") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.2, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int N = 3 + trial;
        std::vector<double> al(N + 2), be(N + 2), ga(N + 2), sc(N + 2);
        for (int i = 0; i <= N + 1; ++i) {
            double sgn = u(gen) < 0 ? -1.0 : 1.0;
            al[i] = sgn * pos(gen);
            ga[i] = sgn * pos(gen);  // same sign as alpha_{i-1} in the product below only on average
            be[i] = u(gen);
            sc[i] = pos(gen);
        }
        for (int i = 0; i < N; ++i)
            if (al[i] * ga[i + 1] < 0) ga[i + 1] = -ga[i + 1];
        CharacteristicProblem pr;
        pr.build = [=](cplx lam) {
            ThreeTermRecurrence r;
            r.alpha = [al](cplx m) { return cplx(al[std::size_t(m.real())], 0.0); };
            r.beta = [be, lam](cplx m) { return be[std::size_t(m.real())] - lam; };
            r.gamma = [ga](cplx m) { return cplx(ga[std::size_t(m.real())], 0.0); };
            r.kind = IndexKind::one_sided;
            return r;
        };
        Spectrum sp = finite_spectrum(pr, N);
        CHECK(sp.hypothesis_holds);
        CHECK(sp.all_real);
        CHECK(sp.min_gap > 0.0);
        REQUIRE(sp.roots.size() == std::size_t(N + 1));

        // similarity b_n -> s_n b_n rescales alpha and gamma; eigenvalues unchanged
        CharacteristicProblem scaled;
        scaled.build = [=](cplx lam) {
            ThreeTermRecurrence r;
            r.alpha = [al, sc](cplx m) {
                auto i = std::size_t(m.real());
                return cplx(al[i] * sc[i] / sc[i + 1], 0.0);
            };
            r.beta = [be, lam](cplx m) { return be[std::size_t(m.real())] - lam; };
            r.gamma = [ga, sc](cplx m) {
                auto i = std::size_t(m.real());
                return cplx(i == 0 ? ga[i] : ga[i] * sc[i] / sc[i - 1], 0.0);
            };
            r.kind = IndexKind::one_sided;
            return r;
        };
        Spectrum sp2 = finite_spectrum(scaled, N);
        for (int i = 0; i <= N; ++i) CHECK(std::abs(sp.roots[i] - sp2.roots[i]) < 1e-10 * (1.0 + std::abs(sp.roots[i])));
    }
}
