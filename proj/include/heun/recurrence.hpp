#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heun/common.hpp"

namespace heun {

enum class IndexKind { one_sided, two_sided };

// alpha_n c_{n+1} + beta_n c_n + gamma_n c_{n-1} = 0, coefficients given as functions of m = n + nu
struct ThreeTermRecurrence {
    std::function<cplx(cplx)> alpha, beta, gamma;
    cplx nu{0.0, 0.0};
    IndexKind kind = IndexKind::two_sided;

    cplx a(int n) const { return alpha(double(n) + nu); }
    cplx b(int n) const { return beta(double(n) + nu); }
    cplx g(int n) const { return gamma(double(n) + nu); }
};

struct CoefficientSequence {
    int n_min = 0;
    std::vector<Scaled> c;  // c[n - n_min]; c at n = 0 is exactly 1

    int n_max() const { return n_min + int(c.size()) - 1; }
    bool contains(int n) const { return n >= n_min && n <= n_max(); }
    const Scaled& at(int n) const { return c.at(std::size_t(n - n_min)); }
    cplx value(int n) const { return at(n).value(); }
};

enum class Unknown { nu, equation_constant };

struct CharacteristicProblem {
    // recurrence as a function of the unknown (for Unknown::nu the builder sets rec.nu)
    std::function<ThreeTermRecurrence(cplx)> build;
    Unknown unknown = Unknown::nu;
    IndexKind kind = IndexKind::two_sided;
};

struct CfValue {
    cplx value;
    int depth = 0;
    bool converged = true;  // two successive depths agreed
};

struct SolveResult {
    cplx root;
    cplx residual;
    int depth = 0;
    int iterations = 0;
    bool depth_stable = true;
    double depth_shift = 0.0;  // |root(depth) - root(1.5 depth)|
};

struct Spectrum {
    std::vector<cplx> roots;
    bool hypothesis_holds = false;  // real entries, alpha_i gamma_{i+1} > 0
    bool all_real = false;
    double min_gap = 0.0;
};

// HEUN_CF_DEPTH or 60
int default_cf_depth();

cplx cf_residual_one_sided(const ThreeTermRecurrence& rec, int depth);
cplx cf_residual_two_sided(const ThreeTermRecurrence& rec, cplx nu, int depth);

// depth doubled from the default until two successive values agree to 1e-12 (relative to 1 + |beta_0|)
CfValue cf_residual_auto(const ThreeTermRecurrence& rec);

SolveResult solve_characteristic(const CharacteristicProblem& problem, cplx seed);

// Miller backward ratios from 40 indices beyond each end, c_0 = 1
CoefficientSequence minimal_solution(const ThreeTermRecurrence& rec, cplx nu, int n_min, int n_max);

// largest |alpha c_{n+1} + beta c_n + gamma c_{n-1}| / max term over interior rows
double max_row_defect(const ThreeTermRecurrence& rec, const CoefficientSequence& c);

// roots of the (N+1)x(N+1) tridiagonal determinant; the unknown must enter the diagonal affinely
Spectrum finite_spectrum(const CharacteristicProblem& problem, int N);

}  // namespace heun
