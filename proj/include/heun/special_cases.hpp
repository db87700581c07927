#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heun/evaluator.hpp"
#include "heun/heun_core.hpp"

namespace heun {

// sigma = 1 (Mathieu) or i (modified Mathieu); same for kappa in the Whittaker-Hill equation
enum class TrigKind { real, modified };
cplx trig_scale(TrigKind t);

// w'' + sigma^2 (a - 2 k2 cos(2 sigma u)) w = 0
struct MathieuParams {
    cplx a, k2;
    TrigKind sigma = TrigKind::real;
};

// W'' + kappa^2 [vartheta - xi^2/8 - (p+1) xi cos(2 kappa u) + (xi^2/8) cos(4 kappa u)] W = 0
struct WHEParams {
    cplx vartheta, xi, p;
    TrigKind kappa = TrigKind::real;
};

// z = cos^2(sigma u): z0 = 1, B1 = -1/2, B2 = 1, B3 = k2/2 - a/4, q = k2
EquationParams mathieu_to_ince(const MathieuParams& m);
// z = cos^2(kappa u): z0 = 1, B1 = -1/2, B2 = 1, B3 = ((p+1) xi - vartheta)/4, i omega = xi/2, i eta = (p+1)/2
EquationParams whe_to_che(const WHEParams& w);
// xi -> 0 with p xi = 2 k2 fixed, taken on the CHE side and pushed through whittaker_ince_limit
EquationParams whe_ince_limit(cplx vartheta, cplx k2);
// N when i eta + B2/2 = -N (p = -2N - 2): the Barber-Hasse series terminates at n = N
std::optional<int> whe_finite_series(const WHEParams& w);

// residuals of the trigonometric forms; w.d1, w.d2 are u-derivatives
double mathieu_residual(const MathieuParams& m, const Jet& w, cplx u);
double whe_residual(const WHEParams& p, const Jet& w, cplx u);

// U(z) jet -> W(u) jet along z = cos^2(s u)
Jet jet_in_u(const Jet& U, cplx u, TrigKind s);

// ---- Fourier oracle --------------------------------------------------------------------

// ce_{2n}, ce_{2n+1}, se_{2n+1}, se_{2n+2}
enum class FourierClass { even_pi, even_2pi, odd_2pi, odd_pi };
const char* fourier_class_name(FourierClass c);

struct OracleResult {
    std::vector<cplx> values;  // ascending real part
    int truncation = 0;        // matrix size of the accepted pair's smaller member
    double doubling_shift = 0.0;
};

// raw eigenvalues of the truncated Fourier system, ascending real part
std::vector<cplx> mathieu_fourier_values(cplx k2, FourierClass c, int truncation);
// lowest truncation/2 values, doubled until stable to 1e-10; throws nonconvergence past size 4096
OracleResult mathieu_fourier_oracle(cplx k2, FourierClass c, int truncation = 16);

// ---- Bessel-series Mathieu solutions ----------------------------------------------------

// set 1 -> a_{2r}, 2 -> a_{2r+1}, 3 -> b_{2r+2}, 4 -> b_{2r+1}
FourierClass mathieu_set_class(int set);

struct MathieuCharacteristic {
    cplx a;
    int set = 1, index = 0;
    SolveResult solve;  // root in the outer B3
};

// index-th value (ascending real part) carried by the one-sided (nu = 0) series of the given set
MathieuCharacteristic mathieu_characteristic(cplx k2, int set, int index, TrigKind sigma = TrigKind::real);

struct MathieuSolution {
    int set = 1;
    MathieuParams params;
    SeriesSolution series;  // Bessel-J member with the power prefactor stripped: a function of z = cos^2(sigma u)
};

MathieuSolution mathieu_solution(const MathieuParams& m, int set);
// w1 = F, w2 = cos(s u) F, w3 = sin(2 s u) F, w4 = sin(s u) F
Jet mathieu_eval(MathieuSolution& w, cplx u);

// ---- normal forms -------------------------------------------------------------------------

struct NormalFormQ {
    struct Pole {
        cplx at;
        int order = 1;
        bool operator==(const Pole&) const = default;
    };
    std::vector<Pole> poles;
    int poly_degree = -1;  // -1: no polynomial part

    // sorted by location, coincident entries merged (highest order kept), nonpositive orders dropped
    NormalFormQ canonical() const;
    bool operator==(const NormalFormQ&) const = default;
};

enum class HeunClass { General, Confluent, DoubleConfluent, Biconfluent, Triconfluent, NotHeun };
const char* heun_class_name(HeunClass c);

HeunClass classify_normal_form(const NormalFormQ& qf);

struct PotentialRecord {
    std::string name, potential, reduces_to;
};
// descriptive only, no change of variables is implemented
PotentialRecord cho_ho_record();

}  // namespace heun
