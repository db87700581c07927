#pragma once

#include <string>
#include <vector>

#include "heun/common.hpp"
#include "heun/recurrence.hpp"

namespace heun {

enum class EquationKind { CHE, DCHE, InceCHE, InceDCHE };

const char* kind_name(EquationKind k);
EquationKind kind_from_name(const std::string& s);  // throws parse

struct EquationParams {
    EquationKind kind = EquationKind::CHE;
    cplx B1, B2, B3;
    cplx z0{0.0, 0.0};     // CHE, InceCHE
    cplx omega{0.0, 0.0};  // CHE, DCHE
    cplx eta{0.0, 0.0};    // CHE, DCHE
    cplx q{0.0, 0.0};      // Ince kinds

    static EquationParams che(cplx B1, cplx B2, cplx B3, cplx z0, cplx omega, cplx eta);
    static EquationParams dche(cplx B1, cplx B2, cplx B3, cplx omega, cplx eta);
    static EquationParams ince_che(cplx B1, cplx B2, cplx B3, cplx z0, cplx q);
    static EquationParams ince_dche(cplx B1, cplx B2, cplx B3, cplx q);

    bool is_ince() const { return kind == EquationKind::InceCHE || kind == EquationKind::InceDCHE; }
    bool has_z0() const { return kind == EquationKind::CHE || kind == EquationKind::InceCHE; }

    // throws ErrorKind::invariant when the kind's nondegeneracy conditions fail
    void check() const;

    bool operator==(const EquationParams&) const = default;
};

// z(z-z0) U'' + (B1 + B2 z) U' + p0(z) U = 0  (z^2 in place of z(z-z0) for the double-confluent kinds)
struct OdeCoefficients {
    cplx p2, p1, p0;
};
OdeCoefficients ode_coefficients(const EquationParams& p, cplx z);

// ---- prefactors --------------------------------------------------------------

struct PowerFactor {
    cplx a, b, p;  // (a z + b)^p, principal branch
    bool operator==(const PowerFactor&) const = default;
};

// U(z) = prod (a z + b)^p * exp(kappa / z) * V(scale z + shift)
struct PrefactorMap {
    std::vector<PowerFactor> powers;
    cplx kappa{0.0, 0.0};
    cplx scale{1.0, 0.0}, shift{0.0, 0.0};

    cplx inner(cplx z) const { return scale * z + shift; }
    bool identity() const { return powers.empty() && kappa == cplx(0.0, 0.0) && scale == cplx(1.0, 0.0) && shift == cplx(0.0, 0.0); }

    // value and the first two derivatives of the multiplicative part
    struct Jet {
        cplx f, d1, d2;
    };
    Jet jet(cplx z) const;

    bool operator==(const PrefactorMap&) const = default;
};

// ---- transformations ------------------------------------------------------------

enum class Rule { T1, T2, T3, T4, S1, S2, S3 };
const char* rule_name(Rule r);
Rule rule_from_name(const std::string& s);  // throws parse

struct Transformed {
    EquationParams params;
    PrefactorMap prefactor;
};

// If V solves the equation with the returned parameters, prefactor * V(inner z) solves the input one.
Transformed apply_T(Rule rule, const EquationParams& p);
Transformed apply_Tscript(Rule rule, const EquationParams& p);

// letters applied left to right: the first letter acts on p, the next on its output, ...
Transformed apply_word(const std::vector<Rule>& word, const EquationParams& p);
std::vector<Rule> parse_word(const std::string& s);  // "T2 T1", "T2T1", "S1,S2"
std::string word_string(const std::vector<Rule>& word);

// words for the explicit sets: 1 -> {}, 2 -> T1, 3 -> T2 T1, 4 -> T1 T2 T1 (S letters for Ince kinds)
std::vector<Rule> set_word(int k, bool ince);

// ---- solutions ----------------------------------------------------------------------

enum class Basis { phi_tilde, psi_plus, psi_minus, bessel_J, hankel_1, hankel_2, power };
const char* basis_name(Basis b);

enum class Domain { all_finite, outside_z0, outside_origin, disc_z0 };
const char* domain_name(Domain d);

struct SeriesSolution {
    std::string name;
    EquationParams outer;  // equation the solution satisfies
    EquationParams inner;  // parameters of the set-1 (or Barber) series after the transformations
    PrefactorMap prefactor;
    Basis basis = Basis::phi_tilde;
    ThreeTermRecurrence rec;  // c-form recurrence in inner parameters; rec.nu is the offset
    CoefficientSequence coeffs;
    cplx nu{0.0, 0.0};
    Domain domain = Domain::all_finite;
    std::vector<Rule> word;
    bool barber_minus = false;  // Barber-Hasse with (omega, eta) -> (-omega, -eta)

    bool has_coefficients() const { return !coeffs.c.empty(); }
};

struct ValidityCheck {
    std::string condition;
    cplx quantity;
    bool pass = true;
    std::string note;
};

struct SolutionSet {
    int index = 1;
    EquationParams params;
    std::vector<Rule> word;
    ThreeTermRecurrence rec;
    std::vector<SeriesSolution> members;
};

// set-1 c-recurrence for CHE (z0 may be 0: DCHE), and the b-form with c_n = Gamma(m + i eta + B2/2) b_n
ThreeTermRecurrence che_recurrence_c(const EquationParams& inner);
ThreeTermRecurrence che_recurrence_b(const EquationParams& inner);
// Bessel set-1 recurrence for InceCHE (z0 may be 0: InceDCHE)
ThreeTermRecurrence ince_recurrence(const EquationParams& inner);
// Barber-Hasse a_n in powers of (z - z0); z0 = 0 gives the double-confluent variant in powers of z
ThreeTermRecurrence barber_recurrence(const EquationParams& inner, bool minus);

// solution sets with coefficients left empty; see attach_coefficients
SolutionSet fundamental_set_che(const EquationParams& p, cplx nu);
SolutionSet generate_set(int k, const EquationParams& p, cplx nu);
SolutionSet transformed_set(const std::vector<Rule>& word, const EquationParams& p, cplx nu);
SolutionSet fundamental_set_dche(const EquationParams& p, int k, cplx nu);  // k = 1, 2
SolutionSet fundamental_set_ince(const EquationParams& p, cplx nu);
SolutionSet ince_set(int k, const EquationParams& p, cplx nu);  // InceCHE 1..4, InceDCHE 1..2
SolutionSet solution_set(int k, const EquationParams& p, cplx nu);  // dispatch on kind

// Barber-Hasse expansion about z0 (z0 = 0 for DCHE), coefficients by forward recursion
SeriesSolution barber_solution(const EquationParams& p, int n_terms = 200);
SeriesSolution barber_p_solution(const EquationParams& p, int n_terms = 200);
// DCHE polynomial-replacement solution e^{-i w z} sum d_n (z/B1)^n
SeriesSolution dche_u1p_solution(const EquationParams& p, int n_terms = 200);

// forward recursion a_0 = 1, a_{-1} = 0; stops early (finite series) when gamma_{n+1} vanishes
CoefficientSequence forward_coefficients(const ThreeTermRecurrence& rec, int n_terms, bool* truncated = nullptr);

// fills coefficients of every member over [n_lo, n_hi] (n_lo ignored for one-sided recurrences)
void attach_coefficients(SolutionSet& s, int n_lo, int n_hi);
void attach_coefficients(SeriesSolution& s, int n_lo, int n_hi);

// index kind implied by nu: alpha_{-1} = 0 at integer nu makes the series one-sided
IndexKind index_kind_for(const ThreeTermRecurrence& rec, cplx nu);

// characteristic problems of the set-1 recurrence in inner parameters
CharacteristicProblem nu_problem(const SolutionSet& s);
// one-sided (nu = 0) problem with B3 as unknown; B3 of the *outer* equation
CharacteristicProblem b3_problem(int k, const EquationParams& p);
// same for the Barber-Hasse recurrence (finite-series spectra when i eta + B2/2 = -N)
CharacteristicProblem barber_b3_problem(const EquationParams& p, bool minus);

// ---- limits -------------------------------------------------------------------------

EquationParams leaver_limit(const EquationParams& p);
// q = -2 eta omega for finite (omega, eta); pass q explicitly for the symbolic limit
EquationParams whittaker_ince_limit(const EquationParams& p);
EquationParams whittaker_ince_limit(const EquationParams& p, cplx q);

std::vector<ValidityCheck> validity_conditions(const SolutionSet& s);
bool all_pass(const std::vector<ValidityCheck>& v);

}  // namespace heun
