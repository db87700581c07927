#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heun/heun_core.hpp"

namespace heun {

// value and first two z-derivatives
struct Jet {
    cplx u{0.0, 0.0}, d1{0.0, 0.0}, d2{0.0, 0.0};
};

struct EvalOptions {
    double rel_tol = 4.0 * eps_mach;  // per-term stopping threshold relative to the partial sum
    double abs_tol = 0.0;
    int max_terms = 2000;              // per direction
    bool enforce_domain = true;        // out-of-domain points are flagged and not summed
    // sum exactly over [lo, hi] (clipped to one-sided ranges) instead of the adaptive stop
    std::optional<std::array<int, 2>> fixed_window;
};

struct PointValue {
    cplx z;
    Jet jet;
    bool in_domain = true;
    bool converged = true;
    int n_lo = 0, n_hi = 0;   // last indices summed
    double tail_ratio = 0.0;  // |T_last / T_prev| of the direction that failed to settle
    std::string flag;         // "", "domain", "tail"
};

struct EvalRequest {
    SeriesSolution solution;
    std::vector<cplx> points;
    double abs_tol = 0.0;
    double rel_tol = 4.0 * eps_mach;
    int max_terms = 2000;
};

bool in_domain(const SeriesSolution& s, cplx z);

// extends s.coeffs on demand
PointValue evaluate_point(SeriesSolution& s, cplx z, const EvalOptions& opt = {});
std::vector<PointValue> evaluate(const EvalRequest& req);

struct ResidualEntry {
    cplx z;
    double residual = 0.0;  // |L[U]| / scale
    double abs_residual = 0.0;
    double scale = 0.0;     // max of |p2 U''|, |p1 U'|, |p0 U|
    bool pass = false;
    std::string flag;
};

struct ResidualReport {
    std::vector<ResidualEntry> points;
    double max_relative = 0.0;
    bool pass = false;
};

// throws ErrorKind::origin at the singular points of the equation
ResidualEntry ode_residual(const EquationParams& p, const Jet& U, cplx z, double tol = 1e-8);
ResidualReport residual_report(SeriesSolution& s, const std::vector<cplx>& points, double tol = 1e-8,
                               const EvalOptions& opt = {});

struct Connection {
    cplx A, B;
    double max_defect = 0.0;
    double condition = 0.0;  // of the 2x2 anchor system
    // analytic values: continuation formula (CHE/DCHE) or 1/2, 1/2 (Ince kinds)
    cplx A_pred, B_pred;
    bool prediction_available = false;
};

std::array<cplx, 2> default_anchors(const SolutionSet& s);

// members[0] = A members[1] + B members[2], fitted at the anchors, checked at check_points
Connection connect(SolutionSet& s, const std::array<cplx, 2>& anchors, const std::vector<cplx>& check_points,
                   const EvalOptions& opt = {});

struct RatioDiagnostics {
    int n = 0;
    cplx right, right_pred;  // T_{n+1}/T_n at +n against z0/z
    cplx left, left_pred;    // T_{-n-1}/T_{-n} at -n against 1
    cplx right_pred_1, left_pred_1;  // with the 1/n corrections
    double right_err = 0.0, left_err = 0.0;
};

// term ratios of the psi_minus member (c_n Psi(n+nu+i eta+B2/2, n+nu+B2; -2 i w x))
RatioDiagnostics convergence_ratios(SeriesSolution& s, cplx z, int window);

}  // namespace heun
