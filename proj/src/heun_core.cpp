#include "heun/heun_core.hpp"

#include <algorithm>
#include <cctype>

#include <Eigen/Dense>

namespace heun {

namespace {

bool is_zero(cplx z) { return std::abs(z) < tau_int; }

[[noreturn]] void invariant(const std::string& msg) { throw HeunError(ErrorKind::invariant, msg); }

EquationParams with_kind(EquationKind k, cplx B1, cplx B2, cplx B3) {
    EquationParams p;
    p.kind = k;
    p.B1 = B1;
    p.B2 = B2;
    p.B3 = B3;
    return p;
}

}  // namespace

const char* kind_name(EquationKind k) {
    switch (k) {
        case EquationKind::CHE: return "CHE";
        case EquationKind::DCHE: return "DCHE";
        case EquationKind::InceCHE: return "InceCHE";
        case EquationKind::InceDCHE: return "InceDCHE";
    }
    return "?";
}

EquationKind kind_from_name(const std::string& s) {
    for (auto k : {EquationKind::CHE, EquationKind::DCHE, EquationKind::InceCHE, EquationKind::InceDCHE})
        if (s == kind_name(k)) return k;
    throw HeunError(ErrorKind::parse, "unknown equation kind '" + s + "'");
}

EquationParams EquationParams::che(cplx B1, cplx B2, cplx B3, cplx z0, cplx omega, cplx eta) {
    EquationParams p = with_kind(EquationKind::CHE, B1, B2, B3);
    p.z0 = z0;
    p.omega = omega;
    p.eta = eta;
    return p;
}

EquationParams EquationParams::dche(cplx B1, cplx B2, cplx B3, cplx omega, cplx eta) {
    EquationParams p = with_kind(EquationKind::DCHE, B1, B2, B3);
    p.omega = omega;
    p.eta = eta;
    return p;
}

EquationParams EquationParams::ince_che(cplx B1, cplx B2, cplx B3, cplx z0, cplx q) {
    EquationParams p = with_kind(EquationKind::InceCHE, B1, B2, B3);
    p.z0 = z0;
    p.q = q;
    return p;
}

EquationParams EquationParams::ince_dche(cplx B1, cplx B2, cplx B3, cplx q) {
    EquationParams p = with_kind(EquationKind::InceDCHE, B1, B2, B3);
    p.q = q;
    return p;
}

void EquationParams::check() const {
    for (cplx v : {B1, B2, B3, z0, omega, eta, q})
        if (!finite(v)) invariant("non-finite equation parameter");
    switch (kind) {
        case EquationKind::CHE:
            if (is_zero(omega)) invariant("CHE requires omega != 0 (omega = 0 gives a hypergeometric equation)");
            break;
        case EquationKind::DCHE:
            if (is_zero(B1)) invariant("DCHE requires B1 != 0");
            if (is_zero(omega)) invariant("DCHE requires omega != 0");
            break;
        case EquationKind::InceCHE:
            if (is_zero(q)) invariant("InceCHE requires q != 0 (q = 0 gives a hypergeometric equation)");
            break;
        case EquationKind::InceDCHE:
            if (is_zero(q)) invariant("InceDCHE requires q != 0");
            if (is_zero(B1)) invariant("InceDCHE requires B1 != 0");
            break;
    }
}

OdeCoefficients ode_coefficients(const EquationParams& p, cplx z) {
    const cplx zz = p.has_z0() ? z * (z - p.z0) : z * z;
    const cplx zr = p.has_z0() ? z - p.z0 : z;
    OdeCoefficients o;
    o.p2 = zz;
    o.p1 = p.B1 + p.B2 * z;
    if (p.is_ince())
        o.p0 = p.B3 + p.q * zr;
    else
        o.p0 = p.B3 - 2.0 * p.eta * p.omega * zr + p.omega * p.omega * zz;
    return o;
}

PrefactorMap::Jet PrefactorMap::jet(cplx z) const {
    cplx logf{0.0, 0.0}, l1{0.0, 0.0}, l2{0.0, 0.0};
    for (const auto& f : powers) {
        cplx x = f.a * z + f.b;
        if (x == cplx(0.0, 0.0)) throw HeunError(ErrorKind::origin, "prefactor evaluated at its branch point");
        logf += f.p * std::log(x);
        l1 += f.p * f.a / x;
        l2 -= f.p * f.a * f.a / (x * x);
    }
    if (kappa != cplx(0.0, 0.0)) {
        if (z == cplx(0.0, 0.0)) throw HeunError(ErrorKind::origin, "exp(kappa/z) at z = 0");
        logf += kappa / z;
        l1 -= kappa / (z * z);
        l2 += 2.0 * kappa / (z * z * z);
    }
    Jet j;
    j.f = std::exp(logf);
    j.d1 = j.f * l1;
    j.d2 = j.f * (l1 * l1 + l2);
    return j;
}

// ---- rules ---------------------------------------------------------------------------

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::T1: return "T1";
        case Rule::T2: return "T2";
        case Rule::T3: return "T3";
        case Rule::T4: return "T4";
        case Rule::S1: return "S1";
        case Rule::S2: return "S2";
        case Rule::S3: return "S3";
    }
    return "?";
}

Rule rule_from_name(const std::string& s) {
    for (auto r : {Rule::T1, Rule::T2, Rule::T3, Rule::T4, Rule::S1, Rule::S2, Rule::S3})
        if (s == rule_name(r)) return r;
    throw HeunError(ErrorKind::parse, "unknown transformation '" + s + "'");
}

std::vector<Rule> parse_word(const std::string& s) {
    std::vector<Rule> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '*') {
            ++i;
            continue;
        }
        if (i + 1 >= s.size()) throw HeunError(ErrorKind::parse, "bad transformation word '" + s + "'");
        out.push_back(rule_from_name(s.substr(i, 2)));
        i += 2;
    }
    return out;
}

std::string word_string(const std::vector<Rule>& word) {
    std::string s;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) s += ' ';
        s += rule_name(word[i]);
    }
    return s;
}

std::vector<Rule> set_word(int k, bool ince) {
    const Rule r1 = ince ? Rule::S1 : Rule::T1, r2 = ince ? Rule::S2 : Rule::T2;
    switch (k) {
        case 1: return {};
        case 2: return {r1};
        case 3: return {r2, r1};
        case 4: return {r1, r2, r1};
    }
    throw HeunError(ErrorKind::domain, "set index must be 1..4");
}

namespace {

void need_z0(const EquationParams& p, Rule r) {
    if (!p.has_z0() || is_zero(p.z0))
        throw HeunError(ErrorKind::domain, std::string(rule_name(r)) + " needs z0 != 0");
}

// C and D constants shared by T1/S1 and T2/S2
void rule_C(EquationParams& q, PrefactorMap& m, const EquationParams& p) {
    const cplx u = p.B1 / p.z0;
    q.B1 = -p.B1 - 2.0 * p.z0;
    q.B2 = 2.0 + p.B2 + 2.0 * u;
    q.B3 = p.B3 + (1.0 + u) * (p.B2 + u);
    m.powers.push_back({1.0, 0.0, 1.0 + u});
}

void rule_D(EquationParams& q, PrefactorMap& m, const EquationParams& p) {
    const cplx u = p.B1 / p.z0;
    q.B2 = 2.0 - p.B2 - 2.0 * u;
    q.B3 = p.B3 + u * (u + p.B2 - 1.0);
    m.powers.push_back({1.0, -p.z0, 1.0 - p.B2 - u});
}

}  // namespace

Transformed apply_T(Rule rule, const EquationParams& p) {
    if (p.is_ince()) throw HeunError(ErrorKind::domain, "T rules act on CHE/DCHE parameters; use S rules");
    Transformed t{p, {}};
    switch (rule) {
        case Rule::T1:
            need_z0(p, rule);
            rule_C(t.params, t.prefactor, p);
            break;
        case Rule::T2:
            need_z0(p, rule);
            rule_D(t.params, t.prefactor, p);
            break;
        case Rule::T3:
            t.params.omega = -p.omega;
            t.params.eta = -p.eta;
            break;
        case Rule::T4:
            t.params.B1 = -p.B1 - p.B2 * p.z0;
            t.params.B3 = p.B3 + 2.0 * p.eta * p.omega * p.z0;
            t.params.omega = -p.omega;
            t.prefactor.scale = -1.0;
            t.prefactor.shift = p.z0;
            break;
        default:
            throw HeunError(ErrorKind::domain, std::string(rule_name(rule)) + " is not a CHE rule");
    }
    return t;
}

Transformed apply_Tscript(Rule rule, const EquationParams& p) {
    if (!p.is_ince()) throw HeunError(ErrorKind::domain, "S rules act on Whittaker-Ince parameters");
    Transformed t{p, {}};
    switch (rule) {
        case Rule::S1:
            need_z0(p, rule);
            rule_C(t.params, t.prefactor, p);
            break;
        case Rule::S2:
            need_z0(p, rule);
            rule_D(t.params, t.prefactor, p);
            break;
        case Rule::S3:
            t.params.B1 = -p.B1 - p.B2 * p.z0;
            t.params.B3 = p.B3 - p.q * p.z0;
            t.params.q = -p.q;
            t.prefactor.scale = -1.0;
            t.prefactor.shift = p.z0;
            break;
        default:
            throw HeunError(ErrorKind::domain, std::string(rule_name(rule)) + " is not a Whittaker-Ince rule");
    }
    return t;
}

Transformed apply_word(const std::vector<Rule>& word, const EquationParams& p) {
    Transformed acc{p, {}};
    for (Rule r : word) {
        Transformed step = p.is_ince() ? apply_Tscript(r, acc.params) : apply_T(r, acc.params);
        // step factors are functions of the current variable x = scale z + shift
        for (const auto& f : step.prefactor.powers)
            acc.prefactor.powers.push_back({f.a * acc.prefactor.scale, f.a * acc.prefactor.shift + f.b, f.p});
        acc.prefactor.shift = step.prefactor.scale * acc.prefactor.shift + step.prefactor.shift;
        acc.prefactor.scale = step.prefactor.scale * acc.prefactor.scale;
        acc.params = step.params;
    }
    // z^{1+u} z^{-1-u} from T1 ... T1 cancel exactly when nothing moved the variable in between
    auto& pw = acc.prefactor.powers;
    for (std::size_t i = 0; i < pw.size(); ++i)
        for (std::size_t j = i + 1; j < pw.size(); ++j)
            if (pw[i].a == pw[j].a && pw[i].b == pw[j].b && std::abs(pw[i].p + pw[j].p) < 1e-14) {
                pw.erase(pw.begin() + long(j));
                pw.erase(pw.begin() + long(i));
                --i;
                break;
            }
    return acc;
}

// ---- recurrences ----------------------------------------------------------------------

ThreeTermRecurrence che_recurrence_c(const EquationParams& in) {
    const cplx B1 = in.B1, B2 = in.B2, B3 = in.B3, z0 = in.has_z0() ? in.z0 : cplx(0.0), w = in.omega, eta = in.eta;
    ThreeTermRecurrence r;
    r.alpha = [](cplx m) { return m + 1.0; };
    r.beta = [=](cplx m) { return m * (m + B2 - 1.0 + 2.0 * I * w * z0) + B3 + I * w * (z0 * B2 + B1); };
    r.gamma = [=](cplx m) { return 2.0 * I * w * (z0 * (m + B2 - 1.0) + B1) * (m + I * eta + B2 / 2.0 - 1.0); };
    return r;
}

ThreeTermRecurrence che_recurrence_b(const EquationParams& in) {
    const cplx B1 = in.B1, B2 = in.B2, z0 = in.has_z0() ? in.z0 : cplx(0.0), w = in.omega, eta = in.eta;
    ThreeTermRecurrence r = che_recurrence_c(in);
    r.alpha = [=](cplx m) { return (m + 1.0) * (m + I * eta + B2 / 2.0); };
    r.gamma = [=](cplx m) { return 2.0 * I * w * (z0 * (m + B2 - 1.0) + B1); };
    return r;
}

ThreeTermRecurrence ince_recurrence(const EquationParams& in) {
    const cplx B1 = in.B1, B2 = in.B2, B3 = in.B3, z0 = in.has_z0() ? in.z0 : cplx(0.0), q = in.q;
    ThreeTermRecurrence r;
    r.alpha = [](cplx m) { return m + 1.0; };
    r.beta = [=](cplx m) { return m * (m + B2 - 1.0) + B3; };
    r.gamma = [=](cplx m) { return q * (z0 * (m + B2 - 1.0) + B1); };
    return r;
}

ThreeTermRecurrence barber_recurrence(const EquationParams& in, bool minus) {
    const cplx B1 = in.B1, B2 = in.B2, B3 = in.B3, z0 = in.has_z0() ? in.z0 : cplx(0.0);
    const cplx w = minus ? -in.omega : in.omega, eta = minus ? -in.eta : in.eta;
    ThreeTermRecurrence r;
    r.alpha = [=](cplx n) { return (n + 1.0) * (z0 * (n + B2) + B1); };
    r.beta = [=](cplx n) { return n * (n + B2 - 1.0 + 2.0 * I * w * z0) + B3 + I * w * (z0 * B2 + B1); };
    r.gamma = [=](cplx n) { return 2.0 * I * w * (n + I * eta + B2 / 2.0 - 1.0); };
    r.kind = IndexKind::one_sided;
    return r;
}

IndexKind index_kind_for(const ThreeTermRecurrence& rec, cplx nu) {
    if (!near_int(nu)) return IndexKind::two_sided;
    ThreeTermRecurrence r = rec;
    r.nu = 0.0;
    return is_zero(r.a(-1)) ? IndexKind::one_sided : IndexKind::two_sided;
}

namespace {

const char* const member_suffix_che[3] = {"", "inf", "bar"};
const char* const member_suffix_ince[3] = {"", "(1)", "(2)"};

// the set-1 index offset: integer nu is relabelled to 0 so that alpha_{-1} = 0 truncates on the left
cplx normalise_nu(cplx nu) { return near_int(nu) ? cplx(0.0, 0.0) : nu; }

Domain outer_domain(const EquationParams& inner) {
    return inner.has_z0() && !is_zero(inner.z0) ? Domain::outside_z0 : Domain::outside_origin;
}

SolutionSet hyper_set(int index, const EquationParams& outer, const std::vector<Rule>& word, const EquationParams& inner,
                      const PrefactorMap& pref, cplx nu) {
    SolutionSet s;
    s.index = index;
    s.params = outer;
    s.word = word;
    nu = normalise_nu(nu);
    s.rec = che_recurrence_c(inner);
    s.rec.kind = index_kind_for(s.rec, nu);
    s.rec.nu = nu;
    const Basis bases[3] = {Basis::phi_tilde, Basis::psi_plus, Basis::psi_minus};
    for (int i = 0; i < 3; ++i) {
        SeriesSolution m;
        m.name = "U" + std::to_string(index) + member_suffix_che[i];
        m.outer = outer;
        m.inner = inner;
        m.prefactor = pref;
        m.basis = bases[i];
        m.rec = s.rec;
        m.nu = nu;
        m.domain = i == 0 ? Domain::all_finite : outer_domain(inner);
        m.word = word;
        s.members.push_back(m);
    }
    return s;
}

SolutionSet bessel_set(int index, const EquationParams& outer, const std::vector<Rule>& word, const EquationParams& inner,
                       const PrefactorMap& pref, cplx nu) {
    SolutionSet s;
    s.index = index;
    s.params = outer;
    s.word = word;
    nu = normalise_nu(nu);
    s.rec = ince_recurrence(inner);
    s.rec.kind = index_kind_for(s.rec, nu);
    s.rec.nu = nu;
    const Basis bases[3] = {Basis::bessel_J, Basis::hankel_1, Basis::hankel_2};
    for (int i = 0; i < 3; ++i) {
        SeriesSolution m;
        m.name = "U" + std::to_string(index) + member_suffix_ince[i];
        m.outer = outer;
        m.inner = inner;
        m.prefactor = pref;
        m.basis = bases[i];
        m.rec = s.rec;
        m.nu = nu;
        m.domain = i == 0 ? Domain::all_finite : outer_domain(inner);
        m.word = word;
        s.members.push_back(m);
    }
    return s;
}

// Leaver limit of the T1-T2 prefactor: z^{2-B2} e^{B1/z} with (B1, B2, B3) -> (-B1, 4-B2, B3+2-B2)
void second_set_dc(const EquationParams& p, EquationParams& inner, PrefactorMap& pref) {
    inner = p;
    inner.B1 = -p.B1;
    inner.B2 = 4.0 - p.B2;
    inner.B3 = p.B3 + 2.0 - p.B2;
    pref.powers.push_back({1.0, 0.0, 2.0 - p.B2});
    pref.kappa = p.B1;
}

void need_kind(const EquationParams& p, EquationKind k) {
    if (p.kind != k) throw HeunError(ErrorKind::domain, std::string("expected ") + kind_name(k) + " parameters");
}

}  // namespace

SolutionSet transformed_set(const std::vector<Rule>& word, const EquationParams& p, cplx nu) {
    p.check();
    Transformed t = apply_word(word, p);
    int idx = 0;
    for (int k = 1; k <= 4; ++k)
        if (set_word(k, p.is_ince()) == word) idx = k;
    if (p.is_ince()) return bessel_set(idx, p, word, t.params, t.prefactor, nu);
    return hyper_set(idx, p, word, t.params, t.prefactor, nu);
}

SolutionSet fundamental_set_che(const EquationParams& p, cplx nu) {
    need_kind(p, EquationKind::CHE);
    return transformed_set({}, p, nu);
}

SolutionSet generate_set(int k, const EquationParams& p, cplx nu) {
    need_kind(p, EquationKind::CHE);
    return transformed_set(set_word(k, false), p, nu);
}

SolutionSet fundamental_set_dche(const EquationParams& p, int k, cplx nu) {
    need_kind(p, EquationKind::DCHE);
    p.check();
    if (k == 1) return hyper_set(1, p, {}, p, {}, nu);
    if (k != 2) throw HeunError(ErrorKind::domain, "DCHE sets are 1 and 2");
    EquationParams inner;
    PrefactorMap pref;
    second_set_dc(p, inner, pref);
    return hyper_set(2, p, {}, inner, pref, nu);
}

SolutionSet fundamental_set_ince(const EquationParams& p, cplx nu) { return ince_set(1, p, nu); }

SolutionSet ince_set(int k, const EquationParams& p, cplx nu) {
    if (!p.is_ince()) throw HeunError(ErrorKind::domain, "expected Whittaker-Ince parameters");
    p.check();
    if (p.kind == EquationKind::InceCHE) return transformed_set(set_word(k, true), p, nu);
    if (k == 1) return bessel_set(1, p, {}, p, {}, nu);
    if (k != 2) throw HeunError(ErrorKind::domain, "InceDCHE sets are 1 and 2");
    EquationParams inner;
    PrefactorMap pref;
    second_set_dc(p, inner, pref);
    return bessel_set(2, p, {}, inner, pref, nu);
}

SolutionSet solution_set(int k, const EquationParams& p, cplx nu) {
    switch (p.kind) {
        case EquationKind::CHE: return generate_set(k, p, nu);
        case EquationKind::DCHE: return fundamental_set_dche(p, k, nu);
        default: return ince_set(k, p, nu);
    }
}

namespace {

double finite_defect(const ThreeTermRecurrence& rec, const Eigen::VectorXcd& c) {
    const int dim = int(c.size());
    double worst = 0.0;
    for (int n = 0; n < dim; ++n) {
        cplx t1 = n + 1 < dim ? rec.a(n) * c(n + 1) : 0.0, t2 = rec.b(n) * c(n), t3 = n > 0 ? rec.g(n) * c(n - 1) : 0.0;
        double sc = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
        if (sc > 0.0) worst = std::max(worst, std::abs(t1 + t2 + t3) / sc);
    }
    return worst;
}

// one inverse-iteration step on the (N+1)x(N+1) system; forward recursion leaves the last row at ~1e-11
void refine_finite(const ThreeTermRecurrence& rec, CoefficientSequence& out) {
    const int dim = int(out.c.size());
    Eigen::VectorXcd c(dim);
    for (int n = 0; n < dim; ++n) c(n) = out.c[std::size_t(n)].value();
    if (!c.allFinite() || dim < 2) return;
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        T(n, n) = rec.b(n);
        if (n + 1 < dim) T(n, n + 1) = rec.a(n);
        if (n > 0) T(n, n - 1) = rec.g(n);
    }
    Eigen::VectorXcd x = T.partialPivLu().solve(c);
    if (!x.allFinite() || x(0) == cplx(0.0, 0.0)) return;
    x /= x(0);
    if (!(finite_defect(rec, x) < finite_defect(rec, c))) return;
    for (int n = 0; n < dim; ++n) out.c[std::size_t(n)] = Scaled(x(n));
    out.c[0] = Scaled(cplx(1.0, 0.0));
}

}  // namespace

CoefficientSequence forward_coefficients(const ThreeTermRecurrence& rec, int n_terms, bool* truncated) {
    if (truncated) *truncated = false;
    CoefficientSequence out;
    out.n_min = 0;
    out.c.push_back(Scaled(cplx(1.0, 0.0)));
    Scaled prev;  // a_{-1} = 0
    double big = 0.0;
    for (int n = 0; n + 1 < n_terms; ++n) {
        cplx al = rec.a(n);
        if (al == cplx(0.0, 0.0)) throw HeunError(ErrorKind::validity, "forward recursion: alpha_" + std::to_string(n) + " = 0");
        Scaled next = (out.c.back() * rec.b(n) + prev * rec.g(n)) * (-1.0 / al);
        big = std::max(big, out.c.back().log_abs());
        // gamma_{n+1} = 0 decouples the tail; a vanishing a_{n+1} there means a finite series
        if (is_zero(rec.g(n + 1)) && (next.is_zero() || next.log_abs() - big < std::log(1e-12))) {
            if (truncated) *truncated = true;
            refine_finite(rec, out);
            return out;
        }
        prev = out.c.back();
        out.c.push_back(next);
    }
    return out;
}

namespace {

SeriesSolution power_solution(const std::string& name, const EquationParams& outer, const EquationParams& inner, bool minus,
                              int n_terms) {
    SeriesSolution s;
    s.name = name;
    s.outer = outer;
    s.inner = inner;
    s.basis = Basis::power;
    s.rec = barber_recurrence(inner, false);
    s.barber_minus = minus;
    bool trunc = false;
    s.coeffs = forward_coefficients(s.rec, n_terms, &trunc);
    s.domain = trunc ? Domain::all_finite : Domain::disc_z0;
    return s;
}

}  // namespace

SeriesSolution barber_solution(const EquationParams& p, int n_terms) {
    if (p.kind != EquationKind::CHE && p.kind != EquationKind::DCHE)
        throw HeunError(ErrorKind::domain, "Barber-Hasse expansions are built for CHE/DCHE");
    p.check();
    return power_solution("U1barber", p, p, false, n_terms);
}

SeriesSolution barber_p_solution(const EquationParams& p, int n_terms) {
    if (p.kind != EquationKind::CHE && p.kind != EquationKind::DCHE)
        throw HeunError(ErrorKind::domain, "Barber-Hasse expansions are built for CHE/DCHE");
    p.check();
    EquationParams in = p;
    in.omega = -p.omega;
    in.eta = -p.eta;
    return power_solution("U1p", p, in, true, n_terms);
}

SeriesSolution dche_u1p_solution(const EquationParams& p, int n_terms) {
    need_kind(p, EquationKind::DCHE);
    return barber_p_solution(p, n_terms);
}

void attach_coefficients(SeriesSolution& s, int n_lo, int n_hi) {
    if (s.basis == Basis::power) {
        s.coeffs = forward_coefficients(s.rec, n_hi + 1);
        return;
    }
    s.coeffs = minimal_solution(s.rec, s.nu, s.rec.kind == IndexKind::one_sided ? 0 : n_lo, n_hi);
}

void attach_coefficients(SolutionSet& s, int n_lo, int n_hi) {
    if (s.members.empty()) return;
    attach_coefficients(s.members[0], n_lo, n_hi);
    for (std::size_t i = 1; i < s.members.size(); ++i) s.members[i].coeffs = s.members[0].coeffs;
}

CharacteristicProblem nu_problem(const SolutionSet& s) {
    CharacteristicProblem pr;
    pr.unknown = Unknown::nu;
    pr.kind = IndexKind::two_sided;
    const ThreeTermRecurrence base = s.rec;
    pr.build = [base](cplx nu) {
        ThreeTermRecurrence r = base;
        r.kind = IndexKind::two_sided;
        r.nu = nu;
        return r;
    };
    return pr;
}

CharacteristicProblem b3_problem(int k, const EquationParams& p) {
    CharacteristicProblem pr;
    pr.unknown = Unknown::equation_constant;
    pr.kind = IndexKind::one_sided;
    pr.build = [k, p](cplx b3) {
        EquationParams q = p;
        q.B3 = b3;
        SolutionSet s = solution_set(k, q, 0.0);
        ThreeTermRecurrence r = s.rec;
        r.kind = IndexKind::one_sided;
        r.nu = 0.0;
        return r;
    };
    return pr;
}

CharacteristicProblem barber_b3_problem(const EquationParams& p, bool minus) {
    CharacteristicProblem pr;
    pr.unknown = Unknown::equation_constant;
    pr.kind = IndexKind::one_sided;
    pr.build = [p, minus](cplx b3) {
        EquationParams q = p;
        q.B3 = b3;
        if (minus) q.omega = -q.omega, q.eta = -q.eta;
        ThreeTermRecurrence r = barber_recurrence(q, false);
        r.kind = IndexKind::one_sided;
        return r;
    };
    return pr;
}

// ---- limits ------------------------------------------------------------------------------

EquationParams leaver_limit(const EquationParams& p) {
    EquationParams q = p;
    q.z0 = 0.0;
    if (p.kind == EquationKind::CHE)
        q.kind = EquationKind::DCHE;
    else if (p.kind == EquationKind::InceCHE)
        q.kind = EquationKind::InceDCHE;
    else
        throw HeunError(ErrorKind::domain, "Leaver limit applies to CHE and InceCHE");
    q.check();
    return q;
}

EquationParams whittaker_ince_limit(const EquationParams& p, cplx q) {
    EquationParams r = p;
    r.omega = 0.0;
    r.eta = 0.0;
    r.q = q;
    if (p.kind == EquationKind::CHE)
        r.kind = EquationKind::InceCHE;
    else if (p.kind == EquationKind::DCHE)
        r.kind = EquationKind::InceDCHE;
    else
        throw HeunError(ErrorKind::domain, "Whittaker-Ince limit applies to CHE and DCHE");
    if (is_zero(q)) invariant("Whittaker-Ince limit with q = 0 degenerates to a hypergeometric equation");
    r.check();
    return r;
}

EquationParams whittaker_ince_limit(const EquationParams& p) { return whittaker_ince_limit(p, -2.0 * p.eta * p.omega); }

// ---- validity ------------------------------------------------------------------------------

namespace {

ValidityCheck not_integer(const std::string& what, cplx v, const std::string& note = "") {
    return {what + " is not an integer", v, !near_int(v), near_int(v) ? note : ""};
}

ValidityCheck not_nonpos(const std::string& what, cplx v, const std::string& note = "") {
    return {what + " is not zero or a negative integer", v, !near_nonpos_int(v), near_nonpos_int(v) ? note : ""};
}

}  // namespace

std::vector<ValidityCheck> validity_conditions(const SolutionSet& s) {
    std::vector<ValidityCheck> out;
    if (s.members.empty()) return out;
    const EquationParams& in = s.members[0].inner;
    const cplx nu = s.rec.nu;
    const bool one = s.rec.kind == IndexKind::one_sided;
    const bool z0 = in.has_z0() && !is_zero(in.z0);
    const cplx u = z0 ? in.B1 / in.z0 : cplx(0.0);

    if (in.is_ince()) {
        if (one) {
            if (z0) {
                cplx l = in.B2 + u;
                out.push_back(not_nonpos("B2+B1/z0", l, "finite series: terminates at n = " + std::to_string(-long(std::lround(l.real())))));
            }
        } else {
            out.push_back(not_integer("nu", nu));
            if (z0) out.push_back(not_integer("nu+B2+B1/z0", nu + in.B2 + u));
        }
        return out;
    }

    const cplx ieta = I * in.eta;
    if (one) {
        if (z0) {
            cplx l = in.B2 + u;
            out.push_back(not_nonpos("B2+B1/z0", l, "finite series: terminates at n = " + std::to_string(-long(std::lround(l.real())))));
        }
        out.push_back(not_nonpos("i*eta+B2/2", ieta + in.B2 / 2.0, "Heun polynomial; use the Barber-Hasse expansion"));
        out.push_back(not_nonpos("B2", in.B2));
        out.push_back(not_nonpos("B2/2-i*eta", in.B2 / 2.0 - ieta, "Phi-tilde member undefined; use barber_p"));
    } else {
        out.push_back(not_integer("nu", nu));
        if (z0) out.push_back(not_integer("nu+B2+B1/z0", nu + in.B2 + u));
        out.push_back(not_integer("nu+i*eta+B2/2", nu + ieta + in.B2 / 2.0));
        out.push_back(not_integer("nu+B2", nu + in.B2));
        out.push_back(not_nonpos("B2/2-i*eta", in.B2 / 2.0 - ieta, "Phi-tilde member undefined; use barber_p"));
    }
    return out;
}

bool all_pass(const std::vector<ValidityCheck>& v) {
    return std::all_of(v.begin(), v.end(), [](const ValidityCheck& c) { return c.pass; });
}

const char* basis_name(Basis b) {
    switch (b) {
        case Basis::phi_tilde: return "phi_tilde";
        case Basis::psi_plus: return "psi_plus";
        case Basis::psi_minus: return "psi_minus";
        case Basis::bessel_J: return "bessel_J";
        case Basis::hankel_1: return "hankel_1";
        case Basis::hankel_2: return "hankel_2";
        case Basis::power: return "power";
    }
    return "?";
}

const char* domain_name(Domain d) {
    switch (d) {
        case Domain::all_finite: return "all finite z";
        case Domain::outside_z0: return "|x|>|z0|";
        case Domain::outside_origin: return "|x|>0";
        case Domain::disc_z0: return "|x-z0|<|z0|";
    }
    return "?";
}

}  // namespace heun
