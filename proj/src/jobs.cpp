#include "heun/jobs.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "heun/evaluator.hpp"

namespace heun {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw HeunError(ErrorKind::parse, msg); }

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from(const json& v, const char* what) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    bad(std::string("expected a number or [re, im] for ") + what);
}

cplx get_c(const json& o, const char* key, cplx dflt = 0.0) {
    if (!o.contains(key) || o[key].is_null()) return dflt;
    return cplx_from(o[key], key);
}

std::vector<cplx> get_cv(const json& o, const char* key) {
    std::vector<cplx> out;
    if (!o.contains(key)) return out;
    if (!o[key].is_array()) bad(std::string(key) + " must be an array");
    for (const auto& v : o[key]) out.push_back(cplx_from(v, key));
    return out;
}

TrigKind trig_from(const std::string& s) {
    if (s == "real") return TrigKind::real;
    if (s == "modified") return TrigKind::modified;
    bad("trig kind must be real or modified, got " + s);
}
const char* trig_name(TrigKind t) { return t == TrigKind::real ? "real" : "modified"; }

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

json validity_json(const std::vector<ValidityCheck>& v) {
    json a = json::array();
    for (const auto& c : v)
        a.push_back({{"condition", c.condition}, {"quantity", cj(c.quantity)}, {"pass", c.pass}, {"note", c.note}});
    return a;
}

json solve_json(const SolveResult& r) {
    return {{"root", cj(r.root)},         {"residual", std::abs(r.residual)}, {"depth", r.depth},
            {"iterations", r.iterations}, {"depth_stable", r.depth_stable},   {"depth_shift", r.depth_shift}};
}

bool special_set(const std::string& s) { return s == "barber" || s == "barber_p" || s == "u1p"; }

SolutionSet build_set(const JobSpec& j, cplx nu) {
    if (all_digits(j.set)) return solution_set(std::stoi(j.set), j.params, nu);
    return transformed_set(parse_word(j.set), j.params, nu);
}

SeriesSolution build_member(const JobSpec& j, std::vector<ValidityCheck>* validity) {
    j.params.check();
    if (j.set == "barber") return barber_solution(j.params);
    if (j.set == "barber_p") return barber_p_solution(j.params);
    if (j.set == "u1p") return dche_u1p_solution(j.params);
    SolutionSet s = build_set(j, j.nu.value_or(0.0));
    if (validity) *validity = validity_conditions(s);
    if (all_digits(j.member)) return s.members.at(std::size_t(std::stoi(j.member)));
    for (auto& m : s.members)
        if (m.name == j.member) return m;
    bad("no member named " + j.member + " in set " + j.set);
}

CharacteristicProblem constant_problem(const JobSpec& j) {
    if (j.set == "barber" || j.set == "barber_p") return barber_b3_problem(j.params, j.set == "barber_p");
    if (!all_digits(j.set)) bad("solve-constant and spectrum take a set number or barber/barber_p");
    return b3_problem(std::stoi(j.set), j.params);
}

JobResult fail_validity(json out, const std::vector<ValidityCheck>& v) {
    out["validity"] = validity_json(v);
    out["error"] = "validity conditions not satisfied";
    out["error_kind"] = "validity";
    return {exit_validity, out, ""};
}

// eval and validate share the point loop
JobResult run_points(const JobSpec& j, bool validate) {
    std::vector<ValidityCheck> validity;
    SeriesSolution s = build_member(j, &validity);
    json out = {{"task", task_name(j.task)}, {"solution", s.name}, {"basis", basis_name(s.basis)},
                {"domain", domain_name(s.domain)}, {"word", word_string(s.word)}, {"nu", cj(s.nu)}};
    if (!validity.empty() && !all_pass(validity)) return fail_validity(out, validity);
    out["validity"] = validity_json(validity);

    JobResult res;
    res.csv = csv_header();
    json pts = json::array();
    bool ok = true;
    for (cplx z : j.points) {
        PointValue pv = evaluate_point(s, z);
        double r = NAN;
        std::string flag = pv.flag;
        if (pv.in_domain && pv.converged) {
            try {
                ResidualEntry e = ode_residual(s.outer, pv.jet, z, j.tol);
                r = e.residual;
                if (!e.pass) ok = false;
            } catch (const HeunError& e) {
                flag = "origin";
            }
        } else {
            ok = false;
        }
        pts.push_back({{"z", cj(z)}, {"U", cj(pv.jet.u)}, {"dU", cj(pv.jet.d1)}, {"residual", r},
                       {"n_lo", pv.n_lo}, {"n_hi", pv.n_hi}, {"flag", flag}});
        res.csv += csv_row(z, pv.jet.u, r, flag);
    }
    out["points"] = pts;
    if (validate) {
        out["tol"] = j.tol;
        out["pass"] = ok;
        if (!ok) res.exit_code = exit_failed;
    }
    res.out = out;
    if (j.format != "csv") res.csv.clear();
    return res;
}

JobResult run_mathieu(const JobSpec& j, bool validate) {
    MathieuCharacteristic mc = mathieu_characteristic(j.mathieu.k2, j.mathieu_set, j.mathieu_index, j.mathieu.sigma);
    OracleResult orc = mathieu_fourier_oracle(j.mathieu.k2, mathieu_set_class(j.mathieu_set),
                                              std::max(16, 2 * (j.mathieu_index + 4)));
    cplx a_or = orc.values.at(std::size_t(j.mathieu_index));
    json out = {{"task", task_name(j.task)},
                {"set", j.mathieu_set},
                {"index", j.mathieu_index},
                {"class", fourier_class_name(mathieu_set_class(j.mathieu_set))},
                {"a", cj(mc.a)},
                {"a_fourier", cj(a_or)},
                {"delta", std::abs(mc.a - a_or)},
                {"solve", solve_json(mc.solve)},
                {"ince", params_to_json(mathieu_to_ince({mc.a, j.mathieu.k2, j.mathieu.sigma}))}};
    JobResult res;
    res.csv = csv_header();
    MathieuParams mp{mc.a, j.mathieu.k2, j.mathieu.sigma};
    MathieuSolution w = mathieu_solution(mp, j.mathieu_set);
    json pts = json::array();
    bool ok = mc.solve.depth_stable;
    for (cplx u : j.points) {
        Jet v = mathieu_eval(w, u);
        double r = mathieu_residual(mp, v, u);
        if (!(r < j.tol)) ok = false;
        pts.push_back({{"u", cj(u)}, {"w", cj(v.u)}, {"dw", cj(v.d1)}, {"residual", r}});
        res.csv += csv_row(u, v.u, r, "");
    }
    out["points"] = pts;
    if (validate) {
        out["tol"] = j.tol;
        out["pass"] = ok;
        if (!ok) res.exit_code = exit_failed;
    }
    res.out = out;
    if (j.format != "csv") res.csv.clear();
    return res;
}

JobResult run_whe(const JobSpec& j) {
    EquationParams p = whe_to_che(j.whe);
    auto fin = whe_finite_series(j.whe);
    json out = {{"task", "whe"}, {"che", params_to_json(p)}, {"finite_series_N", fin ? json(*fin) : json(nullptr)}};
    JobResult res;
    res.csv = csv_header();
    if (!j.points.empty()) {
        SeriesSolution s = barber_solution(p);
        json pts = json::array();
        bool ok = true;
        for (cplx u : j.points) {
            cplx s_ = trig_scale(j.whe.kappa);
            cplx z = std::cos(s_ * u);
            z *= z;
            PointValue pv = evaluate_point(s, z);
            double r = NAN;
            if (pv.in_domain && pv.converged)
                r = whe_residual(j.whe, jet_in_u(pv.jet, u, j.whe.kappa), u);
            if (!(r < j.tol)) ok = false;
            pts.push_back({{"u", cj(u)}, {"z", cj(z)}, {"W", cj(pv.jet.u)}, {"residual", r}, {"flag", pv.flag}});
            res.csv += csv_row(u, pv.jet.u, r, pv.flag);
        }
        out["solution"] = s.name;
        out["points"] = pts;
        out["pass"] = ok;
    }
    res.out = out;
    if (j.format != "csv") res.csv.clear();
    return res;
}

JobResult dispatch(const JobSpec& j) {
    JobResult res;
    json& out = res.out;
    out["task"] = task_name(j.task);
    switch (j.task) {
        case Task::solve_nu: {
            j.params.check();
            if (!all_digits(j.set) && special_set(j.set)) bad("solve-nu needs a hypergeometric/Bessel set");
            SolutionSet s = build_set(j, 0.0);
            CharacteristicProblem pr = nu_problem(s);
            std::vector<cplx> seeds = j.seeds.empty() ? std::vector<cplx>{cplx(0.3, 0.2)} : j.seeds;
            json roots = json::array();
            for (cplx sd : seeds) {
                SolveResult r = solve_characteristic(pr, sd);
                json e = solve_json(r);
                e["seed"] = cj(sd);
                SolutionSet at = build_set(j, r.root);
                e["validity"] = validity_json(validity_conditions(at));
                roots.push_back(e);
                if (!r.depth_stable) res.exit_code = exit_nonconvergence;
            }
            out["set"] = j.set;
            out["roots"] = roots;
            return res;
        }
        case Task::solve_constant: {
            j.params.check();
            CharacteristicProblem pr = constant_problem(j);
            std::vector<cplx> seeds = j.seeds.empty() ? std::vector<cplx>{j.params.B3} : j.seeds;
            json roots = json::array();
            for (cplx sd : seeds) {
                SolveResult r = solve_characteristic(pr, sd);
                json e = solve_json(r);
                e["seed"] = cj(sd);
                roots.push_back(e);
                if (!r.depth_stable) res.exit_code = exit_nonconvergence;
            }
            out["unknown"] = "B3";
            out["set"] = j.set;
            out["roots"] = roots;
            return res;
        }
        case Task::eval:
            if (j.has_mathieu) return run_mathieu(j, false);
            return run_points(j, false);
        case Task::validate:
            if (j.has_mathieu) return run_mathieu(j, true);
            return run_points(j, true);
        case Task::connect: {
            j.params.check();
            SolutionSet s = build_set(j, j.nu.value_or(0.0));
            auto v = validity_conditions(s);
            if (!all_pass(v)) return fail_validity(out, v);
            std::vector<cplx> checks = j.points;
            if (checks.empty()) {
                cplx r = 2.5 * std::max(1.0, std::abs(j.params.z0));
                for (double t : {0.15, 0.2, 0.3}) checks.push_back(std::polar(r.real(), pi * t));
            }
            Connection c = connect(s, default_anchors(s), checks);
            out["A"] = cj(c.A);
            out["B"] = cj(c.B);
            out["max_defect"] = c.max_defect;
            out["condition"] = c.condition;
            if (c.prediction_available) {
                out["A_pred"] = cj(c.A_pred);
                out["B_pred"] = cj(c.B_pred);
            }
            out["members"] = {s.members[0].name, s.members[1].name, s.members[2].name};
            out["pass"] = c.max_defect < j.tol;
            if (!(c.max_defect < j.tol)) res.exit_code = exit_failed;
            return res;
        }
        case Task::spectrum: {
            j.params.check();
            Spectrum sp = finite_spectrum(constant_problem(j), j.N);
            json roots = json::array();
            for (cplx r : sp.roots) roots.push_back(cj(r));
            out["unknown"] = "B3";
            out["N"] = j.N;
            out["roots"] = roots;
            out["hypothesis_holds"] = sp.hypothesis_holds;
            out["all_real"] = sp.all_real;
            out["min_gap"] = sp.min_gap;
            return res;
        }
        case Task::mathieu: return run_mathieu(j, false);
        case Task::whe: return run_whe(j);
        case Task::classify: {
            NormalFormQ c = j.normal_form.canonical();
            out["class"] = heun_class_name(classify_normal_form(c));
            json poles = json::array();
            for (const auto& p : c.poles) poles.push_back({{"at", cj(p.at)}, {"order", p.order}});
            out["canonical"] = {{"poles", poles}, {"poly_degree", c.poly_degree}};
            return res;
        }
        case Task::limits: {
            j.params.check();
            out["input"] = params_to_json(j.params);
            const auto k = j.params.kind;
            if (k == EquationKind::CHE || k == EquationKind::InceCHE) out["leaver"] = params_to_json(leaver_limit(j.params));
            if (k == EquationKind::CHE || k == EquationKind::DCHE)
                out["whittaker_ince"] = params_to_json(whittaker_ince_limit(j.params));
            if (k == EquationKind::CHE)
                out["commutes"] = whittaker_ince_limit(leaver_limit(j.params)) == leaver_limit(whittaker_ince_limit(j.params));
            return res;
        }
    }
    bad("unknown task");
}

}  // namespace

const char* task_name(Task t) {
    switch (t) {
        case Task::solve_nu: return "solve-nu";
        case Task::solve_constant: return "solve-constant";
        case Task::eval: return "eval";
        case Task::validate: return "validate";
        case Task::connect: return "connect";
        case Task::spectrum: return "spectrum";
        case Task::mathieu: return "mathieu";
        case Task::whe: return "whe";
        case Task::classify: return "classify";
        case Task::limits: return "limits";
    }
    return "?";
}

Task task_from_name(const std::string& s0) {
    std::string s = s0;
    std::replace(s.begin(), s.end(), '_', '-');
    for (Task t : {Task::solve_nu, Task::solve_constant, Task::eval, Task::validate, Task::connect, Task::spectrum,
                   Task::mathieu, Task::whe, Task::classify, Task::limits})
        if (s == task_name(t)) return t;
    bad("unknown task " + s0);
}

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::parse: return exit_parse;
        case ErrorKind::nonconvergence: return exit_nonconvergence;
        default: return exit_validity;
    }
}

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::pole: return "pole";
        case ErrorKind::nonconvergence: return "nonconvergence";
        case ErrorKind::branch: return "branch";
        case ErrorKind::origin: return "origin";
        case ErrorKind::domain: return "domain";
        case ErrorKind::validity: return "validity";
        case ErrorKind::parse: return "parse";
        case ErrorKind::invariant: return "invariant";
    }
    return "?";
}

bool JobSpec::operator==(const JobSpec& o) const {
    auto same_m = [](const MathieuParams& x, const MathieuParams& y) { return x.a == y.a && x.k2 == y.k2 && x.sigma == y.sigma; };
    auto same_w = [](const WHEParams& x, const WHEParams& y) {
        return x.vartheta == y.vartheta && x.xi == y.xi && x.p == y.p && x.kappa == y.kappa;
    };
    return task == o.task && params == o.params && set == o.set && nu == o.nu && member == o.member &&
           seeds == o.seeds && points == o.points && tol == o.tol && N == o.N && has_mathieu == o.has_mathieu &&
           same_m(mathieu, o.mathieu) && mathieu_set == o.mathieu_set && mathieu_index == o.mathieu_index &&
           has_whe == o.has_whe && same_w(whe, o.whe) && normal_form.poles == o.normal_form.poles &&
           normal_form.poly_degree == o.normal_form.poly_degree && format == o.format;
}

json params_to_json(const EquationParams& p) {
    return {{"kind", kind_name(p.kind)}, {"B1", cj(p.B1)},       {"B2", cj(p.B2)},   {"B3", cj(p.B3)},
            {"z0", cj(p.z0)},            {"omega", cj(p.omega)}, {"eta", cj(p.eta)}, {"q", cj(p.q)}};
}

EquationParams params_from_json(const json& e) {
    if (!e.is_object()) bad("equation must be an object");
    if (!e.contains("kind") || !e["kind"].is_string()) bad("equation.kind missing");
    EquationParams p;
    p.kind = kind_from_name(e["kind"].get<std::string>());
    p.B1 = get_c(e, "B1");
    p.B2 = get_c(e, "B2");
    p.B3 = get_c(e, "B3");
    p.z0 = get_c(e, "z0");
    p.omega = get_c(e, "omega");
    p.eta = get_c(e, "eta");
    p.q = get_c(e, "q");
    return p;
}

json to_json(const JobSpec& j) {
    json d = {{"task", task_name(j.task)},
              {"equation", params_to_json(j.params)},
              {"set", j.set},
              {"member", j.member},
              {"tol", j.tol},
              {"N", j.N},
              {"format", j.format}};
    if (j.nu) d["nu"] = cj(*j.nu);
    d["seeds"] = json::array();
    for (cplx s : j.seeds) d["seeds"].push_back(cj(s));
    d["points"] = json::array();
    for (cplx s : j.points) d["points"].push_back(cj(s));
    if (j.has_mathieu)
        d["mathieu"] = {{"a", cj(j.mathieu.a)},
                        {"k2", cj(j.mathieu.k2)},
                        {"sigma", trig_name(j.mathieu.sigma)},
                        {"set", j.mathieu_set},
                        {"index", j.mathieu_index}};
    if (j.has_whe)
        d["whe"] = {{"vartheta", cj(j.whe.vartheta)}, {"xi", cj(j.whe.xi)}, {"p", cj(j.whe.p)}, {"kappa", trig_name(j.whe.kappa)}};
    json poles = json::array();
    for (const auto& p : j.normal_form.poles) poles.push_back({{"at", cj(p.at)}, {"order", p.order}});
    d["normal_form"] = {{"poles", poles}, {"poly_degree", j.normal_form.poly_degree}};
    return d;
}

JobSpec job_from_json(const json& d) {
    if (!d.is_object()) bad("job must be a JSON object");
    JobSpec j;
    try {
        if (d.contains("task")) j.task = task_from_name(d["task"].get<std::string>());
        if (d.contains("equation")) j.params = params_from_json(d["equation"]);
        if (d.contains("set")) {
            const json& s = d["set"];
            if (s.is_number_integer())
                j.set = std::to_string(s.get<int>());
            else if (s.is_string())
                j.set = s.get<std::string>();
            else
                bad("set must be an integer or a string");
            if (!all_digits(j.set) && !special_set(j.set)) parse_word(j.set);  // validate early
        }
        if (d.contains("nu") && !d["nu"].is_null()) j.nu = cplx_from(d["nu"], "nu");
        if (d.contains("member")) {
            const json& m = d["member"];
            j.member = m.is_number_integer() ? std::to_string(m.get<int>()) : m.get<std::string>();
        }
        j.seeds = get_cv(d, "seeds");
        j.points = get_cv(d, "points");
        if (d.contains("tol")) j.tol = d["tol"].get<double>();
        if (d.contains("N")) j.N = d["N"].get<int>();
        if (d.contains("format")) j.format = d["format"].get<std::string>();
        if (j.format != "json" && j.format != "csv") bad("format must be json or csv");
        if (d.contains("mathieu")) {
            const json& m = d["mathieu"];
            j.has_mathieu = true;
            j.mathieu.a = get_c(m, "a");
            j.mathieu.k2 = get_c(m, "k2");
            if (m.contains("sigma")) j.mathieu.sigma = trig_from(m["sigma"].get<std::string>());
            if (m.contains("set")) j.mathieu_set = m["set"].get<int>();
            if (m.contains("index")) j.mathieu_index = m["index"].get<int>();
        }
        if (d.contains("whe")) {
            const json& w = d["whe"];
            j.has_whe = true;
            j.whe.vartheta = get_c(w, "vartheta");
            j.whe.xi = get_c(w, "xi");
            j.whe.p = get_c(w, "p");
            if (w.contains("kappa")) j.whe.kappa = trig_from(w["kappa"].get<std::string>());
        }
        if (d.contains("normal_form")) {
            const json& q = d["normal_form"];
            if (q.contains("poles"))
                for (const auto& p : q["poles"]) j.normal_form.poles.push_back({cplx_from(p.at("at"), "pole"), p.at("order").get<int>()});
            if (q.contains("poly_degree")) j.normal_form.poly_degree = q["poly_degree"].get<int>();
        }
    } catch (const json::exception& e) {
        bad(std::string("malformed job: ") + e.what());
    }
    return j;
}

JobResult run(const JobSpec& job) {
    try {
        if ((job.task == Task::mathieu) && !job.has_mathieu) bad("mathieu task needs a mathieu block");
        if (job.task == Task::whe && !job.has_whe) bad("whe task needs a whe block");
        return dispatch(job);
    } catch (const HeunError& e) {
        JobResult r;
        r.exit_code = exit_code_for(e.kind());
        r.out = {{"task", task_name(job.task)}, {"error", e.what()}, {"error_kind", error_kind_name(e.kind())}};
        return r;
    } catch (const std::out_of_range& e) {
        JobResult r;
        r.exit_code = exit_parse;
        r.out = {{"task", task_name(job.task)}, {"error", e.what()}, {"error_kind", "parse"}};
        return r;
    }
}

std::string csv_header() { return "re_z,im_z,re_U,im_U,residual,flag\n"; }

std::string csv_row(cplx z, cplx U, double residual, const std::string& flag) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,", z.real(), z.imag(), U.real(), U.imag(), residual);
    return buf + flag + "\n";
}

}  // namespace heun
