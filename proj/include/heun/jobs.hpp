#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heun/heun_core.hpp"
#include "heun/special_cases.hpp"

namespace heun {

enum class Task { solve_nu, solve_constant, eval, validate, connect, spectrum, mathieu, whe, classify, limits };
const char* task_name(Task t);
Task task_from_name(const std::string& s);  // accepts solve-nu and solve_nu; throws parse

// exit codes
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;  // a requested residual/defect check did not pass
inline constexpr int exit_parse = 2;
inline constexpr int exit_validity = 3;
inline constexpr int exit_nonconvergence = 4;

int exit_code_for(ErrorKind k);
const char* error_kind_name(ErrorKind k);

struct JobSpec {
    Task task = Task::eval;
    EquationParams params;
    // "1".."4", a word such as "T2 T1" or "S1,S2", or "barber", "barber_p", "u1p"
    std::string set = "1";
    std::optional<cplx> nu;
    std::string member = "0";  // index into the set or member name
    std::vector<cplx> seeds;
    std::vector<cplx> points;  // z, or u for the mathieu and whe tasks
    double tol = 1e-8;
    int N = 3;

    bool has_mathieu = false;
    MathieuParams mathieu;
    int mathieu_set = 1, mathieu_index = 0;

    bool has_whe = false;
    WHEParams whe;

    NormalFormQ normal_form;
    std::string format = "json";  // json | csv

    bool operator==(const JobSpec&) const;
};

// complex numbers as [re, im]; plain numbers accepted on input
nlohmann::json to_json(const JobSpec& j);
JobSpec job_from_json(const nlohmann::json& doc);  // throws HeunError(parse)
nlohmann::json params_to_json(const EquationParams& p);
EquationParams params_from_json(const nlohmann::json& e);

struct JobResult {
    int exit_code = exit_ok;
    nlohmann::json out;
    std::string csv;  // filled by eval/validate when format == "csv"
};

JobResult run(const JobSpec& job);

// fixed header re_z,im_z,re_U,im_U,residual,flag; 17 significant digits
std::string csv_header();
std::string csv_row(cplx z, cplx U, double residual, const std::string& flag);

}  // namespace heun
