// heun_cli <subcommand> [job.json|-] [--format json|csv] [--out file] [--N n] [--tol t]
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "heun/jobs.hpp"

using namespace heun;

namespace {

struct Overrides {
    std::string job = "-";
    std::string format, out;
    int N = -1;
    double tol = -1.0;
};

int emit(const JobResult& r, const std::string& out_path) {
    std::string text = r.csv.empty() ? r.out.dump(2) + "\n" : r.csv;
    if (out_path.empty()) {
        std::cout << text;
        if (!r.csv.empty() && r.exit_code != exit_ok) std::cerr << r.out.dump() << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return exit_parse;
        }
        f << text;
        // summary stays on stdout when the table goes to a file
        if (!r.csv.empty()) std::cout << r.out.dump(2) << "\n";
    }
    return r.exit_code;
}

int run_sub(Task task, const Overrides& o) {
    std::string text;
    if (o.job == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream f(o.job);
        if (!f) {
            std::cerr << "cannot read " << o.job << "\n";
            return exit_parse;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    JobSpec job;
    try {
        job = job_from_json(nlohmann::json::parse(text));
        job.task = task;
        if (!o.format.empty()) {
            if (o.format != "json" && o.format != "csv") throw HeunError(ErrorKind::parse, "format must be json or csv");
            job.format = o.format;
        }
        if (o.N >= 0) job.N = o.N;
        if (o.tol > 0) job.tol = o.tol;
    } catch (const nlohmann::json::exception& e) {
        std::cout << nlohmann::json{{"error", e.what()}, {"error_kind", "parse"}}.dump(2) << "\n";
        return exit_parse;
    } catch (const HeunError& e) {
        std::cout << nlohmann::json{{"error", e.what()}, {"error_kind", error_kind_name(e.kind())}}.dump(2) << "\n";
        return exit_code_for(e.kind());
    }
    return emit(run(job), o.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Series solutions of confluent Heun equations"};
    app.require_subcommand(1);
    Overrides o;
    Task chosen = Task::eval;

    const std::pair<Task, const char*> subs[] = {
        {Task::solve_nu, "solve for the characteristic exponent nu"},
        {Task::solve_constant, "solve for B3 with the one-sided series"},
        {Task::eval, "evaluate a solution at points"},
        {Task::validate, "evaluate and check the ODE residual; exit 0 iff all points pass"},
        {Task::connect, "fit the first member against the other two"},
        {Task::spectrum, "finite-series spectrum in B3 (--N)"},
        {Task::mathieu, "Mathieu characteristic value and w(u)"},
        {Task::whe, "Whittaker-Hill parameters and Barber-Hasse W(u)"},
        {Task::classify, "normal-form classifier"},
        {Task::limits, "Leaver and Whittaker-Ince parameter maps"},
    };
    for (const auto& [t, help] : subs) {
        CLI::App* s = app.add_subcommand(task_name(t), help);
        s->add_option("job", o.job, "job JSON file, - for stdin");
        s->add_option("--format", o.format, "json or csv");
        s->add_option("--out", o.out, "write the result to a file");
        s->add_option("--tol", o.tol, "residual tolerance");
        if (t == Task::spectrum) s->add_option("--N", o.N, "truncation order");
        s->callback([&chosen, t = t] { chosen = t; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_parse;
    }
    return run_sub(chosen, o);
}
