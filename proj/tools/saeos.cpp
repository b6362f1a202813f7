// saeos: generate, solve, benchmark and verify observation scheduling instances.
//
// Exit codes: 0 success, 2 input or configuration error, 3 a produced
// schedule failed its own validation, 4 verification FAIL, 5 oracle guard
// refusal, 1 anything else.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "saeos/saeos.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kInput = 2, kInternal = 3, kVerifyFail = 4, kGuard = 5 };

saeos::solver::ObjectiveMode parse_objective(const std::string& s) {
    if (s == "single") return saeos::solver::ObjectiveMode::Single;
    if (s == "lex" || s == "lexicographic") return saeos::solver::ObjectiveMode::Lexicographic;
    throw saeos::ConfigError("objective must be 'single' or 'lex', got '" + s + "'");
}

struct SolveArgs {
    double time_limit = 3600.0;
    std::string objective = "single";
    std::uint64_t seed = 0;
    int workers = 1;
};

saeos::solver::SolverConfig make_config(const SolveArgs& a) {
    saeos::solver::SolverConfig c;
    c.time_limit = a.time_limit;
    c.objective_mode = parse_objective(a.objective);
    c.rng_seed = a.seed;
    c.worker_count = a.workers;
    if (a.workers < 1) throw saeos::ConfigError("workers must be at least 1");
    return c;
}

void add_solve_options(CLI::App* cmd, SolveArgs& a) {
    cmd->add_option("--time-limit", a.time_limit, "Time limit in seconds")->capture_default_str();
    cmd->add_option("--objective", a.objective, "single | lex")->capture_default_str();
    cmd->add_option("--seed", a.seed, "Warm-start seed")->capture_default_str();
    cmd->add_option("--workers", a.workers, "Worker count (the search runs sequentially)")->capture_default_str();
}

int cmd_generate(const std::string& letter, int count, std::uint64_t seed, const std::string& out) {
    for (const auto& path : saeos::bench::generate(saeos::bench::parse_letter(letter), count, seed, out))
        std::cout << path << '\n';
    return kOk;
}

int cmd_solve(const std::string& file, const SolveArgs& args, const std::string& out) {
    const auto config = make_config(args);
    const auto inst = saeos::io::load_instance(file);
    const auto sol = saeos::bench::solve_checked(inst, config);
    // Re-read what is written so the file itself is checked too.
    const auto text = saeos::io::serialize_solution(inst, sol);
    if (!saeos::validate_schedule(inst, saeos::io::deserialize_solution(inst, text)).ok())
        throw saeos::InternalError("solution file does not round-trip to a valid schedule");
    if (!out.empty()) saeos::io::write_file(out, text);
    std::cout << saeos::bench::header_line() << '\n' << saeos::bench::format_row(saeos::bench::make_row(inst, sol)) << '\n';
    return kOk;
}

int cmd_benchmark(const std::string& dir, const SolveArgs& args, const std::string& csv) {
    const auto config = make_config(args);
    const auto result = saeos::bench::run_benchmark(dir, config);
    const auto text = saeos::bench::format_benchmark(result);
    std::cout << text;
    if (!csv.empty()) saeos::io::write_file(csv, text);
    for (const auto& row : result.rows)
        if (!row.ok()) std::cerr << row.instance << ": " << row.error << '\n';
    return kOk;
}

int cmd_verify(const std::string& file, const std::string& solution_file, double time_limit) {
    const auto inst = saeos::io::load_instance(file);
    if (!solution_file.empty()) {
        const auto sol = saeos::io::deserialize_solution(inst, saeos::io::read_file(solution_file));
        const auto report = saeos::validate_schedule(inst, sol);
        if (report.ok()) {
            std::cout << "PASS schedule valid, objective " << sol.objective << '\n';
            return kOk;
        }
        std::cout << "FAIL " << report.violations.size() << " violation(s)\n";
        for (const auto& v : report.violations)
            std::cout << "  [" << saeos::to_string(v.kind) << "] satellite " << v.satellite << " position "
                      << v.position << ": " << v.message << '\n';
        return kVerifyFail;
    }
    const auto exact = saeos::oracle::brute_force_solve(inst);
    saeos::solver::SolverConfig config;
    config.time_limit = time_limit;
    const auto sol = saeos::solver::solve(inst, config);
    const bool valid = saeos::validate_schedule(inst, sol).ok() && saeos::validate_schedule(inst, exact).ok();
    const bool equal = sol.objective == exact.objective && sol.status != saeos::SolveStatus::Feasible;
    char line[160];
    std::snprintf(line, sizeof line, "oracle %.17g solver %.17g", exact.objective, sol.objective);
    std::cout << line << '\n' << (valid && equal ? "PASS" : "FAIL") << '\n';
    return valid && equal ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scheduling of super-agile Earth observation satellites"};
    app.require_subcommand(1);

    std::string letter, out_dir;
    int count = 10;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("generate", "Write instance files for a configuration");
    gen->add_option("--config", letter, "Configuration letter A..G")->required();
    gen->add_option("--count", count, "Number of instances")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Master seed")->capture_default_str();
    gen->add_option("--out", out_dir, "Output directory")->required();

    std::string solve_file, solve_out;
    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Solve one instance and print its report row");
    solve->add_option("file", solve_file, "Instance file")->required();
    add_solve_options(solve, solve_args);
    solve->add_option("--out", solve_out, "Solution file");

    std::string bench_dir, bench_csv;
    SolveArgs bench_args;
    auto* bench = app.add_subcommand("benchmark", "Solve every instance of a directory");
    bench->add_option("dir", bench_dir, "Directory of instance files")->required();
    add_solve_options(bench, bench_args);
    bench->add_option("--csv", bench_csv, "Also write the table to this file");

    std::string verify_file, verify_solution;
    double verify_limit = 60.0;
    auto* verify = app.add_subcommand("verify", "Compare solver and oracle, or validate a solution file");
    verify->add_option("file", verify_file, "Instance file")->required();
    verify->add_option("--solution", verify_solution, "Validate this solution file instead");
    verify->add_option("--time-limit", verify_limit, "Solver time limit")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*gen) return cmd_generate(letter, count, gen_seed, out_dir);
        if (*solve) return cmd_solve(solve_file, solve_args, solve_out);
        if (*bench) return cmd_benchmark(bench_dir, bench_args, bench_csv);
        if (*verify) return cmd_verify(verify_file, verify_solution, verify_limit);
    } catch (const saeos::GuardError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kGuard;
    } catch (const saeos::InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    } catch (const saeos::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}
