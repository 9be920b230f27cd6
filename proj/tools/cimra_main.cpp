#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cimra/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cimra;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    std::cout << "wrote " << path.string() << "\n";
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Scenario load_or_generate(const std::string& in_path, const PipelineConfig& cfg, int num_users,
                          std::uint64_t seed) {
    if (!in_path.empty()) return scenario_from_text(read_file(in_path));
    return generate_scenario(cfg.radio, num_users, seed);
}

SweepKind sweep_kind_from_name(const std::string& name) {
    for (SweepKind k : {SweepKind::Users, SweepKind::UsersFixedChannels, SweepKind::Power,
                        SweepKind::Channels})
        if (sweep_kind_name(k) == name) return k;
    throw ParseError("unknown sweep kind: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"downlink NOMA channel and power allocation benchmark"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    std::string config_path;
    std::string out_dir = ".";
    int trials = 50;
    std::string methods_csv = "cim,hopfield,sa,cnoma,es,random";
    app.add_option("--seed", seed, "master seed");
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--trials", trials, "trials per sweep point");
    app.add_option("--methods", methods_csv, "comma-separated methods");

    auto* gen = app.add_subcommand("gen", "generate a scenario file");
    int gen_users = 12;
    gen->add_option("--users", gen_users, "number of real users");

    auto* solve = app.add_subcommand("solve", "run each method on one scenario");
    std::string solve_in;
    int solve_users = 12;
    solve->add_option("--in", solve_in, "scenario file (generated when absent)");
    solve->add_option("--users", solve_users, "number of real users");

    auto* sweep = app.add_subcommand("sweep", "total rate over a parameter sweep");
    std::string sweep_kind = "users";
    std::vector<double> sweep_values;
    int sweep_channels = 5;
    int sweep_users = 12;
    sweep->add_option("--kind", sweep_kind, "users | users-fixed | power | channels");
    sweep->add_option("--values", sweep_values, "sweep points")->delimiter(',')->required();
    sweep->add_option("--channels", sweep_channels, "channel count for users-fixed");
    sweep->add_option("--users", sweep_users, "user count for power and channels sweeps");

    auto* timing = app.add_subcommand("timing", "wall-clock scaling over user counts");
    std::vector<int> timing_users = {6, 8, 10, 12, 14, 16, 18};
    timing->add_option("--users", timing_users, "user counts")->delimiter(',');

    auto* mobility = app.add_subcommand("mobility", "allocation quality under stale information");
    int mob_users = 12;
    int mob_intervals = 50;
    std::vector<double> mob_latencies_ms = {5.0, 40.0};
    mobility->add_option("--users", mob_users, "number of real users");
    mobility->add_option("--intervals", mob_intervals, "decision intervals to simulate");
    mobility->add_option("--latency-ms", mob_latencies_ms, "solver latencies in ms")
        ->delimiter(',');

    auto* trace = app.add_subcommand("trace", "oscillator amplitude and energy trace");
    std::string trace_in;
    int trace_users = 12;
    trace->add_option("--in", trace_in, "scenario file (generated when absent)");
    trace->add_option("--users", trace_users, "number of real users");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = config_from_file(config_path, cfg);
        const std::vector<Method> methods = parse_methods(methods_csv);
        const fs::path out(out_dir);

        if (*gen) {
            const Scenario s = generate_scenario(cfg.radio, gen_users, seed);
            write_file(out / "scenario.txt", scenario_to_text(s));
        } else if (*solve) {
            const Scenario s = load_or_generate(solve_in, cfg, solve_users, seed);
            std::vector<SolveResult> results;
            for (Method m : methods) {
                const std::uint64_t solver_seed =
                    derive_seed(seed, static_cast<std::uint64_t>(m) + 1);
                results.push_back(run_pipeline(s, m, cfg, solver_seed));
                const SolveResult& r = results.back();
                std::cout << method_name(m) << ": total_rate=" << fp17(r.total_rate)
                          << " bits/s, wall_clock=" << fp17(r.wall_clock_s)
                          << " s, feasible=" << r.feasible << ", repaired=" << r.repaired << "\n";
            }
            write_file(out / "solve.csv", solve_results_to_csv(results));
        } else if (*sweep) {
            SweepSpec spec;
            spec.kind = sweep_kind_from_name(sweep_kind);
            spec.values = sweep_values;
            spec.fixed_channels = sweep_channels;
            spec.num_users = sweep_users;
            spec.trials = trials;
            spec.methods = methods;
            spec.master_seed = seed;
            const std::vector<SweepRow> rows = run_sweep(spec, cfg);
            write_file(out / ("sweep_" + sweep_kind + ".csv"), sweep_to_csv(rows));
        } else if (*timing) {
            const std::vector<TimingRow> rows =
                timing_bench(timing_users, methods, trials, cfg, seed);
            write_file(out / "timing.csv", timing_to_csv(rows));
        } else if (*mobility) {
            std::vector<SolverArm> arms;
            for (Method m : methods)
                for (double lat_ms : mob_latencies_ms)
                    arms.push_back({method_name(m), lat_ms / 1000.0, method_arm(m, cfg)});
            const auto oracle = method_arm(Method::Es, cfg);
            MobilityConfig mob;
            const std::vector<IntervalRow> rows =
                dynamic_eval(mob, cfg.radio, mob_users, mob_intervals, arms, oracle, seed);
            write_file(out / "mobility.csv", intervals_to_csv(rows));
        } else if (*trace) {
            const Scenario s = load_or_generate(trace_in, cfg, trace_users, seed);
            const SolveResult r =
                run_pipeline(s, Method::Cim, cfg, derive_seed(seed, 1), true);
            std::cout << "total_rate=" << fp17(r.total_rate) << " bits/s, feasible=" << r.feasible
                      << ", repaired=" << r.repaired << "\n";
            write_file(out / "trace.csv", trace_to_csv(r.trace));
        }
        return 0;
    } catch (const QosInfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ProblemTooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
