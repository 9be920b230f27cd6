#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cimra/cim.hpp"
#include "cimra/mobility.hpp"
#include "cimra/solvers.hpp"

namespace cimra {

enum class Method { Cim, Hopfield, Sa, Cnoma, Es, Random };

std::string method_name(Method m);
Method method_from_name(const std::string& name);
std::vector<Method> parse_methods(const std::string& comma_list);

struct PipelineConfig {
    RadioConfig radio;
    CimConfig cim;
    SaConfig sa;
};

// Flat key=value overrides ('#' comments allowed). Unknown keys are errors.
PipelineConfig config_from_text(const std::string& text, PipelineConfig base);
PipelineConfig config_from_file(const std::string& path, PipelineConfig base);

struct SolveResult {
    Method method = Method::Random;
    Assignment assignment;
    std::vector<double> user_rates;  // real users, after water-filling
    double total_rate = 0.0;
    double wall_clock_s = 0.0;  // the solver call only
    bool feasible = false;
    bool repaired = false;
    std::uint64_t seed = 0;
    std::uint64_t work = 0;  // cycles / sweeps / states, per method
    bool has_trace = false;
    CimTrace trace;
};

// One full allocation: CNR, unit-power rate table, encode, solve, decode and
// repair, water-fill the decoded assignment, price the users at the final
// powers.
SolveResult run_pipeline(const Scenario& scenario, Method method, const PipelineConfig& cfg,
                         std::uint64_t solver_seed, bool want_trace = false);

std::string solve_results_to_csv(const std::vector<SolveResult>& results);

// Solver closure over a (possibly stale) CNR snapshot and its unit-power
// rate table, for dynamic-evaluation arms and oracles.
std::function<Assignment(const CnrMatrix&, const RateTable&, std::uint64_t)> method_arm(
    Method method, const PipelineConfig& cfg);

enum class SweepKind { Users, UsersFixedChannels, Power, Channels };

std::string sweep_kind_name(SweepKind k);

struct SweepSpec {
    SweepKind kind = SweepKind::Users;
    std::vector<double> values;
    int fixed_channels = 5;  // UsersFixedChannels only
    int num_users = 12;      // Power and Channels sweeps
    int trials = 50;
    std::vector<Method> methods;
    std::uint64_t master_seed = 1;
};

struct SweepRow {
    std::string kind;
    double sweep_value = 0.0;
    int trial = 0;
    std::string method;
    std::uint64_t seed = 0;
    double total_rate = 0.0;
    double wall_clock_s = 0.0;
    bool feasible = false;
    bool repaired = false;
    std::string status;  // "ok" or "skip"
};

// Per (point, trial, method) rows. Users sweeps size the channel count as
// ceil(users / 2); exhaustive-search rows beyond its enumeration bound are
// skip-marked. Per-trial seeds derive from (master_seed, point, trial) so
// results are independent of execution order; trials may run concurrently.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const PipelineConfig& base);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_csv(const std::string& text);

// Annealing length schedule over the user-count ladder 6..18.
int sa_sweeps_for_users(int num_users);

struct TimingRow {
    int num_users = 0;
    int trial = 0;
    std::string method;
    std::string work_metric;  // cycles / sweeps / states / solves
    std::uint64_t work = 0;
    double wall_clock_s = 0.0;
    double total_rate = 0.0;
    std::string status;  // "ok" or "skip"
};

// Wall-clock scaling over user counts in {6,8,...,18}. The oscillator solver
// holds 1000 cycles at every size, annealing follows sa_sweeps_for_users,
// exhaustive search runs up to 14 users and is skip-marked beyond.
std::vector<TimingRow> timing_bench(const std::vector<int>& user_counts,
                                    const std::vector<Method>& methods, int trials,
                                    const PipelineConfig& base, std::uint64_t master_seed);

std::string timing_to_csv(const std::vector<TimingRow>& rows);

inline constexpr int kEsMaxUsers = 14;

}  // namespace cimra
