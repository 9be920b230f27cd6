#include "cimra/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "cimra/kernels.hpp"

namespace cimra {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs fn(i) for i in [0, n). Work items must not share mutable state; seeds
// are pre-derived so the output is identical at any thread count.
void parallel_for(int n, const std::function<void(int)>& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = std::min<int>(n, hw > 0 ? static_cast<int>(hw) : 1);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Cim: return "cim";
        case Method::Hopfield: return "hopfield";
        case Method::Sa: return "sa";
        case Method::Cnoma: return "cnoma";
        case Method::Es: return "es";
        case Method::Random: return "random";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::Cim, Method::Hopfield, Method::Sa, Method::Cnoma, Method::Es,
                     Method::Random})
        if (method_name(m) == name) return m;
    throw ParseError("unknown method: " + name);
}

std::vector<Method> parse_methods(const std::string& comma_list) {
    std::vector<Method> out;
    std::string item;
    std::istringstream in(comma_list);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(method_from_name(item));
    }
    if (out.empty()) throw ParseError("empty method list");
    return out;
}

PipelineConfig config_from_text(const std::string& text, PipelineConfig base) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) throw ParseError("expected key=value: " + line);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "total_bandwidth_hz") base.radio.total_bandwidth_hz = parse_double(val);
        else if (key == "num_channels") base.radio.num_channels = static_cast<int>(parse_int(val));
        else if (key == "noise_psd_dbm_per_hz") base.radio.noise_psd_dbm_per_hz = parse_double(val);
        else if (key == "pathloss_exponent") base.radio.pathloss_exponent = parse_double(val);
        else if (key == "min_rate_bps_per_hz") base.radio.min_rate_bps_per_hz = parse_double(val);
        else if (key == "total_power_w") base.radio.total_power_w = parse_double(val);
        else if (key == "cim_num_cycles") base.cim.num_cycles = static_cast<int>(parse_int(val));
        else if (key == "cim_dt") base.cim.dt = parse_double(val);
        else if (key == "cim_pump_max") base.cim.pump_max = parse_double(val);
        else if (key == "cim_pump_ramp_fraction") base.cim.pump_ramp_fraction = parse_double(val);
        else if (key == "cim_coupling_scale") base.cim.coupling_scale = parse_double(val);
        else if (key == "cim_init_amplitude") base.cim.init_amplitude = parse_double(val);
        else if (key == "cim_noise_std") base.cim.noise_std = parse_double(val);
        else if (key == "sa_num_sweeps") base.sa.num_sweeps = static_cast<int>(parse_int(val));
        else if (key == "sa_t_initial") base.sa.t_initial = parse_double(val);
        else throw ParseError("unknown config key: " + key);
    }
    return base;
}

PipelineConfig config_from_file(const std::string& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_text(buf.str(), base);
}

SolveResult run_pipeline(const Scenario& scenario, Method method, const PipelineConfig& cfg,
                         std::uint64_t solver_seed, bool want_trace) {
    scenario.validate();
    const RadioConfig& radio = scenario.config;
    const CnrMatrix cnr = compute_cnr(scenario);
    const RateTable table = build_rate_table(cnr, 1.0, radio);

    SolveResult out;
    out.method = method;
    out.seed = solver_seed;

    switch (method) {
        case Method::Cim: {
            const EnergyTerms terms = build_energy_terms(table);
            const NetworkWeights nw = derive_weights(terms, default_scaling(table));
            const IsingProblem prob = to_ising(nw);
            CimConfig cc = cfg.cim;
            cc.seed = solver_seed;
            const auto t0 = Clock::now();
            CimResult res = simulate(prob, cc, want_trace);
            out.wall_clock_s = seconds_since(t0);
            DecodeResult dec = decode_spins(res.sigma, prob, table);
            out.assignment = std::move(dec.assignment);
            out.repaired = dec.repaired;
            out.work = static_cast<std::uint64_t>(cc.num_cycles);
            out.has_trace = res.has_trace;
            out.trace = std::move(res.trace);
            break;
        }
        case Method::Hopfield: {
            const EnergyTerms terms = build_energy_terms(table);
            const NetworkWeights nw = derive_weights(terms, default_scaling(table));
            const auto t0 = Clock::now();
            BinarySolveResult r = hopfield_solve(nw, table, solver_seed);
            out.wall_clock_s = seconds_since(t0);
            out.assignment = std::move(r.assignment);
            out.repaired = r.repaired;
            out.work = static_cast<std::uint64_t>(r.sweeps);
            break;
        }
        case Method::Sa: {
            const EnergyTerms terms = build_energy_terms(table);
            const NetworkWeights nw = derive_weights(terms, default_scaling(table));
            SaConfig sc = cfg.sa;
            sc.seed = solver_seed;
            const auto t0 = Clock::now();
            BinarySolveResult r = sa_solve(nw, table, sc);
            out.wall_clock_s = seconds_since(t0);
            out.assignment = std::move(r.assignment);
            out.repaired = r.repaired;
            out.work = static_cast<std::uint64_t>(sc.num_sweeps);
            break;
        }
        case Method::Cnoma: {
            const auto t0 = Clock::now();
            out.assignment = cnoma_solve(cnr, radio);
            out.wall_clock_s = seconds_since(t0);
            out.work = 1;
            break;
        }
        case Method::Es: {
            const auto t0 = Clock::now();
            EsResult r = es_solve(table);
            out.wall_clock_s = seconds_since(t0);
            out.assignment = std::move(r.assignment);
            out.work = r.states;
            break;
        }
        case Method::Random: {
            const auto t0 = Clock::now();
            out.assignment = random_solve(radio.num_channels, scenario.num_users(), solver_seed);
            out.wall_clock_s = seconds_since(t0);
            out.work = 1;
            break;
        }
    }

    const FinalAllocation fa = allocate_and_rate(out.assignment, cnr, radio);
    out.user_rates.assign(fa.entity_rates.begin(), fa.entity_rates.begin() + scenario.num_users());
    out.total_rate = fa.total;
    const double floor = radio.rate_floor_bps();
    bool rates_ok = true;
    for (double r : out.user_rates) rates_ok = rates_ok && r >= floor * (1.0 - 1e-9);
    out.feasible = is_feasible(out.assignment) && rates_ok;
    return out;
}

std::function<Assignment(const CnrMatrix&, const RateTable&, std::uint64_t)> method_arm(
    Method method, const PipelineConfig& cfg) {
    switch (method) {
        case Method::Cim:
            return [cfg](const CnrMatrix&, const RateTable& table, std::uint64_t seed) {
                const NetworkWeights nw =
                    derive_weights(build_energy_terms(table), default_scaling(table));
                const IsingProblem prob = to_ising(nw);
                CimConfig cc = cfg.cim;
                cc.seed = seed;
                const CimResult res = simulate(prob, cc);
                return decode_spins(res.sigma, prob, table).assignment;
            };
        case Method::Hopfield:
            return [](const CnrMatrix&, const RateTable& table, std::uint64_t seed) {
                const NetworkWeights nw =
                    derive_weights(build_energy_terms(table), default_scaling(table));
                return hopfield_solve(nw, table, seed).assignment;
            };
        case Method::Sa:
            return [cfg](const CnrMatrix&, const RateTable& table, std::uint64_t seed) {
                const NetworkWeights nw =
                    derive_weights(build_energy_terms(table), default_scaling(table));
                SaConfig sc = cfg.sa;
                sc.seed = seed;
                return sa_solve(nw, table, sc).assignment;
            };
        case Method::Cnoma:
            return [cfg](const CnrMatrix& cnr, const RateTable&, std::uint64_t) {
                RadioConfig radio = cfg.radio;
                radio.num_channels = cnr.num_channels;
                return cnoma_solve(cnr, radio);
            };
        case Method::Es:
            return [](const CnrMatrix&, const RateTable& table, std::uint64_t) {
                return es_solve(table).assignment;
            };
        case Method::Random:
            return [](const CnrMatrix&, const RateTable& table, std::uint64_t seed) {
                return random_solve(table.num_channels, table.num_real_users, seed);
            };
    }
    throw std::invalid_argument("unknown method");
}

std::string solve_results_to_csv(const std::vector<SolveResult>& results) {
    std::ostringstream out;
    out << "method,seed,total_rate,wall_clock_s,feasible,repaired,work\n";
    for (const auto& r : results) {
        out << method_name(r.method) << "," << r.seed << "," << fp17(r.total_rate) << ","
            << fp17(r.wall_clock_s) << "," << (r.feasible ? 1 : 0) << "," << (r.repaired ? 1 : 0)
            << "," << r.work << "\n";
    }
    return out.str();
}

std::string sweep_kind_name(SweepKind k) {
    switch (k) {
        case SweepKind::Users: return "users";
        case SweepKind::UsersFixedChannels: return "users-fixed";
        case SweepKind::Power: return "power";
        case SweepKind::Channels: return "channels";
    }
    return "?";
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const PipelineConfig& base) {
    if (spec.values.empty()) throw std::invalid_argument("sweep has no points");
    if (spec.trials < 1) throw std::invalid_argument("trials < 1");
    if (spec.methods.empty()) throw std::invalid_argument("sweep has no methods");
    kern::active_kernels();

    std::vector<SweepRow> rows(spec.values.size() * spec.trials * spec.methods.size());
    const int per_point = spec.trials * static_cast<int>(spec.methods.size());

    for (std::size_t point = 0; point < spec.values.size(); ++point) {
        const double value = spec.values[point];
        PipelineConfig cfg = base;
        int num_users = spec.num_users;
        switch (spec.kind) {
            case SweepKind::Users:
                num_users = static_cast<int>(value);
                cfg.radio.num_channels = (num_users + 1) / 2;
                break;
            case SweepKind::UsersFixedChannels:
                num_users = static_cast<int>(value);
                cfg.radio.num_channels = spec.fixed_channels;
                break;
            case SweepKind::Power:
                cfg.radio.total_power_w = value;
                break;
            case SweepKind::Channels:
                cfg.radio.num_channels = static_cast<int>(value);
                break;
        }

        parallel_for(spec.trials, [&](int trial) {
            // Scenario and solver draws share the trial stream across sweep
            // points, so a trend compares the same cell and the same solver
            // noise under each setting.
            const std::uint64_t scen_seed = derive_seed(spec.master_seed, trial, 1);
            const std::uint64_t solver_seed = derive_seed(spec.master_seed, trial, 2);
            const Scenario scenario = generate_scenario(cfg.radio, num_users, scen_seed);
            for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
                const Method m = spec.methods[mi];
                SweepRow& row =
                    rows[point * per_point + trial * spec.methods.size() + mi];
                row.kind = sweep_kind_name(spec.kind);
                row.sweep_value = value;
                row.trial = trial;
                row.method = method_name(m);
                row.seed = solver_seed;
                if (m == Method::Es && cfg.radio.num_channels > kEsMaxChannels) {
                    row.status = "skip";
                    continue;
                }
                const SolveResult res = run_pipeline(scenario, m, cfg, solver_seed);
                row.total_rate = res.total_rate;
                row.wall_clock_s = res.wall_clock_s;
                row.feasible = res.feasible;
                row.repaired = res.repaired;
                row.status = "ok";
            }
        });
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "kind,sweep_value,trial,method,seed,total_rate,wall_clock_s,feasible,repaired,status\n";
    for (const auto& r : rows) {
        out << r.kind << "," << fp17(r.sweep_value) << "," << r.trial << "," << r.method << ","
            << r.seed << "," << fp17(r.total_rate) << "," << fp17(r.wall_clock_s) << ","
            << (r.feasible ? 1 : 0) << "," << (r.repaired ? 1 : 0) << "," << r.status << "\n";
    }
    return out.str();
}

std::vector<SweepRow> sweep_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line != "kind,sweep_value,trial,method,seed,total_rate,wall_clock_s,feasible,repaired,status")
        throw ParseError("bad sweep CSV header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (f.size() != 10) throw ParseError("bad sweep CSV row: " + line);
        SweepRow r;
        r.kind = f[0];
        r.sweep_value = parse_double(f[1]);
        r.trial = static_cast<int>(parse_int(f[2]));
        r.method = f[3];
        r.seed = static_cast<std::uint64_t>(std::stoull(f[4]));
        r.total_rate = parse_double(f[5]);
        r.wall_clock_s = parse_double(f[6]);
        r.feasible = parse_int(f[7]) != 0;
        r.repaired = parse_int(f[8]) != 0;
        r.status = f[9];
        rows.push_back(std::move(r));
    }
    return rows;
}

int sa_sweeps_for_users(int num_users) {
    switch (num_users) {
        case 6: return 10;
        case 8: return 50;
        case 10: return 100;
        case 12: return 500;
        case 14: return 1000;
        case 16: return 5000;
        case 18: return 10000;
    }
    throw std::invalid_argument("no annealing schedule for this user count");
}

std::vector<TimingRow> timing_bench(const std::vector<int>& user_counts,
                                    const std::vector<Method>& methods, int trials,
                                    const PipelineConfig& base, std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("trials < 1");
    std::vector<TimingRow> rows;
    for (int nu : user_counts) {
        PipelineConfig cfg = base;
        cfg.radio.num_channels = (nu + 1) / 2;
        cfg.sa.num_sweeps = sa_sweeps_for_users(nu);
        for (int trial = 0; trial < trials; ++trial) {
            const std::uint64_t scen_seed = derive_seed(master_seed, nu, trial, 1);
            const std::uint64_t solver_seed = derive_seed(master_seed, nu, trial, 2);
            const Scenario scenario = generate_scenario(cfg.radio, nu, scen_seed);
            for (Method m : methods) {
                TimingRow row;
                row.num_users = nu;
                row.trial = trial;
                row.method = method_name(m);
                switch (m) {
                    case Method::Cim: row.work_metric = "cycles"; break;
                    case Method::Sa:
                    case Method::Hopfield: row.work_metric = "sweeps"; break;
                    case Method::Es: row.work_metric = "states"; break;
                    default: row.work_metric = "solves"; break;
                }
                if (m == Method::Es && nu > kEsMaxUsers) {
                    row.status = "skip";
                    rows.push_back(std::move(row));
                    continue;
                }
                const SolveResult res = run_pipeline(scenario, m, cfg, solver_seed);
                row.work = res.work;
                row.wall_clock_s = res.wall_clock_s;
                row.total_rate = res.total_rate;
                row.status = "ok";
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string timing_to_csv(const std::vector<TimingRow>& rows) {
    std::ostringstream out;
    out << "num_users,trial,method,work_metric,work_count,wall_clock_s,total_rate,status\n";
    for (const auto& r : rows) {
        out << r.num_users << "," << r.trial << "," << r.method << "," << r.work_metric << ","
            << r.work << "," << fp17(r.wall_clock_s) << "," << fp17(r.total_rate) << ","
            << r.status << "\n";
    }
    return out.str();
}

}  // namespace cimra
