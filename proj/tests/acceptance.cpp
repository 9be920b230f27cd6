// Acceptance gate: one line per criterion, exit code = number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "cimra/pipeline.hpp"

using namespace cimra;

namespace {

using Clock = std::chrono::steady_clock;

double secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

constexpr double kValueRel = 1e-9;       // oracle-equivalence and QoS tolerance
constexpr double kOffsetRel = 1e-9;      // spin-form offset constancy
constexpr double kAttainRel = 1e-6;      // "equals the optimum" band
constexpr int kAttainInstances = 50;
constexpr int kAttainMinHits = 45;       // 90%
constexpr double kAttainMinMean = 0.99;
constexpr std::uint64_t kMinDescentUpdates = 1000000;
// Mean-trend comparisons tolerate counter-movement inside the solver's
// measured per-point attainment wobble (~0.1% relative); real inversions
// observed so far are 0.4% and larger. Strict monotonicity checks keep
// zero slack.
constexpr double kTrendRelSlack = 1e-3;

struct Instance {
    RadioConfig radio;
    Scenario scenario;
    CnrMatrix cnr;
    RateTable table;
};

Instance make_instance(int num_channels, int num_users, std::uint64_t seed) {
    Instance ins;
    ins.radio.num_channels = num_channels;
    ins.scenario = generate_scenario(ins.radio, num_users, seed);
    ins.cnr = compute_cnr(ins.scenario);
    ins.table = build_rate_table(ins.cnr, 1.0, ins.radio);
    return ins;
}

// Full scan over {0,1}^n in Gray-code order with incremental energy and
// field updates; returns the minimum-energy configuration.
std::vector<std::uint8_t> ground_state(const NetworkWeights& nw) {
    const int n = nw.num_entities * nw.num_channels;
    std::vector<std::uint8_t> x(n, 0);
    std::vector<std::uint8_t> best(x);
    std::vector<double> field(n, 0.0);
    double e = 0.0;
    double best_e = 0.0;
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int a = __builtin_ctzll(k);
        const double dv = x[a] ? -1.0 : 1.0;
        e += dv * (nw.theta[a] - field[a]);
        x[a] ^= 1;
        for (int b = 0; b < n; ++b) field[b] += dv * nw.w.at(a, b);
        if (e < best_e) {
            best_e = e;
            best = x;
        }
    }
    return best;
}

Outcome criterion1_ground_state_decodes_to_optimum() {
    int matched = 0;
    int total = 0;
    for (int nc : {2, 3}) {
        for (int i = 0; i < 50; ++i, ++total) {
            const Instance ins = make_instance(nc, 2 * nc, derive_seed(1000 + nc, i));
            const NetworkWeights nw =
                derive_weights(build_energy_terms(ins.table), default_scaling(ins.table));
            const std::vector<std::uint8_t> x = ground_state(nw);
            const DecodeResult dec = decode_binary(x, nw.num_entities, nw.num_channels, ins.table);
            const EsResult es = es_solve(ins.table);
            const double got = total_rate(dec.assignment, ins.table);
            if (got >= es.best_value * (1.0 - kValueRel)) ++matched;
        }
    }
    Outcome out;
    out.ok = matched == total;
    out.detail = "ground state matched the exhaustive optimum on " + std::to_string(matched) +
                 "/" + std::to_string(total) + " instances";
    return out;
}

Outcome criterion2_spin_form_offset_constant() {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Instance ins = make_instance(6, 12, derive_seed(1100, i));
        const NetworkWeights nw =
            derive_weights(build_energy_terms(ins.table), default_scaling(ins.table));
        const IsingProblem prob = to_ising(nw);
        const int n = nw.num_entities * nw.num_channels;
        Rng rng(derive_seed(1101, i));
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int k = 0; k < 1000; ++k) {
            std::vector<std::uint8_t> x(n);
            std::vector<double> sigma(n);
            for (int a = 0; a < n; ++a) {
                x[a] = rng.uniform01() < 0.5 ? 1 : 0;
                sigma[a] = x[a] ? 1.0 : -1.0;
            }
            const double off = ising_energy(prob, sigma) - 2.0 * nn_energy(nw, x);
            lo = std::min(lo, off);
            hi = std::max(hi, off);
        }
        worst = std::max(worst, (hi - lo) / std::max(1.0, std::abs(lo)));
    }
    Outcome out;
    out.ok = worst <= kOffsetRel;
    char buf[96];
    std::snprintf(buf, sizeof buf, "offset spread %.3e relative over 20 instances x 1000 states",
                  worst);
    out.detail = buf;
    return out;
}

Outcome criterion3_qos_floors_and_budget_exact() {
    double worst_rate = 0.0;
    double worst_power = 0.0;
    int pairs = 0;
    for (int i = 0; i < 100; ++i) {
        const Instance ins = make_instance(6, 12, derive_seed(1200, i));
        const Assignment a = random_solve(6, 12, derive_seed(1201, i));
        const FinalAllocation fa = allocate_and_rate(a, ins.cnr, ins.radio);
        const double floor = ins.radio.rate_floor_bps();
        for (int j = 0; j < 6; ++j) {
            const std::vector<int> occ = a.occupants(j);
            if (occ.size() != 2) continue;
            const int u = occ[0];
            const int v = occ[1];
            if (u >= 12 || v >= 12) continue;
            const int weak = cnr_stronger(ins.cnr.gamma.at(u, j), u, ins.cnr.gamma.at(v, j), v)
                                 ? v
                                 : u;
            worst_rate = std::max(worst_rate,
                                  std::abs(fa.entity_rates[weak] - floor) / floor);
            ++pairs;
        }
        double used = 0.0;
        for (double q : fa.water.q) used += q;
        worst_power = std::max(
            worst_power, std::abs(used - ins.radio.total_power_w) / ins.radio.total_power_w);
    }
    Outcome out;
    out.ok = pairs > 0 && worst_rate <= kValueRel && worst_power <= kValueRel;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "%d paired weak rates at the floor (worst %.2e rel), budgets exact (worst %.2e)",
                  pairs, worst_rate, worst_power);
    out.detail = buf;
    return out;
}

Outcome criterion4_descent_never_increases_energy() {
    std::uint64_t updates = 0;
    std::uint64_t increases = 0;
    for (int i = 0; i < 50; ++i) {
        const Instance ins = make_instance(6, 12, derive_seed(1300, i));
        const NetworkWeights nw =
            derive_weights(build_energy_terms(ins.table), default_scaling(ins.table));
        std::uint64_t here = 0;
        for (std::uint64_t restart = 0; here < 20000; ++restart) {
            double prev = std::numeric_limits<double>::infinity();
            hopfield_solve(nw, ins.table, derive_seed(1301, i, restart),
                           [&](int, bool, double e) {
                               if (e > prev + 1e-9) ++increases;
                               prev = e;
                               ++here;
                           });
        }
        updates += here;
    }
    Outcome out;
    out.ok = updates >= kMinDescentUpdates && increases == 0;
    out.detail = std::to_string(increases) + " energy increases across " +
                 std::to_string(updates) + " update attempts on 50 instances";
    return out;
}

Outcome criterion5_oscillator_attains_optimum() {
    int hits = 0;
    double sum_ratio = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kAttainInstances; ++i) {
        const Instance ins = make_instance(6, 12, derive_seed(42, i));
        const EsResult es = es_solve(ins.table);
        const double oracle = allocate_and_rate(es.assignment, ins.cnr, ins.radio).total;
        const NetworkWeights nw =
            derive_weights(build_energy_terms(ins.table), default_scaling(ins.table));
        const IsingProblem prob = to_ising(nw);
        CimConfig cc;
        cc.seed = derive_seed(43, i);
        const CimResult res = simulate(prob, cc);
        const DecodeResult dec = decode_spins(res.sigma, prob, ins.table);
        const double got = allocate_and_rate(dec.assignment, ins.cnr, ins.radio).total;
        const double ratio = got / oracle;
        sum_ratio += ratio;
        min_ratio = std::min(min_ratio, ratio);
        if (got >= oracle * (1.0 - kAttainRel)) ++hits;
    }
    const double mean = sum_ratio / kAttainInstances;
    Outcome out;
    out.ok = hits >= kAttainMinHits && mean >= kAttainMinMean;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "exact attainment %d/%d (need >= %d), mean ratio %.4f (need >= %.2f), min %.4f",
                  hits, kAttainInstances, kAttainMinHits, mean, kAttainMinMean, min_ratio);
    out.detail = buf;
    return out;
}

std::map<std::pair<double, std::string>, double> point_means(const std::vector<SweepRow>& rows) {
    std::map<std::pair<double, std::string>, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        if (r.status != "ok") continue;
        auto& slot = acc[{r.sweep_value, r.method}];
        slot.first += r.total_rate;
        slot.second += 1;
    }
    std::map<std::pair<double, std::string>, double> means;
    for (const auto& [key, sc] : acc) means[key] = sc.first / sc.second;
    return means;
}

Outcome criterion6_benchmark_trends() {
    std::string bad;

    {
        SweepSpec spec;
        spec.kind = SweepKind::Users;
        spec.values = {12, 14, 16, 18, 20};
        spec.trials = 50;
        spec.methods = {Method::Cim, Method::Sa, Method::Cnoma, Method::Es, Method::Random};
        spec.master_seed = 6001;
        const auto means = point_means(run_sweep(spec, PipelineConfig{}));
        for (double v : spec.values) {
            const double cim = means.at({v, "cim"});
            const double sa = means.at({v, "sa"});
            const double cnoma = means.at({v, "cnoma"});
            const double rnd = means.at({v, "random"});
            const double s = 1.0 - kTrendRelSlack;
            if (!(cim >= sa * s && sa >= cnoma * s && cnoma >= rnd * s)) {
                char buf[96];
                std::snprintf(buf, sizeof buf,
                              " [users=%g ordering %.4e/%.4e/%.4e/%.4e]", v, cim, sa, cnoma, rnd);
                bad += buf;
            }
        }
    }

    {
        // one user per channel via dummy pairing, against paired operation
        double noma = 0.0;
        double oma = 0.0;
        for (int t = 0; t < 50; ++t) {
            PipelineConfig cfg;
            cfg.radio.num_channels = 6;
            const Scenario s6 = generate_scenario(cfg.radio, 12, derive_seed(6002, t));
            noma += run_pipeline(s6, Method::Cim, cfg, derive_seed(6003, t)).total_rate;

            RadioConfig r12;
            r12.num_channels = 12;
            const Scenario s12 = generate_scenario(r12, 12, derive_seed(6004, t));
            Assignment alone(24, 12, 12);
            for (int i = 0; i < 12; ++i) {
                alone.cell(i, i) = 1;
                alone.cell(12 + i, i) = 1;
            }
            oma += allocate_and_rate(alone, compute_cnr(s12), r12).total;
        }
        if (!(noma / 50.0 > oma / 50.0)) {
            char buf[80];
            std::snprintf(buf, sizeof buf, " [paired %.4e <= unpaired %.4e]", noma / 50.0,
                          oma / 50.0);
            bad += buf;
        }
    }

    {
        SweepSpec spec;
        spec.kind = SweepKind::Power;
        spec.values = {6, 9, 12, 15, 18};
        spec.trials = 50;
        spec.num_users = 12;
        spec.methods = {Method::Cim};
        spec.master_seed = 6005;
        PipelineConfig base;
        base.radio.num_channels = 6;
        const auto means = point_means(run_sweep(spec, base));
        for (std::size_t k = 1; k < spec.values.size(); ++k) {
            if (!(means.at({spec.values[k], "cim"}) > means.at({spec.values[k - 1], "cim"}))) {
                bad += " [power " + std::to_string(spec.values[k]) + " not increasing]";
            }
        }
    }

    {
        SweepSpec spec;
        spec.kind = SweepKind::Channels;
        spec.values = {6, 7, 8, 9, 10};
        spec.trials = 50;
        spec.num_users = 12;
        spec.methods = {Method::Cim};
        spec.master_seed = 6006;
        const auto means = point_means(run_sweep(spec, PipelineConfig{}));
        for (std::size_t k = 1; k < spec.values.size(); ++k) {
            if (!(means.at({spec.values[k], "cim"}) <=
                  means.at({spec.values[k - 1], "cim"}) * (1.0 + kTrendRelSlack))) {
                bad += " [channels " + std::to_string(spec.values[k]) + " not non-increasing]";
            }
        }
    }

    {
        SweepSpec spec;
        spec.kind = SweepKind::UsersFixedChannels;
        spec.values = {5, 6, 7, 8, 9, 10};
        spec.trials = 50;
        spec.fixed_channels = 5;
        spec.methods = {Method::Cim};
        spec.master_seed = 6007;
        const auto means = point_means(run_sweep(spec, PipelineConfig{}));
        for (std::size_t k = 1; k < spec.values.size(); ++k) {
            if (!(means.at({spec.values[k], "cim"}) >=
                  means.at({spec.values[k - 1], "cim"}) * (1.0 - kTrendRelSlack))) {
                bad += " [users@5ch " + std::to_string(spec.values[k]) + " not non-decreasing]";
            }
        }
    }

    Outcome out;
    out.ok = bad.empty();
    out.detail = out.ok
                     ? "method ordering, pairing gain, power, channel, and load trends all hold"
                     : "violations:" + bad;
    return out;
}

Outcome criterion7_constant_cycle_scaling() {
    const auto rows = timing_bench({6, 8, 10, 12, 14, 16, 18},
                                   {Method::Cim, Method::Sa, Method::Es}, 1, PipelineConfig{}, 7001);
    std::string bad;
    for (const auto& r : rows) {
        if (r.method == "cim") {
            if (r.status != "ok" || r.work != 1000)
                bad += " [cim@" + std::to_string(r.num_users) + " work " +
                       std::to_string(r.work) + "]";
        } else if (r.method == "sa") {
            if (r.status != "ok" ||
                r.work != static_cast<std::uint64_t>(sa_sweeps_for_users(r.num_users)))
                bad += " [sa@" + std::to_string(r.num_users) + " work " +
                       std::to_string(r.work) + "]";
        } else if (r.method == "es") {
            if (r.num_users > kEsMaxUsers) {
                if (r.status != "skip") bad += " [es@" + std::to_string(r.num_users) + " ran]";
            } else if (r.status != "ok" || r.work != es_state_count((r.num_users + 1) / 2)) {
                bad += " [es@" + std::to_string(r.num_users) + " states " +
                       std::to_string(r.work) + "]";
            }
            if (r.num_users == 12 && r.work != 7484400)
                bad += " [es@12 states " + std::to_string(r.work) + "]";
        }
    }
    Outcome out;
    out.ok = bad.empty();
    out.detail =
        out.ok ? "1000 oscillator cycles at every size; annealing and enumeration grow on schedule"
               : "violations:" + bad;
    return out;
}

Outcome criterion8_staleness_costs_rate() {
    MobilityConfig mob;
    RadioConfig radio;
    radio.num_channels = 6;
    PipelineConfig cfg;
    cfg.radio = radio;

    std::vector<SolverArm> arms;
    arms.push_back({"cim-5ms", 0.005, method_arm(Method::Cim, cfg)});
    arms.push_back({"cim-40ms", 0.040, method_arm(Method::Cim, cfg)});
    const auto oracle = method_arm(Method::Es, cfg);

    double sum_fresh = 0.0;
    double sum_stale = 0.0;
    std::uint64_t n_fresh = 0;
    std::uint64_t n_stale = 0;
    for (int k = 0; k < 10; ++k) {
        const auto rows = dynamic_eval(mob, radio, 12, 200, arms, oracle, derive_seed(8001, k));
        for (const auto& r : rows) {
            if (r.solver == "cim-5ms") {
                sum_fresh += r.ratio;
                ++n_fresh;
            } else {
                sum_stale += r.ratio;
                ++n_stale;
            }
        }
    }
    const double fresh = sum_fresh / n_fresh;
    const double stale = sum_stale / n_stale;
    Outcome out;
    out.ok = fresh >= stale && fresh - stale > 0.0;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "mean ratio %.4f at 5 ms vs %.4f at 40 ms over %llu + %llu intervals", fresh,
                  stale, static_cast<unsigned long long>(n_fresh),
                  static_cast<unsigned long long>(n_stale));
    out.detail = buf;
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int index;
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, "encoding ground state equals exhaustive optimum", criterion1_ground_state_decodes_to_optimum},
        {2, "spin/binary energy forms differ by a constant", criterion2_spin_form_offset_constant},
        {3, "weak-user rates pinned to the QoS floor, budget exact", criterion3_qos_floors_and_budget_exact},
        {4, "threshold descent is energy-monotone", criterion4_descent_never_increases_energy},
        {5, "oscillator run attains the optimum", criterion5_oscillator_attains_optimum},
        {6, "benchmark curve ordering and sweep trends", criterion6_benchmark_trends},
        {7, "constant oscillator work across problem sizes", criterion7_constant_cycle_scaling},
        {8, "stale control decisions lose rate", criterion8_staleness_costs_rate},
    };

    int failed = 0;
    for (const Entry& e : entries) {
        const auto t0 = Clock::now();
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out.ok = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        if (!out.ok) ++failed;
        std::printf("[%s] criterion %d: %s - %s (%.1f s)\n", out.ok ? "PASS" : "FAIL", e.index,
                    e.name, out.detail.c_str(), secs(t0));
        std::fflush(stdout);
    }
    std::printf("%d/8 criteria passed\n", 8 - failed);
    return failed;
}
