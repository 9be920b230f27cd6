#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cimra/pipeline.hpp"
#include "doctest.h"

using namespace cimra;

namespace {

Scenario make_scenario(int num_channels, int num_users, std::uint64_t seed,
                       PipelineConfig* out_cfg = nullptr) {
    PipelineConfig cfg;
    cfg.radio.num_channels = num_channels;
    if (out_cfg) *out_cfg = cfg;
    return generate_scenario(cfg.radio, num_users, seed);
}

}  // namespace

TEST_CASE("method names round-trip and parse as comma lists") {
    for (Method m : {Method::Cim, Method::Hopfield, Method::Sa, Method::Cnoma, Method::Es,
                     Method::Random})
        CHECK(method_from_name(method_name(m)) == m);
    CHECK_THROWS_AS(method_from_name("tabu"), ParseError);
    const auto ms = parse_methods("cim,sa,es");
    REQUIRE(ms.size() == 3);
    CHECK(ms[0] == Method::Cim);
    CHECK(ms[2] == Method::Es);
    CHECK_THROWS_AS(parse_methods(""), ParseError);
    CHECK_THROWS_AS(parse_methods("cim,,bogus"), ParseError);
}

TEST_CASE("config text overrides the base and rejects junk") {
    PipelineConfig base;
    const std::string text =
        "# tuned run\n"
        "num_channels = 4\n"
        "cim_dt=0.01   # smaller step\n"
        "\n"
        "sa_num_sweeps=123\n"
        "total_power_w = 9.5\n";
    PipelineConfig cfg = config_from_text(text, base);
    CHECK(cfg.radio.num_channels == 4);
    CHECK(cfg.cim.dt == 0.01);
    CHECK(cfg.sa.num_sweeps == 123);
    CHECK(cfg.radio.total_power_w == 9.5);
    // untouched keys keep the base values
    CHECK(cfg.cim.num_cycles == base.cim.num_cycles);
    CHECK(cfg.cim.pump_max == base.cim.pump_max);

    CHECK_THROWS_AS(config_from_text("no_such_key=1\n", base), ParseError);
    CHECK_THROWS_AS(config_from_text("cim_dt=fast\n", base), ParseError);
    CHECK_THROWS_AS(config_from_text("just a line\n", base), ParseError);
    CHECK_THROWS_AS(config_from_file("/nonexistent/cfg.txt", base), ParseError);
}

TEST_CASE("every method produces a feasible priced allocation") {
    PipelineConfig cfg;
    const Scenario s = make_scenario(4, 8, 900, &cfg);
    const double floor = cfg.radio.rate_floor_bps();
    for (Method m : {Method::Cim, Method::Hopfield, Method::Sa, Method::Cnoma, Method::Es,
                     Method::Random}) {
        const SolveResult r = run_pipeline(s, m, cfg, 17);
        CHECK(r.feasible);
        CHECK(r.method == m);
        REQUIRE(r.user_rates.size() == 8);
        double sum = 0.0;
        for (double v : r.user_rates) {
            CHECK(v >= floor * (1.0 - 1e-9));
            sum += v;
        }
        CHECK(r.total_rate == doctest::Approx(sum).epsilon(1e-12));
        switch (m) {
            case Method::Cim: CHECK(r.work == 1000); break;
            case Method::Sa: CHECK(r.work == static_cast<std::uint64_t>(cfg.sa.num_sweeps)); break;
            case Method::Es: CHECK(r.work == 2520); break;
            case Method::Cnoma:
            case Method::Random: CHECK(r.work == 1); break;
            case Method::Hopfield: CHECK(r.work >= 1); break;
        }
        CHECK_FALSE(r.has_trace);
    }
}

TEST_CASE("exhaustive search is the ceiling for the final totals") {
    for (std::uint64_t seed : {910, 911, 912}) {
        PipelineConfig cfg;
        const Scenario s = make_scenario(4, 8, seed, &cfg);
        const double best = run_pipeline(s, Method::Es, cfg, 1).total_rate;
        for (Method m : {Method::Cim, Method::Hopfield, Method::Sa, Method::Cnoma,
                         Method::Random}) {
            const SolveResult r = run_pipeline(s, m, cfg, seed);
            CHECK(r.total_rate <= best * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("pipeline runs are seed-deterministic and traces are opt-in") {
    PipelineConfig cfg;
    const Scenario s = make_scenario(4, 8, 920, &cfg);
    const SolveResult a = run_pipeline(s, Method::Cim, cfg, 5);
    const SolveResult b = run_pipeline(s, Method::Cim, cfg, 5);
    CHECK(a.assignment.grid == b.assignment.grid);
    CHECK(a.total_rate == b.total_rate);
    const SolveResult c = run_pipeline(s, Method::Cim, cfg, 6);
    CHECK(a.seed != c.seed);

    const SolveResult t = run_pipeline(s, Method::Cim, cfg, 5, true);
    CHECK(t.has_trace);
    CHECK(t.trace.energy.size() == static_cast<std::size_t>(cfg.cim.num_cycles) + 1);
    CHECK(t.assignment.grid == a.assignment.grid);
}

TEST_CASE("solver arms close over snapshots like the direct solvers") {
    PipelineConfig cfg;
    const Scenario s = make_scenario(3, 6, 930, &cfg);
    const CnrMatrix cnr = compute_cnr(s);
    const RateTable table = build_rate_table(cnr, 1.0, cfg.radio);

    Assignment es_direct = es_solve(table).assignment;
    Assignment es_arm = method_arm(Method::Es, cfg)(cnr, table, 0);
    CHECK(es_arm.grid == es_direct.grid);

    Assignment rnd_arm = method_arm(Method::Random, cfg)(cnr, table, 44);
    CHECK(rnd_arm.grid == random_solve(3, 6, 44).grid);

    auto cim_arm = method_arm(Method::Cim, cfg);
    CHECK(cim_arm(cnr, table, 9).grid == cim_arm(cnr, table, 9).grid);
    CHECK(is_feasible(method_arm(Method::Cnoma, cfg)(cnr, table, 0)));
}

TEST_CASE("sweeps emit one row per point, trial, and method") {
    PipelineConfig base;
    SweepSpec spec;
    spec.kind = SweepKind::Users;
    spec.values = {6.0, 16.0};
    spec.trials = 2;
    spec.methods = {Method::Cnoma, Method::Random, Method::Es};
    spec.master_seed = 31;
    const auto rows = run_sweep(spec, base);
    REQUIRE(rows.size() == 2 * 2 * 3);

    for (const auto& r : rows) {
        CHECK(r.kind == "users");
        if (r.method == "es" && r.sweep_value == 16.0) {
            // 16 users need 8 channels, past the enumeration bound
            CHECK(r.status == "skip");
            CHECK(r.total_rate == 0.0);
        } else {
            CHECK(r.status == "ok");
            CHECK(r.feasible);
            CHECK(r.total_rate > 0.0);
        }
    }

    // seeds depend only on (master_seed, point, trial), never on timing
    const auto again = run_sweep(spec, base);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].seed == again[i].seed);
        CHECK(rows[i].total_rate == again[i].total_rate);
        CHECK(rows[i].status == again[i].status);
    }

    SweepSpec bad = spec;
    bad.values.clear();
    CHECK_THROWS_AS(run_sweep(bad, base), std::invalid_argument);
    bad = spec;
    bad.methods.clear();
    CHECK_THROWS_AS(run_sweep(bad, base), std::invalid_argument);
    bad = spec;
    bad.trials = 0;
    CHECK_THROWS_AS(run_sweep(bad, base), std::invalid_argument);
}

TEST_CASE("sweep CSV round-trips exactly and rejects foreign headers") {
    PipelineConfig base;
    SweepSpec spec;
    spec.kind = SweepKind::Power;
    spec.values = {6.0, 12.0};
    spec.trials = 2;
    spec.num_users = 6;
    spec.methods = {Method::Cnoma, Method::Random};
    base.radio.num_channels = 3;
    const auto rows = run_sweep(spec, base);
    const std::string csv = sweep_to_csv(rows);
    CHECK(sweep_to_csv(sweep_from_csv(csv)) == csv);
    CHECK(csv.rfind("kind,sweep_value,trial,method,seed,", 0) == 0);

    CHECK_THROWS_AS(sweep_from_csv("bogus,header\n1,2\n"), ParseError);
    const std::string header =
        "kind,sweep_value,trial,method,seed,total_rate,wall_clock_s,feasible,repaired,status\n";
    CHECK_THROWS_AS(sweep_from_csv(header + "power,6,0,cnoma,1,2,3\n"), ParseError);
    CHECK(sweep_from_csv(header).empty());
}

TEST_CASE("annealing schedule covers exactly the benchmark ladder") {
    CHECK(sa_sweeps_for_users(6) == 10);
    CHECK(sa_sweeps_for_users(8) == 50);
    CHECK(sa_sweeps_for_users(10) == 100);
    CHECK(sa_sweeps_for_users(12) == 500);
    CHECK(sa_sweeps_for_users(14) == 1000);
    CHECK(sa_sweeps_for_users(16) == 5000);
    CHECK(sa_sweeps_for_users(18) == 10000);
    CHECK_THROWS_AS(sa_sweeps_for_users(7), std::invalid_argument);
    CHECK_THROWS_AS(sa_sweeps_for_users(20), std::invalid_argument);
}

TEST_CASE("timing rows carry the per-method work accounting") {
    PipelineConfig base;
    const auto rows = timing_bench({6, 16}, {Method::Cim, Method::Sa, Method::Es}, 1, base, 8);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        if (r.method == "cim") {
            CHECK(r.work_metric == "cycles");
            CHECK(r.work == 1000);
            CHECK(r.status == "ok");
        } else if (r.method == "sa") {
            CHECK(r.work_metric == "sweeps");
            CHECK(r.work == static_cast<std::uint64_t>(sa_sweeps_for_users(r.num_users)));
        } else {
            CHECK(r.work_metric == "states");
            if (r.num_users == 6) {
                CHECK(r.work == 90);
                CHECK(r.status == "ok");
            } else {
                CHECK(r.status == "skip");
            }
        }
    }
    const std::string csv = timing_to_csv(rows);
    CHECK(csv.rfind("num_users,trial,method,work_metric,work_count,wall_clock_s,total_rate,status\n",
                    0) == 0);
}
