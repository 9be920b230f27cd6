#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cimra/rates.hpp"

namespace cimra {

// Rectangular street grid on a torus. Roads are the centerlines at integer
// multiples of the grid spacing; both area dimensions must be integer
// multiples of the corresponding spacing so wrap-around lands on a road.
struct MobilityConfig {
    double area_x_m = 1299.0;
    double area_y_m = 750.0;
    double grid_x_m = 433.0;
    double grid_y_m = 250.0;
    double speed_min_kmh = 36.0;
    double speed_max_kmh = 54.0;
    double decision_interval_s = 0.020;

    int roads_x() const { return static_cast<int>(area_x_m / grid_x_m + 0.5); }
    int roads_y() const { return static_cast<int>(area_y_m / grid_y_m + 0.5); }

    void validate() const;
};

enum class Heading : std::uint8_t { PlusX, MinusX, PlusY, MinusY };

struct MobileUser {
    double x = 0.0;
    double y = 0.0;
    Heading heading = Heading::PlusX;
    double speed_mps = 0.0;
};

// Users dropped uniformly along the total road length, facing one of the two
// road directions, with a constant speed uniform in the configured range.
// Draw order per user: position, direction, speed.
std::vector<MobileUser> init_mobility(const MobilityConfig& cfg, int num_users, Rng& rng);

// Advances every user by dt at its constant speed. A user reaching an
// intersection picks straight, left, or right uniformly (no U-turn) and
// keeps going with the leftover distance; positions wrap on the torus.
void step_users(const MobilityConfig& cfg, std::vector<MobileUser>& users, double dt, Rng& rng);

bool at_intersection(const MobilityConfig& cfg, const MobileUser& u);

// One channel-allocation arm evaluated under motion-induced staleness.
struct SolverArm {
    std::string name;
    double latency_s = 0.0;
    // (stale CNR, stale rate table, per-interval seed) -> assignment
    std::function<Assignment(const CnrMatrix&, const RateTable&, std::uint64_t)> solve;
};

struct IntervalRow {
    int interval = 0;
    std::string solver;
    double latency_s = 0.0;
    double achieved_rate = 0.0;
    double oracle_rate = 0.0;
    double ratio = 0.0;
};

// Rolls the mobility model forward one decision interval at a time with
// fading redrawn each interval, hands every arm the snapshot from
// floor(latency / interval) intervals back, and scores the returned
// assignment against the current snapshot with fresh water-filling. The
// oracle arm always sees the current snapshot; ratio = achieved / oracle.
// Intervals earlier than an arm's staleness are skipped for that arm.
std::vector<IntervalRow> dynamic_eval(
    const MobilityConfig& cfg, const RadioConfig& radio, int num_users, int num_intervals,
    const std::vector<SolverArm>& arms,
    const std::function<Assignment(const CnrMatrix&, const RateTable&, std::uint64_t)>& oracle,
    std::uint64_t seed);

std::string intervals_to_csv(const std::vector<IntervalRow>& rows);

}  // namespace cimra
