#pragma once

#include <cstdint>
#include <vector>

#include "cimra/common.hpp"

namespace cimra {

// Fractions of the channel power budget q handed to the two multiplexed
// users. The split pins the weak user exactly at its rate floor, which is
// where the channel sum rate is maximized once both floors are met.
struct PowerSplit {
    double strong = 0.0;
    double weak = 0.0;
};

// Closed form: strong = (gamma_weak * q - a_weak + 1) / (a_weak * gamma_weak),
// weak = q - strong. Requires q >= the pair floor, else the weak user cannot
// reach its minimum rate and QosInfeasibleError is thrown.
PowerSplit pair_power_split(double gamma_strong, double gamma_weak, double q, double a_strong,
                            double a_weak);

// Smallest channel power under which both users of a pair make their floors.
double pair_qos_floor(double gamma_strong, double gamma_weak, double a_strong, double a_weak);

// Same for a user alone on a channel.
double single_qos_floor(double gamma, double a);

// What one channel carries, as seen by the power allocator.
struct ChannelLoad {
    enum class Kind { Empty, Single, Pair } kind = Kind::Empty;
    double gamma_strong = 0.0;  // Single: the lone user's CNR
    double gamma_weak = 0.0;

    static ChannelLoad empty() { return {}; }
    static ChannelLoad single(double gamma) { return {Kind::Single, gamma, 0.0}; }
    static ChannelLoad pair(double gs, double gw) { return {Kind::Pair, gs, gw}; }
};

struct WaterFillingResult {
    std::vector<double> q;       // per-channel power, zero on empty channels
    std::vector<double> floors;  // per-channel QoS floor, zero on empty channels
    double lambda = 0.0;         // water level multiplier at convergence
    int iterations = 0;
};

// Distributes total_power over the loaded channels by bisection on the
// multiplier. Each non-empty channel gets
//   pair:   q_j = max(bc/lambda - a/gs + a/gw - 1/gw, floor_j)
//   single: q_j = max(bc/lambda - 1/g, floor_j)
// and the budget matches total_power to 1e-9 relative. Throws
// QosInfeasibleError when the floors alone exceed the budget.
WaterFillingResult water_fill(const std::vector<ChannelLoad>& loads, double total_power,
                              double channel_bandwidth, double a);

}  // namespace cimra
