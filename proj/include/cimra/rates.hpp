#pragma once

#include <vector>

#include "cimra/power.hpp"
#include "cimra/radio.hpp"

namespace cimra {

// Rate of a user alone on a channel carrying power q.
double single_rate(double gamma, double q, double channel_bandwidth);

struct PairRates {
    double strong = 0.0;
    double weak = 0.0;
};

// Two multiplexed users under the closed-form split. The strong user decodes
// after cancelling the weak user's signal; the weak user treats the strong
// user's (smaller) share as noise, which lands it exactly on the rate floor.
PairRates pair_rates(double gamma_strong, double gamma_weak, double q, double channel_bandwidth,
                     double a);

// rate(i, j, k): rate of entity i on channel j when sharing it with entity k,
// for the fixed per-channel powers the table was built with. Dummy entities
// have zero rate everywhere; a real entity paired with a dummy runs alone on
// the channel. Pairs whose floor exceeds the channel power are flagged and
// zeroed.
struct RateTable {
    int num_entities = 0;
    int num_channels = 0;
    int num_real_users = 0;
    double channel_bandwidth = 0.0;
    double qos_factor = 0.0;
    std::vector<double> channel_power;
    std::vector<double> rates;          // num_entities * num_channels * num_entities
    std::vector<std::uint8_t> infeasible;  // same shape
    std::vector<double> single_rates_;  // per real entity per channel, repair scoring

    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * num_channels + j) * num_entities + k;
    }
    double rate(int i, int j, int k) const { return rates[idx(i, j, k)]; }
    bool flagged(int i, int j, int k) const { return infeasible[idx(i, j, k)] != 0; }
    bool is_dummy(int i) const { return i >= num_real_users; }

    // Ordered-pair rate sum for entities a,b sharing channel j.
    double pair_sum(int a, int j, int b) const { return rate(a, j, b) + rate(b, j, a); }

    // Rate of entity a alone on channel j (zero for dummies).
    double alone(int a, int j) const;
};

// Table over all 2*num_channels entities at the given per-channel powers.
RateTable build_rate_table(const CnrMatrix& cnr, const std::vector<double>& channel_power,
                           const RadioConfig& config);

inline RateTable build_rate_table(const CnrMatrix& cnr, double uniform_power,
                                  const RadioConfig& config) {
    return build_rate_table(cnr, std::vector<double>(config.num_channels, uniform_power), config);
}

// Sum over channels of both occupants' rates. Validates the assignment.
double total_rate(const Assignment& a, const RateTable& table);

// Water-fill the channels under a fixed assignment, then price every user at
// the resulting per-channel powers.
struct FinalAllocation {
    WaterFillingResult water;
    std::vector<double> entity_rates;  // per entity, dummies zero
    double total = 0.0;
};

FinalAllocation allocate_and_rate(const Assignment& a, const CnrMatrix& cnr,
                                  const RadioConfig& config);

}  // namespace cimra
