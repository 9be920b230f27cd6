#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cimra/ising.hpp"

namespace cimra {

struct SaConfig {
    int num_sweeps = 10000;
    double t_initial = 5.0;
    std::uint64_t seed = 0;
};

// Logarithmic cooling: t_initial / ln(1 + sweep), sweep counted from 1.
double sa_temperature(double t_initial, int sweep);

// Called after every update attempt with the spin index, whether it flipped,
// and the quadratic-form energy after the attempt.
using UpdateObserver = std::function<void(int spin, bool flipped, double energy)>;

struct BinarySolveResult {
    Assignment assignment;
    bool repaired = false;
    bool feasible_found = false;  // a feasible grid was seen without repair
    int sweeps = 0;
    std::uint64_t updates = 0;
    double energy = 0.0;  // quadratic-form energy of the returned grid
};

// Asynchronous threshold descent: spins updated one at a time in a fresh
// seeded random order each sweep, x_a <- step(local field), until a full
// sweep changes nothing or 10 * num_spins sweeps elapse. The step function
// maps a zero field to 0. The energy never increases along the way.
BinarySolveResult hopfield_solve(const NetworkWeights& nw, const RateTable& table,
                                 std::uint64_t seed, const UpdateObserver& observer = nullptr);

// Stochastic counterpart: each spin is set to 1 with probability
// sigmoid(local field / T(sweep)). Returns the best feasible grid seen at
// sweep boundaries; if none was feasible the final grid is repaired.
BinarySolveResult sa_solve(const NetworkWeights& nw, const RateTable& table, const SaConfig& cfg,
                           const UpdateObserver& observer = nullptr);

// Conventional pairing: sort real users by mean CNR, split into near and far
// halves, pair k-th near with k-th far (leftover slots filled by dummies),
// then let pairs claim channels greedily by their rate under an even power
// split of the budget.
Assignment cnoma_solve(const CnrMatrix& cnr, const RadioConfig& config);

struct EsResult {
    Assignment assignment;
    double best_value = 0.0;       // table rate of the best assignment
    std::uint64_t states = 0;      // complete assignments evaluated
};

// Exhaustive search over every partition of the 2*num_channels entities into
// ordered channels of two: fix the lowest unpaired entity, try each partner,
// and for every complete pairing try all channel permutations. No pruning;
// the state counter reflects every complete assignment. Ties keep the first
// maximum in enumeration order. Throws ProblemTooLargeError for
// num_channels > 7.
EsResult es_solve(const RateTable& table);

inline constexpr int kEsMaxChannels = 7;

// (2 num_channels)! / 2^num_channels
std::uint64_t es_state_count(int num_channels);

// Uniform random feasible assignment.
Assignment random_solve(int num_channels, int num_real_users, std::uint64_t seed);

}  // namespace cimra
