#pragma once

#include <string>
#include <vector>

#include "cimra/rates.hpp"

namespace cimra {

// Objective scaling. epsilon multiplies the rate reward, zeta the
// one-channel-per-entity penalty, eta the two-entities-per-channel penalty.
struct Scaling {
    double epsilon = 1.0;
    double zeta = 3.0;
    double eta = 3.0;
};

// epsilon = 1 / (largest ordered pair rate sum in the table), so the reward
// of any single pair lies in [0, 1]. zeta = eta = 3.0: adding a surplus
// entity to a channel then costs at least zeta + eta - 4 = 2, so no
// constraint violation can pay for itself and the minimum-energy grid stays
// feasible.
Scaling default_scaling(const RateTable& table);

// The three objective pieces over a binary channel-assignment grid x:
//   e1: negated sum of ordered pair rates sharing a channel
//   e2: sum over entities of (row sum - 1)^2
//   e3: sum over channels of (column sum - 2)^2
// Evaluations are direct, from the definitions, and include the constant
// parts of the squared penalties.
struct EnergyTerms {
    RateTable table;
    int num_entities = 0;
    int num_channels = 0;

    double e1(const std::vector<std::uint8_t>& x) const;
    double e2(const std::vector<std::uint8_t>& x) const;
    double e3(const std::vector<std::uint8_t>& x) const;
    double objective(const std::vector<std::uint8_t>& x, const Scaling& s) const;
};

EnergyTerms build_energy_terms(const RateTable& table);

// Symmetric zero-diagonal quadratic form over flattened spins a = i*C + j:
//   E(x) = -1/2 sum w_ab x_a x_b + sum theta_a x_a
struct NetworkWeights {
    int num_entities = 0;
    int num_channels = 0;
    int num_real_users = 0;
    Scaling scaling;
    Mat w;
    std::vector<double> theta;

    int num_spins() const { return num_entities * num_channels; }
    std::size_t spin_index(int i, int j) const {
        return static_cast<std::size_t>(i) * num_channels + j;
    }
};

NetworkWeights derive_weights(const EnergyTerms& terms, const Scaling& scaling);

double nn_energy(const NetworkWeights& nw, const std::vector<std::uint8_t>& x);

// Spin-variable form of the same objective, sigma in {-1, +1}:
//   E(sigma) = -1/2 sum j_ab sigma_a sigma_b + sum lambda_a sigma_a
struct IsingProblem {
    int num_spins = 0;
    Mat j;
    std::vector<double> lambda;
    // decode metadata
    int num_entities = 0;
    int num_channels = 0;
    int num_real_users = 0;
};

IsingProblem to_ising(const NetworkWeights& nw);

double ising_energy(const IsingProblem& p, const std::vector<double>& sigma);

struct DecodeResult {
    Assignment assignment;
    bool repaired = false;
};

// sigma > 0 maps to x = 1. Infeasible grids are repaired: multi-assigned
// entities keep their best channel, overfull channels keep their best pair,
// then unassigned entities greedily take the open channel with the largest
// incremental rate. Deterministic; ties go to the lowest index.
DecodeResult decode_spins(const std::vector<double>& sigma, const IsingProblem& p,
                          const RateTable& table);

// Same repair path over a binary grid (used by the binary-state solvers).
DecodeResult decode_binary(const std::vector<std::uint8_t>& x, int num_entities, int num_channels,
                           const RateTable& table);

// Text form: first line the spin count, second line lambda, then the dense
// coupling matrix row by row. 17 significant digits throughout.
std::string ising_to_text(const IsingProblem& p);
// Decode metadata is not part of the text form; imported problems carry
// zeroed metadata and support simulation and energy evaluation only.
IsingProblem ising_from_text(const std::string& text);

}  // namespace cimra
