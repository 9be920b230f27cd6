#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cimra/common.hpp"

namespace cimra {

// Downlink cell geometry used by scenario generation.
inline constexpr double kMinUserDistanceM = 50.0;
inline constexpr double kCellRadiusM = 500.0;

struct RadioConfig {
    double total_bandwidth_hz = 5.0e6;
    int num_channels = 6;
    double noise_psd_dbm_per_hz = -170.0;
    double pathloss_exponent = 3.0;
    // Spectral-efficiency floor per user, bit/s/Hz. Must exceed 1 so the
    // QoS factor 2^min_rate stays above 2 and the two-user power split
    // keeps strong < weak.
    double min_rate_bps_per_hz = 2.0;
    double total_power_w = 12.0;

    double channel_bandwidth_hz() const { return total_bandwidth_hz / num_channels; }

    double noise_power_w() const {
        return std::pow(10.0, noise_psd_dbm_per_hz / 10.0) * 1e-3 * channel_bandwidth_hz();
    }

    // 2^min_rate: SNR factor a user needs to hit the rate floor.
    double qos_factor() const { return std::pow(2.0, min_rate_bps_per_hz); }

    // Rate floor in bit/s on one channel.
    double rate_floor_bps() const { return min_rate_bps_per_hz * channel_bandwidth_hz(); }

    void validate() const {
        if (total_bandwidth_hz <= 0.0) throw std::invalid_argument("total_bandwidth_hz <= 0");
        if (num_channels < 1) throw std::invalid_argument("num_channels < 1");
        if (pathloss_exponent <= 0.0) throw std::invalid_argument("pathloss_exponent <= 0");
        if (min_rate_bps_per_hz <= 1.0) throw std::invalid_argument("min_rate_bps_per_hz <= 1");
        if (total_power_w <= 0.0) throw std::invalid_argument("total_power_w <= 0");
    }
};

struct ScenarioUser {
    double distance_m = 0.0;
    std::vector<double> fading;  // per-channel small-scale gain g, E[g^2] = 1
};

struct Scenario {
    RadioConfig config;
    std::vector<ScenarioUser> users;
    std::uint64_t seed = 0;

    int num_users() const { return static_cast<int>(users.size()); }

    void validate() const;
};

// Per-user per-channel carrier-to-noise ratio (linear).
struct CnrMatrix {
    int num_users = 0;
    int num_channels = 0;
    Mat gamma;  // num_users x num_channels
};

// Channel assignment over entities. Entities 0..num_real_users-1 are real
// users; the remainder are dummies padding the count to 2*num_channels so
// every channel carries exactly two entities. A real user sharing a channel
// with a dummy is in single-user (orthogonal) mode on that channel.
struct Assignment {
    int num_entities = 0;
    int num_channels = 0;
    int num_real_users = 0;
    std::vector<std::uint8_t> grid;  // num_entities x num_channels, values 0/1

    Assignment() = default;
    Assignment(int entities, int channels, int real_users)
        : num_entities(entities),
          num_channels(channels),
          num_real_users(real_users),
          grid(static_cast<std::size_t>(entities) * channels, 0) {}

    std::uint8_t& cell(int i, int j) { return grid[static_cast<std::size_t>(i) * num_channels + j]; }
    std::uint8_t cell(int i, int j) const {
        return grid[static_cast<std::size_t>(i) * num_channels + j];
    }

    // Channel of entity i, or -1 when unassigned / multi-assigned.
    int channel_of(int i) const {
        int found = -1;
        for (int j = 0; j < num_channels; ++j) {
            if (cell(i, j)) {
                if (found >= 0) return -1;
                found = j;
            }
        }
        return found;
    }

    std::vector<int> occupants(int j) const {
        std::vector<int> out;
        for (int i = 0; i < num_entities; ++i)
            if (cell(i, j)) out.push_back(i);
        return out;
    }
};

// Every entity on exactly one channel, every channel holding exactly two.
bool is_feasible(const Assignment& a);
void validate_assignment(const Assignment& a);

// Users placed uniformly over the annulus [kMinUserDistanceM, kCellRadiusM];
// fading drawn per user per channel, Rayleigh with unit mean square.
// Draw order per user: distance, then channel gains in channel order.
Scenario generate_scenario(const RadioConfig& config, int num_users, std::uint64_t seed);

std::string scenario_to_text(const Scenario& s);
Scenario scenario_from_text(const std::string& text);

CnrMatrix compute_cnr(const Scenario& s);

// CNR from raw geometry: gamma(i,j) = g(i,j)^2 * d_i^-alpha / noise_power.
CnrMatrix cnr_from_parts(const std::vector<double>& distances_m, const Mat& fading,
                         const RadioConfig& config);

// True CNR ordering with deterministic tie handling: the lower index wins ties.
inline bool cnr_stronger(double gamma_i, int i, double gamma_k, int k) {
    return gamma_i > gamma_k || (gamma_i == gamma_k && i < k);
}

}  // namespace cimra
