#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cimra/ising.hpp"

namespace cimra {

struct CimConfig {
    int num_cycles = 1000;
    double dt = 0.05;
    double pump_max = 2.5;
    // Fraction of cycles over which the pump rises linearly from 0 to
    // pump_max; it holds at pump_max afterwards.
    double pump_ramp_fraction = 0.7;
    // kappa: feedback strength applied on top of the row-sum normalization.
    double coupling_scale = 5.0;
    // Amplitudes start uniform in [-init_amplitude, +init_amplitude],
    // symmetric around the unstable origin.
    double init_amplitude = 1e-3;
    // Standard deviation of the additive per-step noise, scaled by sqrt(dt).
    // Zero keeps the integration deterministic given the seed.
    double noise_std = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (num_cycles < 1) throw std::invalid_argument("num_cycles < 1");
        if (!(dt > 0.0)) throw std::invalid_argument("dt <= 0");
        if (pump_ramp_fraction < 0.0 || pump_ramp_fraction > 1.0)
            throw std::invalid_argument("pump_ramp_fraction outside [0, 1]");
        if (!(coupling_scale > 0.0)) throw std::invalid_argument("coupling_scale <= 0");
        if (init_amplitude < 0.0) throw std::invalid_argument("init_amplitude < 0");
        if (noise_std < 0.0) throw std::invalid_argument("noise_std < 0");
    }
};

// Snapshot rows cover the initial state plus one row per cycle. The energy
// column is the spin-form energy of the sign readout at that row.
struct CimTrace {
    int num_spins = 0;
    std::vector<double> pump;    // num_cycles + 1
    std::vector<double> energy;  // num_cycles + 1
    Mat c;                       // (num_cycles + 1) x num_spins
};

struct CimResult {
    std::vector<double> sigma;  // sign readout of the in-phase amplitudes
    std::vector<double> c;
    std::vector<double> s;
    double final_energy = 0.0;
    bool has_trace = false;
    CimTrace trace;
};

// Explicit Euler integration of the measurement-feedback oscillator network,
// one step per cycle. Couplings and the bias field are both scaled by
// coupling_scale / (max absolute row sum of j). Throws
// NumericalDivergenceError if any amplitude exceeds 1e6.
CimResult simulate(const IsingProblem& p, const CimConfig& cfg, bool want_trace = false);

// Pump value applied at integration step t.
double pump_at(const CimConfig& cfg, int t);

std::string trace_to_csv(const CimTrace& t);

// Fraction of num_seeds independent runs whose decoded, repaired and
// re-powered assignment reaches oracle_value within 1e-6 relative.
double attain_rate(const IsingProblem& p, const RateTable& table, const CnrMatrix& cnr,
                   const RadioConfig& radio, const CimConfig& cfg, int num_seeds,
                   double oracle_value);

}  // namespace cimra
