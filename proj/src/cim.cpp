#include "cimra/cim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cimra/kernels.hpp"

namespace cimra {

double pump_at(const CimConfig& cfg, int t) {
    const double ramp = cfg.pump_ramp_fraction * cfg.num_cycles;
    if (ramp <= 0.0 || t >= ramp) return cfg.pump_max;
    return cfg.pump_max * static_cast<double>(t) / ramp;
}

CimResult simulate(const IsingProblem& p, const CimConfig& cfg, bool want_trace) {
    cfg.validate();
    const int n = p.num_spins;
    if (n <= 0) throw std::invalid_argument("empty problem");
    const auto& k = kern::active_kernels();

    // Row-sum normalization keeps the feedback bounded independent of the
    // problem's raw coupling scale; the bias field rides the same factor so
    // the encoded energy landscape is preserved.
    double row_max = 0.0;
    for (int a = 0; a < n; ++a) {
        double rs = 0.0;
        for (int b = 0; b < n; ++b) rs += std::abs(p.j.at(a, b));
        row_max = std::max(row_max, rs);
    }
    const double scale = cfg.coupling_scale / (row_max > 0.0 ? row_max : 1.0);

    Mat jscaled(n, n);
    for (std::size_t e = 0; e < jscaled.data.size(); ++e) jscaled.data[e] = scale * p.j.data[e];
    std::vector<double> field(n);
    for (int a = 0; a < n; ++a) field[a] = scale * p.lambda[a];

    CimResult out;
    out.c.resize(n);
    out.s.resize(n);
    Rng rng(cfg.seed);
    for (int a = 0; a < n; ++a) out.c[a] = rng.uniform(-cfg.init_amplitude, cfg.init_amplitude);
    for (int a = 0; a < n; ++a) out.s[a] = rng.uniform(-cfg.init_amplitude, cfg.init_amplitude);

    std::vector<double> jc(n), js(n), sigma(n);
    auto readout_energy = [&]() {
        for (int a = 0; a < n; ++a) sigma[a] = out.c[a] > 0.0 ? 1.0 : -1.0;
        return ising_energy(p, sigma);
    };

    if (want_trace) {
        out.has_trace = true;
        out.trace.num_spins = n;
        out.trace.pump.reserve(cfg.num_cycles + 1);
        out.trace.energy.reserve(cfg.num_cycles + 1);
        out.trace.c = Mat(cfg.num_cycles + 1, n);
    }
    auto record = [&](int row, double pump) {
        if (!out.has_trace) return;
        out.trace.pump.push_back(pump);
        out.trace.energy.push_back(readout_energy());
        std::copy(out.c.begin(), out.c.end(), out.trace.c.row(row));
    };
    record(0, pump_at(cfg, 0));

    const double noise_scale = cfg.noise_std * std::sqrt(cfg.dt);
    for (int t = 0; t < cfg.num_cycles; ++t) {
        const double pump = pump_at(cfg, t);
        k.matvec(jscaled.data.data(), out.c.data(), jc.data(), n);
        k.matvec(jscaled.data.data(), out.s.data(), js.data(), n);
        k.cim_step(out.c.data(), out.s.data(), jc.data(), js.data(), field.data(), pump, cfg.dt, n);
        if (noise_scale > 0.0) {
            for (int a = 0; a < n; ++a) out.c[a] += noise_scale * rng.normal();
            for (int a = 0; a < n; ++a) out.s[a] += noise_scale * rng.normal();
        }
        for (int a = 0; a < n; ++a) {
            if (!(std::abs(out.c[a]) <= 1e6) || !(std::abs(out.s[a]) <= 1e6))
                throw NumericalDivergenceError("amplitude out of range at cycle " +
                                               std::to_string(t));
        }
        record(t + 1, pump_at(cfg, t + 1));
    }

    out.sigma.resize(n);
    for (int a = 0; a < n; ++a) out.sigma[a] = out.c[a] > 0.0 ? 1.0 : -1.0;
    out.final_energy = ising_energy(p, out.sigma);
    return out;
}

std::string trace_to_csv(const CimTrace& t) {
    std::ostringstream out;
    out << "cycle,pump,energy";
    for (int a = 0; a < t.num_spins; ++a) out << ",c_" << a;
    out << "\n";
    for (std::size_t row = 0; row < t.pump.size(); ++row) {
        out << row << "," << fp17(t.pump[row]) << "," << fp17(t.energy[row]);
        const double* c = t.c.row(row);
        for (int a = 0; a < t.num_spins; ++a) out << "," << fp17(c[a]);
        out << "\n";
    }
    return out.str();
}

double attain_rate(const IsingProblem& p, const RateTable& table, const CnrMatrix& cnr,
                   const RadioConfig& radio, const CimConfig& cfg, int num_seeds,
                   double oracle_value) {
    if (num_seeds < 1) throw std::invalid_argument("num_seeds < 1");
    int hits = 0;
    for (int k = 0; k < num_seeds; ++k) {
        CimConfig run = cfg;
        run.seed = derive_seed(cfg.seed, 0xa77a, static_cast<std::uint64_t>(k));
        const CimResult res = simulate(p, run);
        const DecodeResult dec = decode_spins(res.sigma, p, table);
        const FinalAllocation fa = allocate_and_rate(dec.assignment, cnr, radio);
        if (fa.total >= oracle_value * (1.0 - 1e-6)) ++hits;
    }
    return static_cast<double>(hits) / num_seeds;
}

}  // namespace cimra
