#include "cimra/rates.hpp"

namespace cimra {

double single_rate(double gamma, double q, double channel_bandwidth) {
    return channel_bandwidth * std::log2(1.0 + q * gamma);
}

PairRates pair_rates(double gamma_strong, double gamma_weak, double q, double channel_bandwidth,
                     double a) {
    const PowerSplit ps = pair_power_split(gamma_strong, gamma_weak, q, a, a);
    PairRates r;
    r.strong = channel_bandwidth * std::log2(1.0 + ps.strong * gamma_strong);
    const double sinr_weak = ps.weak * gamma_weak / (1.0 + ps.strong * gamma_weak);
    r.weak = channel_bandwidth * std::log2(1.0 + sinr_weak);
    return r;
}

double RateTable::alone(int a, int j) const {
    if (is_dummy(a)) return 0.0;
    return single_rates_[static_cast<std::size_t>(a) * num_channels + j];
}

RateTable build_rate_table(const CnrMatrix& cnr, const std::vector<double>& channel_power,
                           const RadioConfig& config) {
    config.validate();
    const int nc = config.num_channels;
    const int nu = cnr.num_users;
    const int ne = 2 * nc;
    if (cnr.num_channels != nc) throw std::invalid_argument("CNR channel count mismatch");
    if (nu < 2 || nu > ne) throw std::invalid_argument("user count out of range");
    if (static_cast<int>(channel_power.size()) != nc)
        throw std::invalid_argument("channel_power length mismatch");

    RateTable t;
    t.num_entities = ne;
    t.num_channels = nc;
    t.num_real_users = nu;
    t.channel_bandwidth = config.channel_bandwidth_hz();
    t.qos_factor = config.qos_factor();
    t.channel_power = channel_power;
    t.rates.assign(static_cast<std::size_t>(ne) * nc * ne, 0.0);
    t.infeasible.assign(t.rates.size(), 0);
    t.single_rates_.assign(static_cast<std::size_t>(ne) * nc, 0.0);

    const double bc = t.channel_bandwidth;
    const double a = t.qos_factor;

    for (int j = 0; j < nc; ++j) {
        const double q = channel_power[j];
        for (int i = 0; i < nu; ++i) {
            const double gi = cnr.gamma.at(i, j);
            const double srate = single_rate(gi, q, bc);
            t.single_rates_[static_cast<std::size_t>(i) * nc + j] = srate;
            // Paired with any dummy: the user runs alone on the channel.
            const bool single_ok = q >= single_qos_floor(gi, a) * (1.0 - 1e-12);
            for (int k = nu; k < ne; ++k) {
                if (single_ok) {
                    t.rates[t.idx(i, j, k)] = srate;
                } else {
                    t.infeasible[t.idx(i, j, k)] = 1;
                    t.infeasible[t.idx(k, j, i)] = 1;
                }
            }
            for (int k = 0; k < i; ++k) {
                const double gk = cnr.gamma.at(k, j);
                const bool i_strong = cnr_stronger(gi, i, gk, k);
                const double gs = i_strong ? gi : gk;
                const double gw = i_strong ? gk : gi;
                if (q < pair_qos_floor(gs, gw, a, a) * (1.0 - 1e-12)) {
                    t.infeasible[t.idx(i, j, k)] = 1;
                    t.infeasible[t.idx(k, j, i)] = 1;
                    continue;
                }
                const PairRates pr = pair_rates(gs, gw, q, bc, a);
                t.rates[t.idx(i, j, k)] = i_strong ? pr.strong : pr.weak;
                t.rates[t.idx(k, j, i)] = i_strong ? pr.weak : pr.strong;
            }
        }
    }
    return t;
}

double total_rate(const Assignment& a, const RateTable& table) {
    if (a.num_entities != table.num_entities || a.num_channels != table.num_channels)
        throw InvalidAssignmentError("assignment shape does not match the rate table");
    validate_assignment(a);
    double sum = 0.0;
    for (int j = 0; j < a.num_channels; ++j) {
        const auto occ = a.occupants(j);
        sum += table.pair_sum(occ[0], j, occ[1]);
    }
    return sum;
}

FinalAllocation allocate_and_rate(const Assignment& a, const CnrMatrix& cnr,
                                  const RadioConfig& config) {
    validate_assignment(a);
    if (a.num_real_users != cnr.num_users || a.num_channels != cnr.num_channels)
        throw InvalidAssignmentError("assignment shape does not match the CNR matrix");

    const int nc = config.num_channels;
    const double bc = config.channel_bandwidth_hz();
    const double qos = config.qos_factor();

    std::vector<ChannelLoad> loads(nc);
    std::vector<std::pair<int, int>> pair_of(nc, {-1, -1});  // strong, weak (or single, -1)
    for (int j = 0; j < nc; ++j) {
        std::vector<int> real;
        for (int i : a.occupants(j))
            if (i < a.num_real_users) real.push_back(i);
        if (real.empty()) {
            loads[j] = ChannelLoad::empty();
        } else if (real.size() == 1) {
            loads[j] = ChannelLoad::single(cnr.gamma.at(real[0], j));
            pair_of[j] = {real[0], -1};
        } else {
            const double g0 = cnr.gamma.at(real[0], j);
            const double g1 = cnr.gamma.at(real[1], j);
            const bool first_strong = cnr_stronger(g0, real[0], g1, real[1]);
            const int s = first_strong ? real[0] : real[1];
            const int w = first_strong ? real[1] : real[0];
            loads[j] = ChannelLoad::pair(cnr.gamma.at(s, j), cnr.gamma.at(w, j));
            pair_of[j] = {s, w};
        }
    }

    FinalAllocation out;
    out.water = water_fill(loads, config.total_power_w, bc, qos);
    out.entity_rates.assign(a.num_entities, 0.0);
    for (int j = 0; j < nc; ++j) {
        const double q = out.water.q[j];
        if (loads[j].kind == ChannelLoad::Kind::Single) {
            out.entity_rates[pair_of[j].first] = single_rate(loads[j].gamma_strong, q, bc);
        } else if (loads[j].kind == ChannelLoad::Kind::Pair) {
            const PairRates pr = pair_rates(loads[j].gamma_strong, loads[j].gamma_weak, q, bc, qos);
            out.entity_rates[pair_of[j].first] = pr.strong;
            out.entity_rates[pair_of[j].second] = pr.weak;
        }
    }
    for (double r : out.entity_rates) out.total += r;
    return out;
}

}  // namespace cimra
