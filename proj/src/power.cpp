#include "cimra/power.hpp"

#include <algorithm>

namespace cimra {

double pair_qos_floor(double gamma_strong, double gamma_weak, double a_strong, double a_weak) {
    return a_weak * (a_strong - 1.0) / gamma_strong + (a_weak - 1.0) / gamma_weak;
}

double single_qos_floor(double gamma, double a) { return (a - 1.0) / gamma; }

PowerSplit pair_power_split(double gamma_strong, double gamma_weak, double q, double a_strong,
                            double a_weak) {
    if (!(gamma_strong > 0.0) || !(gamma_weak > 0.0))
        throw std::invalid_argument("CNR must be positive");
    if (!(a_strong > 2.0) || !(a_weak > 2.0))
        throw std::invalid_argument("QoS factor must exceed 2");
    const double floor = pair_qos_floor(gamma_strong, gamma_weak, a_strong, a_weak);
    if (q < floor * (1.0 - 1e-12))
        throw QosInfeasibleError("channel power below the pair QoS floor");
    PowerSplit ps;
    ps.strong = (gamma_weak * q - a_weak + 1.0) / (a_weak * gamma_weak);
    ps.weak = q - ps.strong;
    return ps;
}

namespace {

double load_floor(const ChannelLoad& l, double a) {
    switch (l.kind) {
        case ChannelLoad::Kind::Empty: return 0.0;
        case ChannelLoad::Kind::Single: return single_qos_floor(l.gamma_strong, a);
        case ChannelLoad::Kind::Pair:
            return pair_qos_floor(l.gamma_strong, l.gamma_weak, a, a);
    }
    return 0.0;
}

// Additive constant of the unclamped water-filling term for one channel.
double load_offset(const ChannelLoad& l, double a) {
    switch (l.kind) {
        case ChannelLoad::Kind::Empty: return 0.0;
        case ChannelLoad::Kind::Single: return -1.0 / l.gamma_strong;
        case ChannelLoad::Kind::Pair:
            return -a / l.gamma_strong + a / l.gamma_weak - 1.0 / l.gamma_weak;
    }
    return 0.0;
}

}  // namespace

WaterFillingResult water_fill(const std::vector<ChannelLoad>& loads, double total_power,
                              double channel_bandwidth, double a) {
    if (!(total_power > 0.0)) throw std::invalid_argument("total_power <= 0");
    if (!(a > 2.0)) throw std::invalid_argument("QoS factor must exceed 2");
    const int nc = static_cast<int>(loads.size());

    WaterFillingResult r;
    r.q.assign(nc, 0.0);
    r.floors.assign(nc, 0.0);

    std::vector<int> loaded;
    double floor_sum = 0.0;
    for (int j = 0; j < nc; ++j) {
        if (loads[j].kind == ChannelLoad::Kind::Empty) continue;
        loaded.push_back(j);
        r.floors[j] = load_floor(loads[j], a);
        floor_sum += r.floors[j];
    }
    if (loaded.empty()) throw std::invalid_argument("no loaded channel to power");
    if (floor_sum > total_power * (1.0 + 1e-12))
        throw QosInfeasibleError("QoS floors exceed the power budget");

    auto q_of = [&](int j, double lambda) {
        return std::max(channel_bandwidth / lambda + load_offset(loads[j], a), r.floors[j]);
    };
    auto budget_at = [&](double lambda) {
        double s = 0.0;
        for (int j : loaded) s += q_of(j, lambda);
        return s;
    };

    // Budget use is monotone decreasing in lambda; bracket then bisect.
    double lo = 1.0, hi = 1.0;
    while (budget_at(lo) < total_power && lo > 1e-300) lo *= 0.5;
    while (budget_at(hi) > total_power && hi < 1e300) hi *= 2.0;
    double lambda = hi;
    for (int it = 0; it < 200; ++it) {
        lambda = 0.5 * (lo + hi);
        if (budget_at(lambda) > total_power)
            lo = lambda;
        else
            hi = lambda;
        r.iterations = it + 1;
    }
    r.lambda = lambda;

    double used = 0.0;
    std::vector<int> unclamped;
    for (int j : loaded) {
        r.q[j] = q_of(j, lambda);
        used += r.q[j];
        if (r.q[j] > r.floors[j]) unclamped.push_back(j);
    }
    // Spread the residual over channels above their floor so the budget is
    // met to machine precision; the residual after bisection is already tiny.
    const auto& spread = unclamped.empty() ? loaded : unclamped;
    const double residual = (total_power - used) / static_cast<double>(spread.size());
    for (int j : spread) r.q[j] += residual;
    return r;
}

}  // namespace cimra
