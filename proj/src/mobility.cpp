#include "cimra/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cimra {

void MobilityConfig::validate() const {
    if (!(area_x_m > 0.0) || !(area_y_m > 0.0) || !(grid_x_m > 0.0) || !(grid_y_m > 0.0))
        throw std::invalid_argument("mobility dimensions must be positive");
    const double kx = area_x_m / grid_x_m;
    const double ky = area_y_m / grid_y_m;
    if (std::abs(kx - std::round(kx)) > 1e-9 || std::abs(ky - std::round(ky)) > 1e-9)
        throw std::invalid_argument("area must be an integer multiple of the grid spacing");
    if (!(speed_min_kmh > 0.0) || speed_max_kmh < speed_min_kmh)
        throw std::invalid_argument("bad speed range");
    if (!(decision_interval_s > 0.0)) throw std::invalid_argument("decision_interval_s <= 0");
}

namespace {

bool on_grid(double v, double spacing) {
    const double k = std::round(v / spacing);
    return v == k * spacing;
}

// Distance from v to the next road line in +1/-1 direction on a cyclic axis,
// and the exact landing coordinate. Standing on a line yields a full spacing.
struct NextLine {
    double dist;
    double target;
};

NextLine next_line(double v, double spacing, double length, int dir) {
    const double base = std::floor(v / spacing) * spacing;
    const double r = v - base;
    NextLine out{};
    if (dir > 0) {
        out.dist = spacing - r;
        out.target = base + spacing;
        if (out.target >= length) out.target -= length;
    } else {
        if (r == 0.0) {
            out.dist = spacing;
            out.target = base - spacing;
            if (out.target < 0.0) out.target += length;
        } else {
            out.dist = r;
            out.target = base;
        }
    }
    return out;
}

bool moves_in_x(Heading h) { return h == Heading::PlusX || h == Heading::MinusX; }

Heading turn_left(Heading h) {
    switch (h) {
        case Heading::PlusX: return Heading::PlusY;
        case Heading::PlusY: return Heading::MinusX;
        case Heading::MinusX: return Heading::MinusY;
        case Heading::MinusY: return Heading::PlusX;
    }
    return h;
}

Heading turn_right(Heading h) {
    switch (h) {
        case Heading::PlusX: return Heading::MinusY;
        case Heading::MinusY: return Heading::MinusX;
        case Heading::MinusX: return Heading::PlusY;
        case Heading::PlusY: return Heading::PlusX;
    }
    return h;
}

}  // namespace

bool at_intersection(const MobilityConfig& cfg, const MobileUser& u) {
    return on_grid(u.x, cfg.grid_x_m) && on_grid(u.y, cfg.grid_y_m);
}

std::vector<MobileUser> init_mobility(const MobilityConfig& cfg, int num_users, Rng& rng) {
    cfg.validate();
    if (num_users < 1) throw std::invalid_argument("num_users < 1");
    const int nvx = cfg.roads_x();
    const int nhy = cfg.roads_y();
    const double len_vertical = nvx * cfg.area_y_m;
    const double len_total = len_vertical + nhy * cfg.area_x_m;

    std::vector<MobileUser> users(num_users);
    for (auto& u : users) {
        const double pos = rng.uniform01() * len_total;
        if (pos < len_vertical) {
            const int road = std::min(nvx - 1, static_cast<int>(pos / cfg.area_y_m));
            u.x = road * cfg.grid_x_m;
            u.y = pos - road * cfg.area_y_m;
            u.heading = rng.uniform_int(2) == 0 ? Heading::PlusY : Heading::MinusY;
        } else {
            const double p = pos - len_vertical;
            const int road = std::min(nhy - 1, static_cast<int>(p / cfg.area_x_m));
            u.y = road * cfg.grid_y_m;
            u.x = p - road * cfg.area_x_m;
            u.heading = rng.uniform_int(2) == 0 ? Heading::PlusX : Heading::MinusX;
        }
        u.speed_mps = rng.uniform(cfg.speed_min_kmh, cfg.speed_max_kmh) / 3.6;
    }
    return users;
}

void step_users(const MobilityConfig& cfg, std::vector<MobileUser>& users, double dt, Rng& rng) {
    for (auto& u : users) {
        double remaining = u.speed_mps * dt;
        while (remaining > 0.0) {
            if (at_intersection(cfg, u)) {
                const auto pick = rng.uniform_int(3);
                if (pick == 1)
                    u.heading = turn_left(u.heading);
                else if (pick == 2)
                    u.heading = turn_right(u.heading);
            }
            const bool along_x = moves_in_x(u.heading);
            const int dir = (u.heading == Heading::PlusX || u.heading == Heading::PlusY) ? 1 : -1;
            const NextLine nl = along_x
                                    ? next_line(u.x, cfg.grid_x_m, cfg.area_x_m, dir)
                                    : next_line(u.y, cfg.grid_y_m, cfg.area_y_m, dir);
            if (remaining >= nl.dist) {
                // Land exactly on the intersection; the turn decision happens
                // when movement resumes.
                if (along_x)
                    u.x = nl.target;
                else
                    u.y = nl.target;
                remaining -= nl.dist;
            } else {
                // A partial move from exactly on a line can cross the torus
                // seam (r == 0 with dir < 0), so wrap here too.
                if (along_x) {
                    u.x += dir * remaining;
                    if (u.x < 0.0) u.x += cfg.area_x_m;
                    if (u.x >= cfg.area_x_m) u.x -= cfg.area_x_m;
                } else {
                    u.y += dir * remaining;
                    if (u.y < 0.0) u.y += cfg.area_y_m;
                    if (u.y >= cfg.area_y_m) u.y -= cfg.area_y_m;
                }
                remaining = 0.0;
            }
        }
    }
}

std::vector<IntervalRow> dynamic_eval(
    const MobilityConfig& cfg, const RadioConfig& radio, int num_users, int num_intervals,
    const std::vector<SolverArm>& arms,
    const std::function<Assignment(const CnrMatrix&, const RateTable&, std::uint64_t)>& oracle,
    std::uint64_t seed) {
    cfg.validate();
    radio.validate();
    if (num_intervals < 1) throw std::invalid_argument("num_intervals < 1");
    if (num_users < 2 || num_users > 2 * radio.num_channels)
        throw std::invalid_argument("user count out of range");

    std::vector<int> staleness(arms.size());
    int max_stale = 0;
    for (std::size_t a = 0; a < arms.size(); ++a) {
        if (arms[a].latency_s < 0.0) throw std::invalid_argument("negative latency");
        staleness[a] = static_cast<int>(
            std::floor(arms[a].latency_s / cfg.decision_interval_s + 1e-9));
        max_stale = std::max(max_stale, staleness[a]);
    }

    struct Snapshot {
        CnrMatrix cnr;
        RateTable table;
    };
    std::vector<Snapshot> ring(max_stale + 1);

    Rng rng(seed);
    std::vector<MobileUser> users = init_mobility(cfg, num_users, rng);
    const double bs_x = 0.5 * cfg.area_x_m;
    const double bs_y = 0.5 * cfg.area_y_m;

    std::vector<IntervalRow> rows;
    rows.reserve(arms.size() * num_intervals);

    for (int tau = 0; tau < num_intervals; ++tau) {
        if (tau > 0) step_users(cfg, users, cfg.decision_interval_s, rng);

        // Block fading: independent redraw every interval.
        Mat fading(num_users, radio.num_channels);
        for (int i = 0; i < num_users; ++i)
            for (int j = 0; j < radio.num_channels; ++j) {
                const double v = -std::log(1.0 - rng.uniform01());
                fading.at(i, j) = std::sqrt(v > 0.0 ? v : 5e-324);
            }
        std::vector<double> dist(num_users);
        for (int i = 0; i < num_users; ++i)
            dist[i] = std::max(kMinUserDistanceM, std::hypot(users[i].x - bs_x, users[i].y - bs_y));

        Snapshot& snap = ring[tau % (max_stale + 1)];
        snap.cnr = cnr_from_parts(dist, fading, radio);
        snap.table = build_rate_table(snap.cnr, 1.0, radio);

        const Assignment best = oracle(snap.cnr, snap.table, derive_seed(seed, 0xe5, tau));
        const double oracle_rate = allocate_and_rate(best, snap.cnr, radio).total;

        for (std::size_t a = 0; a < arms.size(); ++a) {
            if (tau < staleness[a]) continue;
            const Snapshot& old = ring[(tau - staleness[a]) % (max_stale + 1)];
            const Assignment got =
                arms[a].solve(old.cnr, old.table, derive_seed(seed, 0xa0 + a, tau));
            const double achieved = allocate_and_rate(got, snap.cnr, radio).total;
            IntervalRow r;
            r.interval = tau;
            r.solver = arms[a].name;
            r.latency_s = arms[a].latency_s;
            r.achieved_rate = achieved;
            r.oracle_rate = oracle_rate;
            r.ratio = oracle_rate > 0.0 ? achieved / oracle_rate : 0.0;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

std::string intervals_to_csv(const std::vector<IntervalRow>& rows) {
    std::ostringstream out;
    out << "interval,solver,latency_s,achieved_rate,oracle_rate,ratio\n";
    for (const auto& r : rows) {
        out << r.interval << "," << r.solver << "," << fp17(r.latency_s) << ","
            << fp17(r.achieved_rate) << "," << fp17(r.oracle_rate) << "," << fp17(r.ratio)
            << "\n";
    }
    return out.str();
}

}  // namespace cimra
