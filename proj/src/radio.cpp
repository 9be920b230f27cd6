#include "cimra/radio.hpp"

#include <sstream>

namespace cimra {

void Scenario::validate() const {
    config.validate();
    const int nu = num_users();
    if (nu < 2) throw std::invalid_argument("scenario needs at least 2 users");
    if (nu > 2 * config.num_channels)
        throw std::invalid_argument("more users than 2 * num_channels");
    for (const auto& u : users) {
        if (u.distance_m < kMinUserDistanceM || u.distance_m > kCellRadiusM)
            throw std::invalid_argument("user distance outside cell");
        if (static_cast<int>(u.fading.size()) != config.num_channels)
            throw std::invalid_argument("fading vector length != num_channels");
        for (double g : u.fading)
            if (!(g > 0.0)) throw std::invalid_argument("fading gain must be positive");
    }
}

bool is_feasible(const Assignment& a) {
    for (int i = 0; i < a.num_entities; ++i) {
        int row = 0;
        for (int j = 0; j < a.num_channels; ++j) row += a.cell(i, j);
        if (row != 1) return false;
    }
    for (int j = 0; j < a.num_channels; ++j) {
        int col = 0;
        for (int i = 0; i < a.num_entities; ++i) col += a.cell(i, j);
        if (col != 2) return false;
    }
    return true;
}

void validate_assignment(const Assignment& a) {
    if (a.num_entities != 2 * a.num_channels)
        throw InvalidAssignmentError("entity count != 2 * num_channels");
    if (!is_feasible(a)) throw InvalidAssignmentError("assignment grid is not a 2-per-channel matching");
}

Scenario generate_scenario(const RadioConfig& config, int num_users, std::uint64_t seed) {
    config.validate();
    if (num_users < 2) throw std::invalid_argument("num_users < 2");
    if (num_users > 2 * config.num_channels)
        throw std::invalid_argument("num_users > 2 * num_channels");

    Scenario s;
    s.config = config;
    s.seed = seed;
    s.users.resize(num_users);

    Rng rng(seed);
    const double r0sq = kMinUserDistanceM * kMinUserDistanceM;
    const double r1sq = kCellRadiusM * kCellRadiusM;
    for (auto& u : s.users) {
        // Uniform over the annulus area: quantile of r^2 is linear.
        u.distance_m = std::sqrt(r0sq + rng.uniform01() * (r1sq - r0sq));
        u.fading.resize(config.num_channels);
        for (double& g : u.fading) {
            // Rayleigh via inverse CDF, E[g^2] = 1.
            const double v = -std::log(1.0 - rng.uniform01());
            g = std::sqrt(v > 0.0 ? v : 5e-324);
        }
    }
    return s;
}

std::string scenario_to_text(const Scenario& s) {
    std::ostringstream out;
    out << "cimra-scenario 1\n";
    out << "total_bandwidth_hz " << fp17(s.config.total_bandwidth_hz) << "\n";
    out << "num_channels " << s.config.num_channels << "\n";
    out << "noise_psd_dbm_per_hz " << fp17(s.config.noise_psd_dbm_per_hz) << "\n";
    out << "pathloss_exponent " << fp17(s.config.pathloss_exponent) << "\n";
    out << "min_rate_bps_per_hz " << fp17(s.config.min_rate_bps_per_hz) << "\n";
    out << "total_power_w " << fp17(s.config.total_power_w) << "\n";
    out << "num_users " << s.num_users() << "\n";
    out << "seed " << s.seed << "\n";
    for (int i = 0; i < s.num_users(); ++i) {
        const auto& u = s.users[i];
        out << "user " << i << " " << fp17(u.distance_m);
        for (double g : u.fading) out << " " << fp17(g);
        out << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

}  // namespace

Scenario scenario_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || tokens_of(line) != std::vector<std::string>{"cimra-scenario", "1"})
        throw ParseError("missing scenario header");

    Scenario s;
    int num_users = -1;
    auto expect_kv = [&](const char* key) {
        if (!std::getline(in, line)) throw ParseError(std::string("missing field ") + key);
        auto t = tokens_of(line);
        if (t.size() != 2 || t[0] != key) throw ParseError(std::string("expected field ") + key);
        return t[1];
    };
    s.config.total_bandwidth_hz = parse_double(expect_kv("total_bandwidth_hz"));
    s.config.num_channels = static_cast<int>(parse_int(expect_kv("num_channels")));
    s.config.noise_psd_dbm_per_hz = parse_double(expect_kv("noise_psd_dbm_per_hz"));
    s.config.pathloss_exponent = parse_double(expect_kv("pathloss_exponent"));
    s.config.min_rate_bps_per_hz = parse_double(expect_kv("min_rate_bps_per_hz"));
    s.config.total_power_w = parse_double(expect_kv("total_power_w"));
    num_users = static_cast<int>(parse_int(expect_kv("num_users")));
    s.seed = static_cast<std::uint64_t>(parse_int(expect_kv("seed")));

    if (num_users < 0) throw ParseError("negative num_users");
    s.users.resize(num_users);
    for (int i = 0; i < num_users; ++i) {
        if (!std::getline(in, line)) throw ParseError("missing user row");
        auto t = tokens_of(line);
        if (static_cast<int>(t.size()) != 3 + s.config.num_channels || t[0] != "user")
            throw ParseError("malformed user row");
        if (parse_int(t[1]) != i) throw ParseError("user rows out of order");
        s.users[i].distance_m = parse_double(t[2]);
        s.users[i].fading.resize(s.config.num_channels);
        for (int j = 0; j < s.config.num_channels; ++j)
            s.users[i].fading[j] = parse_double(t[3 + j]);
    }
    s.validate();
    return s;
}

CnrMatrix cnr_from_parts(const std::vector<double>& distances_m, const Mat& fading,
                         const RadioConfig& config) {
    const int nu = static_cast<int>(distances_m.size());
    const int nc = config.num_channels;
    if (fading.rows != static_cast<std::size_t>(nu) || fading.cols != static_cast<std::size_t>(nc))
        throw std::invalid_argument("fading matrix shape mismatch");
    const double noise = config.noise_power_w();
    CnrMatrix m;
    m.num_users = nu;
    m.num_channels = nc;
    m.gamma = Mat(nu, nc);
    for (int i = 0; i < nu; ++i) {
        const double path = std::pow(distances_m[i], -config.pathloss_exponent);
        for (int j = 0; j < nc; ++j) {
            const double g = fading.at(i, j);
            m.gamma.at(i, j) = g * g * path / noise;
        }
    }
    return m;
}

CnrMatrix compute_cnr(const Scenario& s) {
    s.validate();
    std::vector<double> d(s.num_users());
    Mat f(s.num_users(), s.config.num_channels);
    for (int i = 0; i < s.num_users(); ++i) {
        d[i] = s.users[i].distance_m;
        for (int j = 0; j < s.config.num_channels; ++j) f.at(i, j) = s.users[i].fading[j];
    }
    return cnr_from_parts(d, f, s.config);
}

}  // namespace cimra
