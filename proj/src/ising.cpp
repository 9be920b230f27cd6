#include "cimra/ising.hpp"

#include <algorithm>
#include <sstream>

#include "cimra/kernels.hpp"

namespace cimra {

Scaling default_scaling(const RateTable& table) {
    double max_pair = 0.0;
    for (int j = 0; j < table.num_channels; ++j)
        for (int i = 0; i < table.num_entities; ++i)
            for (int k = 0; k < i; ++k)
                max_pair = std::max(max_pair, table.pair_sum(i, j, k));
    Scaling s;
    s.epsilon = max_pair > 0.0 ? 1.0 / max_pair : 1.0;
    return s;
}

EnergyTerms build_energy_terms(const RateTable& table) {
    EnergyTerms t;
    t.table = table;
    t.num_entities = table.num_entities;
    t.num_channels = table.num_channels;
    return t;
}

double EnergyTerms::e1(const std::vector<std::uint8_t>& x) const {
    double sum = 0.0;
    for (int j = 0; j < num_channels; ++j)
        for (int i = 0; i < num_entities; ++i) {
            if (!x[static_cast<std::size_t>(i) * num_channels + j]) continue;
            for (int k = 0; k < i; ++k)
                if (x[static_cast<std::size_t>(k) * num_channels + j])
                    sum += table.pair_sum(i, j, k);
        }
    return -2.0 * sum;
}

double EnergyTerms::e2(const std::vector<std::uint8_t>& x) const {
    double sum = 0.0;
    for (int i = 0; i < num_entities; ++i) {
        int row = 0;
        for (int j = 0; j < num_channels; ++j) row += x[static_cast<std::size_t>(i) * num_channels + j];
        sum += static_cast<double>((row - 1) * (row - 1));
    }
    return sum;
}

double EnergyTerms::e3(const std::vector<std::uint8_t>& x) const {
    double sum = 0.0;
    for (int j = 0; j < num_channels; ++j) {
        int col = 0;
        for (int i = 0; i < num_entities; ++i) col += x[static_cast<std::size_t>(i) * num_channels + j];
        sum += static_cast<double>((col - 2) * (col - 2));
    }
    return sum;
}

double EnergyTerms::objective(const std::vector<std::uint8_t>& x, const Scaling& s) const {
    return s.epsilon * e1(x) + s.zeta * e2(x) + s.eta * e3(x);
}

NetworkWeights derive_weights(const EnergyTerms& terms, const Scaling& scaling) {
    NetworkWeights nw;
    nw.num_entities = terms.num_entities;
    nw.num_channels = terms.num_channels;
    nw.num_real_users = terms.table.num_real_users;
    nw.scaling = scaling;
    const int n = nw.num_spins();
    nw.w = Mat(n, n);
    nw.theta.assign(n, -(scaling.zeta + 3.0 * scaling.eta));

    for (int i = 0; i < nw.num_entities; ++i)
        for (int j = 0; j < nw.num_channels; ++j) {
            const std::size_t a = nw.spin_index(i, j);
            for (int k = 0; k < nw.num_entities; ++k)
                for (int l = 0; l < nw.num_channels; ++l) {
                    const std::size_t b = nw.spin_index(k, l);
                    if (a == b) continue;
                    double v = 0.0;
                    if (j == l && i != k)
                        v = 2.0 * (scaling.epsilon * terms.table.pair_sum(i, j, k) - scaling.eta);
                    else if (i == k)
                        v = -2.0 * scaling.zeta;
                    nw.w.at(a, b) = v;
                }
        }
    return nw;
}

double nn_energy(const NetworkWeights& nw, const std::vector<std::uint8_t>& x) {
    const int n = nw.num_spins();
    std::vector<double> xd(n);
    for (int a = 0; a < n; ++a) xd[a] = x[a] ? 1.0 : 0.0;
    const auto& k = kern::active_kernels();
    std::vector<double> wx(n);
    k.matvec(nw.w.data.data(), xd.data(), wx.data(), n);
    return -0.5 * k.dot(xd.data(), wx.data(), n) + k.dot(nw.theta.data(), xd.data(), n);
}

IsingProblem to_ising(const NetworkWeights& nw) {
    IsingProblem p;
    p.num_spins = nw.num_spins();
    p.num_entities = nw.num_entities;
    p.num_channels = nw.num_channels;
    p.num_real_users = nw.num_real_users;
    p.j = Mat(p.num_spins, p.num_spins);
    p.lambda.assign(p.num_spins, 0.0);
    for (int a = 0; a < p.num_spins; ++a) {
        double row_sum = 0.0;
        for (int b = 0; b < p.num_spins; ++b) {
            const double w = nw.w.at(a, b);
            p.j.at(a, b) = 0.5 * w;
            row_sum += w;
        }
        p.lambda[a] = nw.theta[a] - 0.5 * row_sum;
    }
    return p;
}

double ising_energy(const IsingProblem& p, const std::vector<double>& sigma) {
    const auto& k = kern::active_kernels();
    std::vector<double> js(p.num_spins);
    k.matvec(p.j.data.data(), sigma.data(), js.data(), p.num_spins);
    return -0.5 * k.dot(sigma.data(), js.data(), p.num_spins) +
           k.dot(p.lambda.data(), sigma.data(), p.num_spins);
}

namespace {

// Marginal value of placing entity i on channel j given the channel's other
// current occupants.
double placement_value(int i, int j, const std::vector<std::vector<int>>& occ,
                       const RateTable& t) {
    int others = 0;
    int partner = -1;
    for (int k : occ[j]) {
        if (k == i) continue;
        ++others;
        partner = k;
    }
    if (others == 0) return t.alone(i, j);
    if (others == 1) return t.pair_sum(i, j, partner) - t.alone(partner, j);
    return -1.0;
}

}  // namespace

DecodeResult decode_binary(const std::vector<std::uint8_t>& x, int num_entities, int num_channels,
                           const RateTable& table) {
    if (num_entities != 2 * num_channels)
        throw std::invalid_argument("entity count must be 2 * num_channels");
    if (x.size() != static_cast<std::size_t>(num_entities) * num_channels)
        throw std::invalid_argument("grid size mismatch");
    DecodeResult out;
    out.assignment = Assignment(num_entities, num_channels, table.num_real_users);
    auto& a = out.assignment;
    a.grid = x;

    if (is_feasible(a)) return out;
    out.repaired = true;

    std::vector<std::vector<int>> occ(num_channels);
    for (int j = 0; j < num_channels; ++j)
        for (int i = 0; i < num_entities; ++i)
            if (a.cell(i, j)) occ[j].push_back(i);

    auto detach = [&](int i, int j) {
        a.cell(i, j) = 0;
        auto& v = occ[j];
        v.erase(std::find(v.begin(), v.end(), i));
    };

    // Entities holding several channels keep the most valuable one.
    for (int i = 0; i < num_entities; ++i) {
        std::vector<int> mine;
        for (int j = 0; j < num_channels; ++j)
            if (a.cell(i, j)) mine.push_back(j);
        if (mine.size() <= 1) continue;
        int keep = mine[0];
        double best = placement_value(i, keep, occ, table);
        for (std::size_t m = 1; m < mine.size(); ++m) {
            const double v = placement_value(i, mine[m], occ, table);
            if (v > best) {
                best = v;
                keep = mine[m];
            }
        }
        for (int j : mine)
            if (j != keep) detach(i, j);
    }

    // Overfull channels keep their best pair; the rest go back to the pool.
    for (int j = 0; j < num_channels; ++j) {
        if (occ[j].size() <= 2) continue;
        int keep_a = occ[j][0], keep_b = occ[j][1];
        double best_v = -1e300;
        for (std::size_t m = 0; m < occ[j].size(); ++m) {
            for (std::size_t l = m + 1; l < occ[j].size(); ++l) {
                const double v = table.pair_sum(occ[j][m], j, occ[j][l]);
                if (v > best_v) {
                    best_v = v;
                    keep_a = occ[j][m];
                    keep_b = occ[j][l];
                }
            }
        }
        std::vector<int> evict;
        for (int i : occ[j])
            if (i != keep_a && i != keep_b) evict.push_back(i);
        for (int i : evict) detach(i, j);
    }

    // Unassigned entities fill the open slots greedily, placing whichever
    // (entity, channel) move adds the most marginal rate first.
    std::vector<char> assigned(num_entities, 0);
    int remaining = 0;
    for (int i = 0; i < num_entities; ++i) {
        for (int j = 0; j < num_channels; ++j) assigned[i] = assigned[i] || a.cell(i, j);
        remaining += !assigned[i];
    }
    while (remaining > 0) {
        int best_i = -1, best_j = -1;
        double best_v = 0.0;
        for (int i = 0; i < num_entities; ++i) {
            if (assigned[i]) continue;
            for (int j = 0; j < num_channels; ++j) {
                if (occ[j].size() >= 2) continue;
                const double v = placement_value(i, j, occ, table);
                if (best_i < 0 || v > best_v) {
                    best_i = i;
                    best_j = j;
                    best_v = v;
                }
            }
        }
        a.cell(best_i, best_j) = 1;
        occ[best_j].push_back(best_i);
        assigned[best_i] = 1;
        --remaining;
    }
    return out;
}

DecodeResult decode_spins(const std::vector<double>& sigma, const IsingProblem& p,
                          const RateTable& table) {
    if (static_cast<int>(sigma.size()) != p.num_spins)
        throw std::invalid_argument("spin vector length mismatch");
    if (p.num_entities * p.num_channels != p.num_spins)
        throw std::invalid_argument("problem lacks decode metadata");
    std::vector<std::uint8_t> x(sigma.size());
    for (std::size_t a = 0; a < sigma.size(); ++a) x[a] = sigma[a] > 0.0 ? 1 : 0;
    return decode_binary(x, p.num_entities, p.num_channels, table);
}

std::string ising_to_text(const IsingProblem& p) {
    std::ostringstream out;
    out << p.num_spins << "\n";
    for (int a = 0; a < p.num_spins; ++a) out << (a ? " " : "") << fp17(p.lambda[a]);
    out << "\n";
    for (int a = 0; a < p.num_spins; ++a) {
        for (int b = 0; b < p.num_spins; ++b) out << (b ? " " : "") << fp17(p.j.at(a, b));
        out << "\n";
    }
    return out.str();
}

IsingProblem ising_from_text(const std::string& text) {
    std::istringstream in(text);
    IsingProblem p;
    if (!(in >> p.num_spins) || p.num_spins <= 0) throw ParseError("bad spin count");
    p.lambda.assign(p.num_spins, 0.0);
    p.j = Mat(p.num_spins, p.num_spins);
    for (int a = 0; a < p.num_spins; ++a)
        if (!(in >> p.lambda[a])) throw ParseError("short lambda vector");
    for (int a = 0; a < p.num_spins; ++a)
        for (int b = 0; b < p.num_spins; ++b)
            if (!(in >> p.j.at(a, b))) throw ParseError("short coupling matrix");
    return p;
}

}  // namespace cimra
