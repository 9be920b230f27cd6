#include "cimra/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "cimra/kernels.hpp"

namespace cimra {

double sa_temperature(double t_initial, int sweep) {
    if (sweep < 1) throw std::invalid_argument("sweep index starts at 1");
    return t_initial / std::log(1.0 + static_cast<double>(sweep));
}

namespace {

constexpr std::uint64_t kInitTag = 0x11;
constexpr std::uint64_t kOrderTag = 0x22;
constexpr std::uint64_t kFlipTag = 0x33;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Shared binary-network state: spins, local fields kept incrementally, the
// running quadratic-form energy, and constraint counters so feasibility is
// O(1) after every update.
struct BinaryState {
    const NetworkWeights* nw;
    int n;
    int ne;
    int nc;
    std::vector<std::uint8_t> x;
    std::vector<double> h;  // h_a = sum_b w_ab x_b - theta_a
    std::vector<int> row_cnt;
    std::vector<int> col_cnt;
    int bad_rows = 0;
    int bad_cols = 0;
    double energy = 0.0;

    BinaryState(const NetworkWeights& w, Rng& init_rng)
        : nw(&w), n(w.num_spins()), ne(w.num_entities), nc(w.num_channels) {
        x.resize(n);
        for (int a = 0; a < n; ++a) x[a] = init_rng.uniform01() < 0.5 ? 1 : 0;
        std::vector<double> xd(n);
        for (int a = 0; a < n; ++a) xd[a] = x[a];
        h.resize(n);
        kern::active_kernels().matvec(w.w.data.data(), xd.data(), h.data(), n);
        for (int a = 0; a < n; ++a) h[a] -= w.theta[a];
        energy = nn_energy(w, x);
        row_cnt.assign(ne, 0);
        col_cnt.assign(nc, 0);
        for (int a = 0; a < n; ++a)
            if (x[a]) {
                ++row_cnt[a / nc];
                ++col_cnt[a % nc];
            }
        for (int i = 0; i < ne; ++i) bad_rows += row_cnt[i] != 1 ? 1 : 0;
        for (int j = 0; j < nc; ++j) bad_cols += col_cnt[j] != 2 ? 1 : 0;
    }

    // Sets spin a to v; returns whether it changed.
    bool set(int a, bool v) {
        if (static_cast<bool>(x[a]) == v) return false;
        const double delta = v ? 1.0 : -1.0;
        // Flipping a by delta changes the energy by -delta * h_a.
        energy -= delta * h[a];
        x[a] = v ? 1 : 0;
        const int i = a / nc;
        const int j = a % nc;
        const int d = v ? 1 : -1;
        bad_rows -= row_cnt[i] != 1 ? 1 : 0;
        row_cnt[i] += d;
        bad_rows += row_cnt[i] != 1 ? 1 : 0;
        bad_cols -= col_cnt[j] != 2 ? 1 : 0;
        col_cnt[j] += d;
        bad_cols += col_cnt[j] != 2 ? 1 : 0;
        kern::active_kernels().axpy(delta, nw->w.row(a), h.data(), n);
        return true;
    }

    bool feasible() const { return bad_rows == 0 && bad_cols == 0; }
};

}  // namespace

BinarySolveResult hopfield_solve(const NetworkWeights& nw, const RateTable& table,
                                 std::uint64_t seed, const UpdateObserver& observer) {
    Rng init_rng(derive_seed(seed, kInitTag));
    Rng order_rng(derive_seed(seed, kOrderTag));
    BinaryState st(nw, init_rng);

    std::vector<int> order(st.n);
    std::iota(order.begin(), order.end(), 0);

    BinarySolveResult out;
    const int max_sweeps = 10 * st.n;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        order_rng.shuffle(order);
        int changed = 0;
        for (int a : order) {
            const bool v = st.h[a] > 0.0;
            const bool flipped = st.set(a, v);
            changed += flipped ? 1 : 0;
            ++out.updates;
            if (observer) observer(a, flipped, st.energy);
        }
        out.sweeps = sweep + 1;
        if (changed == 0) break;
    }

    out.feasible_found = st.feasible();
    DecodeResult dec = decode_binary(st.x, nw.num_entities, nw.num_channels, table);
    out.assignment = std::move(dec.assignment);
    out.repaired = dec.repaired;
    out.energy = st.energy;
    return out;
}

BinarySolveResult sa_solve(const NetworkWeights& nw, const RateTable& table, const SaConfig& cfg,
                           const UpdateObserver& observer) {
    if (cfg.num_sweeps < 1) throw std::invalid_argument("num_sweeps < 1");
    Rng init_rng(derive_seed(cfg.seed, kInitTag));
    Rng order_rng(derive_seed(cfg.seed, kOrderTag));
    Rng flip_rng(derive_seed(cfg.seed, kFlipTag));
    BinaryState st(nw, init_rng);

    std::vector<int> order(st.n);
    std::iota(order.begin(), order.end(), 0);

    BinarySolveResult out;
    std::vector<std::uint8_t> best_x;
    double best_energy = 0.0;
    auto consider = [&]() {
        if (!st.feasible()) return;
        if (!out.feasible_found || st.energy < best_energy) {
            out.feasible_found = true;
            best_energy = st.energy;
            best_x = st.x;
        }
    };
    consider();

    for (int sweep = 1; sweep <= cfg.num_sweeps; ++sweep) {
        const double t = sa_temperature(cfg.t_initial, sweep);
        order_rng.shuffle(order);
        for (int a : order) {
            const double p_one = sigmoid(st.h[a] / t);
            const bool v = flip_rng.uniform01() < p_one;
            const bool flipped = st.set(a, v);
            ++out.updates;
            if (flipped) consider();
            if (observer) observer(a, flipped, st.energy);
        }
        out.sweeps = sweep;
    }

    if (out.feasible_found) {
        DecodeResult dec = decode_binary(best_x, nw.num_entities, nw.num_channels, table);
        out.assignment = std::move(dec.assignment);
        out.repaired = false;
        out.energy = best_energy;
    } else {
        DecodeResult dec = decode_binary(st.x, nw.num_entities, nw.num_channels, table);
        out.assignment = std::move(dec.assignment);
        out.repaired = dec.repaired;
        out.energy = st.energy;
    }
    return out;
}

Assignment cnoma_solve(const CnrMatrix& cnr, const RadioConfig& config) {
    config.validate();
    const int nc = config.num_channels;
    const int ne = 2 * nc;
    const int nu = cnr.num_users;
    if (nu < 2 || nu > ne) throw std::invalid_argument("user count out of range");

    // Real users ranked by mean CNR, dummies trailing.
    std::vector<int> ranked(nu);
    std::iota(ranked.begin(), ranked.end(), 0);
    std::vector<double> mean(nu, 0.0);
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nc; ++j) mean[i] += cnr.gamma.at(i, j);
        mean[i] /= nc;
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](int a, int b) { return mean[a] > mean[b]; });
    for (int d = nu; d < ne; ++d) ranked.push_back(d);

    const double q_even = config.total_power_w / nc;
    const double bc = config.channel_bandwidth_hz();
    const double a_factor = config.qos_factor();

    auto pair_value = [&](int u, int v, int j) {
        const bool u_real = u < nu;
        const bool v_real = v < nu;
        if (!u_real && !v_real) return 0.0;
        if (u_real != v_real) {
            const int r = u_real ? u : v;
            return single_rate(cnr.gamma.at(r, j), q_even, bc);
        }
        const double gu = cnr.gamma.at(u, j);
        const double gv = cnr.gamma.at(v, j);
        const bool u_strong = cnr_stronger(gu, u, gv, v);
        const double gs = u_strong ? gu : gv;
        const double gw = u_strong ? gv : gu;
        if (q_even < pair_qos_floor(gs, gw, a_factor, a_factor)) return -1e300;
        const PairRates pr = pair_rates(gs, gw, q_even, bc, a_factor);
        return pr.strong + pr.weak;
    };

    Assignment out(ne, nc, nu);
    std::vector<bool> claimed(nc, false);
    for (int k = 0; k < nc; ++k) {
        const int u = ranked[k];
        const int v = ranked[nc + k];
        int best_j = -1;
        double best_v = 0.0;
        for (int j = 0; j < nc; ++j) {
            if (claimed[j]) continue;
            const double val = pair_value(u, v, j);
            if (best_j < 0 || val > best_v) {
                best_j = j;
                best_v = val;
            }
        }
        claimed[best_j] = true;
        out.cell(u, best_j) = 1;
        out.cell(v, best_j) = 1;
    }
    return out;
}

std::uint64_t es_state_count(int num_channels) {
    if (num_channels < 1 || num_channels > kEsMaxChannels)
        throw ProblemTooLargeError("state count supported for 1..7 channels");
    std::uint64_t f = 1;
    for (int v = 2; v <= 2 * num_channels; ++v) f *= static_cast<std::uint64_t>(v);
    return f >> num_channels;
}

namespace {

struct EsContext {
    int ne;
    int nc;
    const RateTable* table;
    std::vector<double> pairval;   // (a * ne + b) * nc + j, a < b
    std::vector<int> pair_a, pair_b;
    std::vector<double> matchval;  // pair slot p on channel j: p * nc + j
    std::vector<int> free_ch;
    std::vector<int> best_channel_of_pair;
    std::vector<int> cur_channel_of_pair;
    std::vector<int> best_pair_a, best_pair_b;
    double best = 0.0;
    bool have_best = false;
    std::uint64_t states = 0;

    void assign_channels(int depth, int free_count, double acc) {
        if (depth == nc) {
            ++states;
            if (!have_best || acc > best) {
                have_best = true;
                best = acc;
                best_channel_of_pair = cur_channel_of_pair;
                best_pair_a = pair_a;
                best_pair_b = pair_b;
            }
            return;
        }
        const double* row = matchval.data() + static_cast<std::size_t>(depth) * nc;
        for (int m = 0; m < free_count; ++m) {
            const int j = free_ch[m];
            std::swap(free_ch[m], free_ch[free_count - 1]);
            cur_channel_of_pair[depth] = j;
            assign_channels(depth + 1, free_count - 1, acc + row[j]);
            std::swap(free_ch[m], free_ch[free_count - 1]);
        }
    }

    void build_matching(std::uint32_t unpaired, int depth) {
        if (depth == nc) {
            for (int p = 0; p < nc; ++p) {
                const std::size_t base =
                    (static_cast<std::size_t>(pair_a[p]) * ne + pair_b[p]) * nc;
                for (int j = 0; j < nc; ++j)
                    matchval[static_cast<std::size_t>(p) * nc + j] = pairval[base + j];
            }
            assign_channels(0, nc, 0.0);
            return;
        }
        const int a = std::countr_zero(unpaired);
        const std::uint32_t rest = unpaired & ~(1u << a);
        for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1) {
            const int b = std::countr_zero(bits);
            pair_a[depth] = a;
            pair_b[depth] = b;
            build_matching(rest & ~(1u << b), depth + 1);
        }
    }
};

}  // namespace

EsResult es_solve(const RateTable& table) {
    const int nc = table.num_channels;
    if (nc > kEsMaxChannels)
        throw ProblemTooLargeError("exhaustive search bounded at 7 channels");
    const int ne = table.num_entities;

    EsContext ctx;
    ctx.ne = ne;
    ctx.nc = nc;
    ctx.table = &table;
    ctx.pairval.assign(static_cast<std::size_t>(ne) * ne * nc, 0.0);
    for (int a = 0; a < ne; ++a)
        for (int b = a + 1; b < ne; ++b)
            for (int j = 0; j < nc; ++j)
                ctx.pairval[(static_cast<std::size_t>(a) * ne + b) * nc + j] =
                    table.pair_sum(a, j, b);
    ctx.pair_a.assign(nc, 0);
    ctx.pair_b.assign(nc, 0);
    ctx.matchval.assign(static_cast<std::size_t>(nc) * nc, 0.0);
    ctx.free_ch.resize(nc);
    std::iota(ctx.free_ch.begin(), ctx.free_ch.end(), 0);
    ctx.cur_channel_of_pair.assign(nc, -1);

    ctx.build_matching((1u << ne) - 1, 0);

    EsResult out;
    out.states = ctx.states;
    out.best_value = ctx.best;
    out.assignment = Assignment(ne, nc, table.num_real_users);
    for (int p = 0; p < nc; ++p) {
        out.assignment.cell(ctx.best_pair_a[p], ctx.best_channel_of_pair[p]) = 1;
        out.assignment.cell(ctx.best_pair_b[p], ctx.best_channel_of_pair[p]) = 1;
    }
    return out;
}

Assignment random_solve(int num_channels, int num_real_users, std::uint64_t seed) {
    const int ne = 2 * num_channels;
    if (num_real_users < 2 || num_real_users > ne)
        throw std::invalid_argument("user count out of range");
    std::vector<int> perm(ne);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    Assignment out(ne, num_channels, num_real_users);
    for (int j = 0; j < num_channels; ++j) {
        out.cell(perm[2 * j], j) = 1;
        out.cell(perm[2 * j + 1], j) = 1;
    }
    return out;
}

}  // namespace cimra
