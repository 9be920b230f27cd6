#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "cimra/common.hpp"
#include "cimra/kernels.hpp"
#include "doctest.h"

using namespace cimra;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

void naive_matvec(const double* m, const double* x, double* y, std::size_t n) {
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += m[r * n + c] * x[c];
        y[r] = acc;
    }
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 1e-300;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return num / den;
}

const std::size_t kSizes[] = {1, 2, 3, 7, 8, 16, 31, 64, 129};

}  // namespace

TEST_CASE("scalar matvec matches a naive triple-checked loop") {
    Rng rng(101);
    const auto& k = kern::scalar_kernels();
    for (std::size_t n : kSizes) {
        auto m = random_vec(rng, n * n);
        auto x = random_vec(rng, n);
        std::vector<double> got(n), want(n);
        k.matvec(m.data(), x.data(), got.data(), n);
        naive_matvec(m.data(), x.data(), want.data(), n);
        CHECK(rel_diff(got, want) <= 1e-13);
    }
}

TEST_CASE("scalar axpy and dot match direct evaluation") {
    Rng rng(102);
    const auto& k = kern::scalar_kernels();
    for (std::size_t n : kSizes) {
        auto x = random_vec(rng, n);
        auto y = random_vec(rng, n);
        const double a = rng.uniform(-3.0, 3.0);

        auto y2 = y;
        k.axpy(a, x.data(), y2.data(), n);
        double dot_want = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(y2[i] == doctest::Approx(y[i] + a * x[i]).epsilon(1e-14));
            dot_want += x[i] * y[i];
        }
        const double dot_got = k.dot(x.data(), y.data(), n);
        CHECK(dot_got == doctest::Approx(dot_want).epsilon(1e-12));
    }
}

TEST_CASE("scalar cim_step applies the two-quadrature Euler update") {
    Rng rng(103);
    const auto& k = kern::scalar_kernels();
    const std::size_t n = 17;
    auto c = random_vec(rng, n, -1.5, 1.5);
    auto s = random_vec(rng, n, -1.5, 1.5);
    auto jc = random_vec(rng, n);
    auto js = random_vec(rng, n);
    auto field = random_vec(rng, n);
    const double pump = 1.7, dt = 0.03;

    auto c2 = c, s2 = s;
    k.cim_step(c2.data(), s2.data(), jc.data(), js.data(), field.data(), pump, dt, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sq = c[i] * c[i] + s[i] * s[i];
        const double dc = (-1.0 + pump - sq) * c[i] + jc[i] - field[i];
        const double ds = (-1.0 - pump - sq) * s[i] + js[i] - field[i];
        CHECK(c2[i] == doctest::Approx(c[i] + dt * dc).epsilon(1e-14));
        CHECK(s2[i] == doctest::Approx(s[i] + dt * ds).epsilon(1e-14));
    }
}

TEST_CASE("active kernel set is one of the known implementations") {
    const auto& k = kern::active_kernels();
    const std::string name = k.name;
    CHECK((name == "scalar" || name == "avx2"));
    REQUIRE(k.matvec != nullptr);
    REQUIRE(k.axpy != nullptr);
    REQUIRE(k.dot != nullptr);
    REQUIRE(k.cim_step != nullptr);
}

#if defined(CIMRA_TEST_HAS_AVX2)
namespace cimra::kern {
const Kernels& avx2_kernels();  // lives in the vector-flag translation unit
}

TEST_CASE("vector kernels agree with scalar on every op") {
    if (!kern::avx2_supported()) return;
    const auto& sc = kern::scalar_kernels();
    const auto& vx = kern::avx2_kernels();
    Rng rng(104);
    for (std::size_t n : kSizes) {
        auto m = random_vec(rng, n * n);
        auto x = random_vec(rng, n);
        auto y = random_vec(rng, n);
        const double a = rng.uniform(-3.0, 3.0);

        std::vector<double> ys(n), yv(n);
        sc.matvec(m.data(), x.data(), ys.data(), n);
        vx.matvec(m.data(), x.data(), yv.data(), n);
        CHECK(rel_diff(yv, ys) <= 1e-12);

        auto ax_s = y, ax_v = y;
        sc.axpy(a, x.data(), ax_s.data(), n);
        vx.axpy(a, x.data(), ax_v.data(), n);
        CHECK(rel_diff(ax_v, ax_s) <= 1e-12);

        const double ds = sc.dot(x.data(), y.data(), n);
        const double dv = vx.dot(x.data(), y.data(), n);
        CHECK(dv == doctest::Approx(ds).epsilon(1e-12));

        auto cs = random_vec(rng, n, -1.5, 1.5), ss = random_vec(rng, n, -1.5, 1.5);
        auto cv = cs, sv = ss;
        auto jc = random_vec(rng, n), js = random_vec(rng, n), f = random_vec(rng, n);
        sc.cim_step(cs.data(), ss.data(), jc.data(), js.data(), f.data(), 1.9, 0.02, n);
        vx.cim_step(cv.data(), sv.data(), jc.data(), js.data(), f.data(), 1.9, 0.02, n);
        CHECK(rel_diff(cv, cs) <= 1e-12);
        CHECK(rel_diff(sv, ss) <= 1e-12);
    }
}
#endif
