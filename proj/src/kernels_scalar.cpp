#include "cimra/kernels.hpp"

namespace cimra::kern {

namespace {

void matvec_scalar(const double* m, const double* x, double* y, std::size_t n) {
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = m + r * n;
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void cim_step_scalar(double* c, double* s, const double* jc, const double* js,
                     const double* field, double pump, double dt, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ci = c[i];
        const double si = s[i];
        const double amp2 = ci * ci + si * si;
        const double dc = (-1.0 + pump - amp2) * ci + jc[i] - field[i];
        const double ds = (-1.0 - pump - amp2) * si + js[i] - field[i];
        c[i] = ci + dt * dc;
        s[i] = si + dt * ds;
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{"scalar", matvec_scalar, axpy_scalar, dot_scalar, cim_step_scalar};
    return k;
}

}  // namespace cimra::kern
