#pragma once

#include <cstddef>

namespace cimra::kern {

// Hot inner loops behind a function-pointer table. Scalar versions are the
// reference; vector variants must match them to tight floating-point
// tolerance (bit equality is not required, summation order differs).
struct Kernels {
    const char* name;

    // y = M x, M dense row-major n x n
    void (*matvec)(const double* m, const double* x, double* y, std::size_t n);

    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    double (*dot)(const double* x, const double* y, std::size_t n);

    // One explicit Euler update of the two-quadrature oscillator network:
    //   c += dt * ((-1 + pump - c^2 - s^2) c + jc - field)
    //   s += dt * ((-1 - pump - c^2 - s^2) s + js - field)
    // jc/js hold the coupling matvec results for the current state.
    void (*cim_step)(double* c, double* s, const double* jc, const double* js,
                     const double* field, double pump, double dt, std::size_t n);
};

const Kernels& scalar_kernels();

#if defined(CIMRA_HAVE_AVX2_TU)
const Kernels& avx2_kernels();
#endif

bool avx2_supported();

// Runtime selection: AVX2 when the CPU has it, else scalar. The environment
// variable CIMRA_KERNEL (values "scalar" or "avx2") overrides.
const Kernels& active_kernels();

}  // namespace cimra::kern
