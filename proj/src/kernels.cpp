#include "cimra/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cimra::kern {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Kernels& active_kernels() {
    static const Kernels* selected = [] {
        const char* force = std::getenv("CIMRA_KERNEL");
        if (force != nullptr && std::strcmp(force, "scalar") == 0) return &scalar_kernels();
#if defined(CIMRA_HAVE_AVX2_TU)
        if (force != nullptr && std::strcmp(force, "avx2") == 0) return &avx2_kernels();
        if (avx2_supported()) return &avx2_kernels();
#endif
        return &scalar_kernels();
    }();
    return *selected;
}

}  // namespace cimra::kern
