#include "featcomp/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace featcomp::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr Ops kScalar{dot_scalar, axpy_scalar};

bool scalar_forced() {
    const char* v = std::getenv("FEATCOMP_SIMD");
    return v != nullptr && std::strcmp(v, "scalar") == 0;
}

Isa pick() {
    if (scalar_forced()) return Isa::Scalar;
    if (avx2_ops() != nullptr) return Isa::Avx2;
    if (neon_ops() != nullptr) return Isa::Neon;
    return Isa::Scalar;
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
        default: return "scalar";
    }
}

const Ops& scalar_ops() { return kScalar; }

Isa active_isa() {
    static const Isa isa = pick();
    return isa;
}

const Ops& active_ops() {
    static const Ops& ops = [] () -> const Ops& {
        switch (active_isa()) {
            case Isa::Avx2: return *avx2_ops();
            case Isa::Neon: return *neon_ops();
            default: return kScalar;
        }
    }();
    return ops;
}

}  // namespace featcomp::kernels
