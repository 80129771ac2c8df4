#pragma once
// Dense double-precision inner loops. A scalar reference plus SIMD variants picked once at startup.

#include <cstddef>

namespace featcomp::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

struct Ops {
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const Ops& scalar_ops();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const Ops* avx2_ops();
const Ops* neon_ops();

/// Best available variant; FEATCOMP_SIMD=scalar in the environment forces the reference path.
Isa active_isa();
const Ops& active_ops();

inline double dot(const double* a, const double* b, std::size_t n) { return active_ops().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { active_ops().axpy(alpha, x, y, n); }

}  // namespace featcomp::kernels
