#pragma once

// Data-parallel inner loops used by the Monte-Carlo paths: path synthesis
// (dense factor times a normal vector), quadratic forms and rank-one moment
// accumulation.
//
// Every kernel has a scalar reference and vector variants. All variants
// reduce in the same order (four interleaved partial sums, combined as
// (s0 + s1) + (s2 + s3), then a sequential tail) and never fuse multiply
// with add, so they agree bit for bit. That keeps seeded runs reproducible
// regardless of which ISA the dispatcher picks.

#include <cstddef>
#include <span>
#include <string_view>

namespace oslab::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

std::string_view isa_name(Isa isa);

bool isa_available(Isa isa);

// Widest ISA supported by the host unless OSLAB_SIMD names another one.
Isa active_isa();

// Pins dispatch to `isa`; throws std::invalid_argument when unavailable.
void force_isa(Isa isa);

const KernelTable& kernels(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// y = A x, A dense row-major with y.size() rows and x.size() columns.
void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace oslab::simd
