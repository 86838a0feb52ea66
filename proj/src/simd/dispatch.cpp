#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "oslab/simd.hpp"

namespace oslab::simd {

namespace {

constexpr KernelTable kScalar{&scalar::dot, &scalar::axpy};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{&avx2::dot, &avx2::axpy};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon{&neon::dot, &neon::axpy};
#endif

Isa detect() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#elif defined(__aarch64__)
  return Isa::neon;
#endif
  return Isa::scalar;
}

Isa initial_isa() {
  const Isa best = detect();
  const char* env = std::getenv("OSLAB_SIMD");
  if (env == nullptr) return best;
  const std::string want(env);
  if (want == "scalar") return Isa::scalar;
  if (want == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  if (want == "neon" && isa_available(Isa::neon)) return Isa::neon;
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("SIMD target not available on this host: " + std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2: if (isa_available(isa)) return kAvx2; break;
#endif
#if defined(__aarch64__)
    case Isa::neon: return kNeon;
#endif
    default: break;
  }
  return kScalar;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  return kernels(active_isa()).dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  kernels(active_isa()).axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  if (a.size() != y.size() * cols) throw std::invalid_argument("gemv: shape mismatch");
  const auto dot_fn = kernels(active_isa()).dot;
  for (std::size_t r = 0; r < y.size(); ++r) y[r] = dot_fn(a.data() + r * cols, x.data(), cols);
}

}  // namespace oslab::simd
