#include <atomic>
#include <cstdlib>

#include "aperiodic/core/error.hpp"
#include "simd/kernels_impl.hpp"

namespace aperiodic::simd {
namespace {

// -1: automatic; otherwise an Isa value.
std::atomic<int> g_forced{-1};

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &scalar::kTable;
    case Isa::Avx2:
#if defined(APERIODIC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      if (__builtin_cpu_supports("avx2")) return &avx2::kTable;
#endif
      return nullptr;
    case Isa::Neon:
#if defined(APERIODIC_HAVE_NEON)
      return &neon::kTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Isa automatic_isa() {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("APERIODIC_SIMD")) {
      if (auto isa = parse_isa(env); isa && isa_available(*isa)) return *isa;
    }
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
  }();
  return chosen;
}

const KernelTable& checked_table(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (!t) fail(ErrorCode::InvalidArgument, std::string("kernel set unavailable: ") + std::string(isa_name(isa)));
  return *t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "neon") return Isa::Neon;
  return std::nullopt;
}

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

Isa active_isa() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  return forced >= 0 ? static_cast<Isa>(forced) : automatic_isa();
}

void force_isa(std::optional<Isa> isa) {
  if (isa && !isa_available(*isa)) {
    fail(ErrorCode::InvalidArgument, std::string("kernel set unavailable: ") + std::string(isa_name(*isa)));
  }
  g_forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

PhaseSum phase_sum(std::span<const double> x, std::span<const double> y, double kx, double ky) {
  return phase_sum(active_isa(), x, y, kx, ky);
}

PhaseSum phase_sum(Isa isa, std::span<const double> x, std::span<const double> y, double kx, double ky) {
  if (!y.empty() && y.size() != x.size()) fail(ErrorCode::InvalidArgument, "phase_sum: coordinate length mismatch");
  return checked_table(isa).phase_sum(x.data(), y.empty() ? nullptr : y.data(), x.size(), kx, ky);
}

void project(std::span<const double> m, int rows, int cols, std::span<const double* const> in, std::size_t count,
             std::span<double* const> out) {
  project(active_isa(), m, rows, cols, in, count, out);
}

void project(Isa isa, std::span<const double> m, int rows, int cols, std::span<const double* const> in,
             std::size_t count, std::span<double* const> out) {
  if (rows < 1 || cols < 1 || m.size() != static_cast<std::size_t>(rows) * cols ||
      in.size() != static_cast<std::size_t>(cols) || out.size() != static_cast<std::size_t>(rows)) {
    fail(ErrorCode::InvalidArgument, "project: shape mismatch");
  }
  checked_table(isa).project(m.data(), rows, cols, in.data(), count, out.data());
}

}  // namespace aperiodic::simd
