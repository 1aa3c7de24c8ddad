#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace aperiodic::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

/// Compiled in and supported by the running CPU.
bool isa_available(Isa isa);

/// Kernel set in use: a forced choice, else APERIODIC_SIMD from the
/// environment, else the best available.
Isa active_isa();

/// Pins the kernel set (tests, benchmarking); nullopt restores auto-selection.
void force_isa(std::optional<Isa> isa);

struct PhaseSum {
  double re = 0.0;
  double im = 0.0;
};

/// sum_i exp(-2 pi i (kx x_i + ky y_i)); `y` empty for one-dimensional input.
PhaseSum phase_sum(std::span<const double> x, std::span<const double> y, double kx, double ky);
PhaseSum phase_sum(Isa isa, std::span<const double> x, std::span<const double> y, double kx, double ky);

/// out[r][i] = sum_c m[r * cols + c] * in[c][i], accumulated in column order.
/// Results are bit-identical across kernel sets.
void project(std::span<const double> m, int rows, int cols, std::span<const double* const> in, std::size_t count,
             std::span<double* const> out);
void project(Isa isa, std::span<const double> m, int rows, int cols, std::span<const double* const> in,
             std::size_t count, std::span<double* const> out);

}  // namespace aperiodic::simd
