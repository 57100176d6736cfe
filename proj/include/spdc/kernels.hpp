#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference implementation
// and an AVX2 variant; the active variant is chosen once at startup from CPUID.
// Variants evaluate the same operations in the same order per element (no FMA
// contraction), so their outputs are bit-identical.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

#include "spdc/dispersion.hpp"

namespace spdc::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best variant supported by the running CPU.
Isa detected_isa();

/// Variant used by the dispatched entry points below.
Isa active_isa();

/// Forces a variant (tests and benchmarks). Requesting an unsupported ISA falls back to scalar.
void set_isa(Isa isa);

/// Refractive index n(l) for a batch of wavelengths in um.
void sellmeier_index(const SellmeierCoefficients& c, std::span<const double> lambda_um,
                     std::span<double> n_out);

/// out[j] = sum_t taps[t] * in[j + t - r] with zero padding, r = (taps.size() - 1) / 2.
/// taps.size() must be odd. in and out must not alias.
void convolve_same(std::span<const double> in, std::span<const double> taps,
                   std::span<double> out);

/// sum |z|^2, accumulated in four interleaved partial sums (lane j % 4).
double sum_abs2(std::span<const std::complex<double>> z);

namespace scalar {
void sellmeier_index(const SellmeierCoefficients& c, std::span<const double> lambda_um,
                     std::span<double> n_out);
void convolve_same(std::span<const double> in, std::span<const double> taps,
                   std::span<double> out);
double sum_abs2(std::span<const std::complex<double>> z);
}  // namespace scalar

namespace avx2 {
void sellmeier_index(const SellmeierCoefficients& c, std::span<const double> lambda_um,
                     std::span<double> n_out);
void convolve_same(std::span<const double> in, std::span<const double> taps,
                   std::span<double> out);
double sum_abs2(std::span<const std::complex<double>> z);
}  // namespace avx2

}  // namespace spdc::kernels
