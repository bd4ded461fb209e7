#pragma once

#include <cstdint>
#include <random>

namespace ssrc {

/// All randomness in the library flows through this engine so that equal seeds
/// reproduce equal sample sequences regardless of platform or scheduling.
using Rng = std::mt19937_64;

/// Decorrelated child seed for an independent stream (splitmix64 of base xor stream tag).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform on [0, 1), 53-bit resolution.
double uniform01(Rng& rng);

double uniform_in(Rng& rng, double lo, double hi);
double log_uniform_in(Rng& rng, double lo, double hi);

/// Standard normal via Box-Muller (one variate per call; no cached state).
double standard_normal(Rng& rng);

}  // namespace ssrc
