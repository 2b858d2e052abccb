/// @file  rng.hpp
/// @brief Portable seeded random source.
///
/// All randomized operations draw from std::mt19937_64, whose output
/// sequence is fixed by the C++ standard. The standard distributions are
/// implementation-defined, so bounded integers and reals are derived here
/// from the raw 64-bit words. Results are therefore bit-identical across
/// compilers and platforms for a given seed.

#pragma once

#include <cstdint>
#include <random>

namespace lloc {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
	return seed ^ splitmix64(stream);
}

class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	std::uint64_t next() { return engine_(); }

	/// Uniform integer in [0, bound). bound must be positive.
	std::uint64_t uniform_index(std::uint64_t bound) {
		// Rejection keeps the draw exactly uniform.
		const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
		std::uint64_t x = engine_();
		while (x > limit)
			x = engine_();
		return x % bound;
	}

	/// Uniform double in [0, 1) with 53 random bits.
	double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
	std::mt19937_64 engine_;
};

} // namespace lloc
