/// @file  cli.hpp
/// @brief The `lloc` command line as a library, so tests can drive it in-process.
#pragma once

#include <lloc/instance.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lloc::cli {

/// Process exit codes.
enum ExitCode : int {
	kOk = 0,
	kParseError = 2,
	kFlagError = 3,
	kSizeGuard = 4,
};

enum class Distribution { uniform, clustered, mixed_gap };

struct GenSpec {
	std::size_t n = 0;
	Distribution dist = Distribution::uniform;
	/// clustered: point i joins cluster i mod clusters; centers are uniform
	/// in [0, 1] and points uniform in center +- spread.
	std::size_t clusters = 5;
	double spread = 0.01;
	/// mixed_gap: n must equal 2k + 1.
	std::size_t k = 0;
	std::uint64_t seed = 0;
};

/// Ground-truth positions for a generated instance. Random draws that
/// produce an exact distance tie are redrawn (from the same stream).
Embedding generate_positions(const GenSpec& spec);

/// Instance realized by the positions (lower-index tie breaking for
/// mixed_gap, whose positions contain ties).
Instance realize(const GenSpec& spec, const Embedding& positions);

/// Runs `lloc <args...>`; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lloc::cli
