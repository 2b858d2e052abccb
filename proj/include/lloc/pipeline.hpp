/// @file  pipeline.hpp
/// @brief Approximation pipeline: one candidate embedding per pivot, best wins.
///
/// For a pivot p the points are ordered by a feedback-arc-set ordering of
/// p's tournament (p first), cut into b contiguous buckets, the instance is
/// retracted onto the buckets, the small weighted problem is solved, and
/// the bucket positions are extended back to all points.
#pragma once

#include <lloc/instance.hpp>
#include <lloc/tournament.hpp>
#include <lloc/wlloc.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lloc {

enum class ExtensionMode { collapse, jitter };
enum class SelectionMode { exact_count, estimate };

const char* to_string(ExtensionMode mode);
const char* to_string(SelectionMode mode);

/// Default sample count for estimate selection.
inline constexpr std::uint64_t kDefaultEstimateSamples = 50'000;
/// Jitter half-width relative to the smallest positive bucket gap.
inline constexpr double kJitterScale = 1e-3;

struct PipelineConfig {
	/// Bucket count. When unset, derived from epsilon.
	std::optional<std::size_t> b;
	/// In (0, 1); gives b = max(3, ceil(epsilon^(-1/8))), capped at n.
	std::optional<double> epsilon;
	FasMethod fas = FasMethod::indegree_local;
	ExtensionMode extension = ExtensionMode::collapse;
	SelectionMode selection = SelectionMode::exact_count;
	std::uint64_t estimate_samples = kDefaultEstimateSamples;
	/// Sampling seed shared by every candidate under estimate selection.
	std::uint64_t estimate_seed = 0;
	std::size_t exact_cap = kDefaultExactCap;
	std::size_t heuristic_restarts = 20;
	/// Heuristic runs for pivot p use derive_seed(seed, p).
	std::uint64_t seed = 0;
	/// Pivots to try; all points when unset.
	std::optional<std::vector<Point>> pivots;
	/// Worker threads for the pivot loop, 0 = hardware concurrency. Results do
	/// not depend on it.
	std::size_t threads = 1;
};

/// Resolved bucket count for n points. Throws InvalidArgument when neither
/// or both of b and epsilon are set, epsilon is outside (0, 1), or b is not
/// in [3, n].
std::size_t resolve_bucket_count(const PipelineConfig& cfg, std::size_t n);

/// Cuts `ordering` into b contiguous blocks; the first (n mod b) blocks get
/// one extra element. Throws InvalidArgument unless 3 <= b <= n.
Partition bucketize(const std::vector<Point>& ordering, std::size_t b);

/// Lifts bucket positions g to all points.
///
/// collapse: every point of bucket j sits at g[j].
/// jitter:   bucket j is spread evenly over [g[j] - d, g[j] + d] in its
///           stored order, d = kJitterScale * (smallest positive gap of g).
///           The order runs left to right when bucket j lies right of bucket
///           0 (for bucket 0: when the next distinct bucket lies right of
///           it), and right to left otherwise.
Embedding extend(std::span<const double> g, const Partition& buckets, ExtensionMode mode);

struct StageTimes {
	double fas_ms = 0;
	double retraction_ms = 0;
	double solve_ms = 0;
	double extend_ms = 0;
	double evaluate_ms = 0;
};

struct Candidate {
	Point pivot = 0;
	std::uint64_t back_arcs = 0;
	std::int64_t retraction_violated_weight = 0;
	/// False when the bucket problem went to solve_heuristic.
	bool exact_solve = true;
	/// Set under exact_count selection.
	std::optional<std::uint64_t> violated_count;
	/// Set under estimate selection: sampled violated fraction.
	std::optional<double> estimated_violated_fraction;
	Embedding embedding;
	StageTimes times;
};

/// One candidate: tournament, FAS, bucketing, retraction, bucket solve,
/// extension and scoring per cfg. b must already be valid for the instance.
Candidate solve_for_pivot(const Instance& inst, Point p, const PipelineConfig& cfg);

struct SolveReport {
	PipelineConfig config;
	std::size_t b = 0;
	Point chosen_pivot = 0;
	std::vector<Candidate> candidates;
	Embedding embedding;
	std::uint64_t violated_count = 0;
	std::uint64_t total_constraints = 0;
	double satisfied_fraction = 1.0;
	/// Sum of the per-candidate stage times plus the final recount.
	StageTimes times;
	double recount_ms = 0;
	double total_ms = 0;
};

/// Runs every pivot of cfg and keeps the candidate with the fewest
/// (counted or estimated) violations, ties to the smaller pivot. The
/// winner's violated count is always recounted exactly.
SolveReport solve(const Instance& inst, const PipelineConfig& cfg);

/// Report as one JSON document with keys chosen_pivot, satisfied_fraction,
/// violated_count, total_constraints, config, candidates and timings_ms.
/// Without timings the text is a pure function of instance and config.
std::string report_json(const SolveReport& report, bool include_timings = true);

/// Threads to use: `requested`, or the hardware concurrency when 0.
std::size_t effective_threads(std::size_t requested);

} // namespace lloc
