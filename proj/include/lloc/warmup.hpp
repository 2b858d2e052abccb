/// @file  warmup.hpp
/// @brief Exact algorithm for instances that admit a violation-free embedding.
///
/// If some embedding satisfies every constraint, then from its leftmost
/// point p the pivot tournament of p is the left-to-right order. Trying each
/// pivot, sorting by its comparator and solving a linear feasibility problem
/// over the consecutive gaps either recovers such an embedding or proves
/// that none exists.

#pragma once

#include <lloc/instance.hpp>
#include <lloc/lp.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace lloc {

/// p followed by the other points sorted by "asserted closer to p". Returns
/// nullopt when p's comparator is not a strict total order.
std::optional<std::vector<Point>> order_by_pivot(const Instance& inst, Point p);

/// One constraint expressed over ordering positions: the distance from
/// `pivot` to `near` plus one is at most the distance from `pivot` to `far`.
struct GapRow {
	std::size_t pivot;
	std::size_t near;
	std::size_t far;
};

/// Linear system over the n-1 consecutive gaps of an ordering. Gap t
/// separates ordering positions t and t+1, and the distance between two
/// positions is the sum of the gaps between them.
struct GapSystem {
	std::vector<Point> ordering;
	std::vector<GapRow> rows;

	std::size_t gap_count() const { return ordering.empty() ? 0 : ordering.size() - 1; }
	/// Row as coefficients over the gaps: the row reads coefficients . d >= 1.
	IntRow coefficients(const GapRow& row) const;
};

/// One row per constraint of the instance, n * C(n-1, 2) rows.
GapSystem build_gap_system(const Instance& inst, const std::vector<Point>& ordering);

/// Equivalent smaller row set. Rows implied by another row under d >= 0
/// are dropped; returns nullopt when a row can never hold (the farther
/// point is nearer in the ordering on the same side of the pivot).
std::optional<std::vector<IntRow>> reduce_gap_system(const GapSystem& sys);

/// Exact check of every row of the system.
bool gap_system_satisfied(const GapSystem& sys, const std::vector<std::int64_t>& gaps);

/// Integer gaps d >= 0 satisfying every row, or infeasible. In floating
/// mode an unverifiable answer is numerical_failure; retry with exact.
LpSolution lp_feasible(const GapSystem& sys, LpMode mode = LpMode::floating);

/// Prefix sums of the gaps laid out along the ordering, first point at 0.
Embedding embedding_from_gaps(const std::vector<Point>& ordering, const std::vector<std::int64_t>& gaps);

struct ZeroSolveResult {
	/// A violation-free embedding, or nullopt when none exists.
	std::optional<Embedding> embedding;
	/// The pivot whose ordering succeeded.
	std::optional<Point> pivot;
	std::size_t consistent_pivots = 0;
	std::size_t lp_solves = 0;
	std::size_t exact_retries = 0;
};

/// Tries pivots in ascending order and returns the first success. Every
/// returned embedding has been checked to violate nothing. Instances with
/// fewer than 3 points have no constraints and get the identity embedding.
ZeroSolveResult solve_zero(const Instance& inst);

} // namespace lloc
