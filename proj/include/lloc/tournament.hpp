/// @file  tournament.hpp
/// @brief Pivot tournaments and feedback arc sets on tournaments.
///
/// A feedback arc set of a tournament is represented by a vertex ordering:
/// the arcs pointing backwards under the ordering form the set, and the
/// ordering itself is a topological order of what remains.

#pragma once

#include <lloc/instance.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lloc {

/// Complete digraph with exactly one arc per vertex pair. Vertices are the
/// local indices 0..m-1; labels() maps them to point ids.
class Tournament {
public:
	/// All arcs point from the lower local index to the higher one.
	explicit Tournament(std::vector<Point> labels);

	std::size_t size() const noexcept { return labels_.size(); }
	const std::vector<Point>& labels() const noexcept { return labels_; }

	/// True when the arc between a and b points a -> b.
	bool arc(std::size_t a, std::size_t b) const { return adj_[a * size() + b] != 0; }
	/// Orients the pair {a, b} as a -> b.
	void set_arc(std::size_t a, std::size_t b);

	std::size_t indegree(std::size_t v) const;

private:
	std::vector<Point> labels_;
	std::vector<std::uint8_t> adj_;
};

/// Vertices [n] \ {p} in ascending order; arc i -> j iff i is asserted closer
/// to p than j.
Tournament pivot_tournament(const Instance& inst, Point p);

enum class FasMethod { indegree, indegree_local, exact };

const char* to_string(FasMethod method);

struct FasResult {
	/// Permutation of local vertex indices.
	std::vector<std::size_t> ordering;
	/// Arcs (x, y) with x placed after y.
	std::uint64_t back_arcs = 0;
	FasMethod method = FasMethod::indegree;
};

/// Arcs pointing backwards under `ordering`. Throws InvalidArgument when
/// `ordering` is not a permutation of the vertices.
std::uint64_t count_back_arcs(const Tournament& t, const std::vector<std::size_t>& ordering);

/// Ascending indegree, ties by ascending label.
FasResult fas_indegree(const Tournament& t);

/// Single-vertex reinsertion local search. A round visits every vertex once
/// (in ascending label order) and moves it to the position that reduces the
/// back-arc count the most, if any does; the search stops after a round
/// without improvement or after max_rounds rounds.
FasResult fas_local(const Tournament& t, const FasResult& start, std::size_t max_rounds = 100);

/// Largest tournament fas_exact accepts.
inline constexpr std::size_t kFasExactMaxVertices = 16;

/// Minimum feedback arc set by dynamic programming over vertex subsets;
/// among optimal orderings the lexicographically smallest is returned.
/// Throws TooLarge above kFasExactMaxVertices.
FasResult fas_exact(const Tournament& t);

/// Point ids in the order given by fas, a topological order of the
/// tournament with the back arcs removed.
std::vector<Point> topological_order(const FasResult& fas, const Tournament& t);

} // namespace lloc
