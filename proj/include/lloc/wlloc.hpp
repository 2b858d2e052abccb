/// @file  wlloc.hpp
/// @brief Weighted instances on a few cluster indices: retraction, exact
///        arrangement solver and coordinate-descent heuristic.

#pragma once

#include <lloc/instance.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lloc {

/// Nonnegative integer weight w(i, j, k) on every ordered triple of distinct
/// indices in [0, b): the weight lost when i is not strictly closer to j
/// than to k.
class WllocInstance {
public:
	explicit WllocInstance(std::size_t b);

	std::size_t size() const noexcept { return b_; }
	std::int64_t weight(std::size_t i, std::size_t j, std::size_t k) const {
		return w_[index(i, j, k)];
	}
	void set_weight(std::size_t i, std::size_t j, std::size_t k, std::int64_t w);
	void add_weight(std::size_t i, std::size_t j, std::size_t k, std::int64_t w) {
		w_[index(i, j, k)] += w;
	}
	std::int64_t total_weight() const;

	friend bool operator==(const WllocInstance&, const WllocInstance&) = default;

private:
	std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
		return (i * b_ + j) * b_ + k;
	}

	std::size_t b_;
	std::vector<std::int64_t> w_;
};

/// Ordered blocks of point ids.
using Partition = std::vector<std::vector<Point>>;

/// How retraction weights are indexed.
///   standard: w(i,j,k) counts constraints (u,v,w) with u in B_i, v in B_j,
///             w in B_k, so a violated (i,j,k) costs exactly the original
///             constraints it stands for.
///   literal:  w(i,j,k) counts B_i x B_k x B_j, the transposed index order.
///             Kept for auditing only; minimizing it maximizes the standard
///             violated weight on dense instances.
enum class RetractionConvention { standard, literal };

/// Collapses the instance onto the blocks of `buckets`. Constraints that do
/// not span three distinct blocks contribute nothing. Throws
/// InvalidPartition unless every point appears in exactly one nonempty block.
WllocInstance retraction(const Instance& inst, const Partition& buckets,
	RetractionConvention convention = RetractionConvention::standard);

/// Total weight of triples (i,j,k) with NOT |x_i - x_j| < |x_i - x_k|.
std::int64_t evaluate(const WllocInstance& w, std::span<const double> positions);

struct CellSolution {
	/// b coordinates in [0, 1].
	std::vector<double> positions;
	std::int64_t violated_weight = 0;
	std::uint64_t cells_examined = 0;
};

inline constexpr std::size_t kDefaultExactCap = 5;
/// Largest b the arrangement solver will accept even with an override.
inline constexpr std::size_t kMaxExactCap = 6;

/// Global minimum by enumerating every full-dimensional cell of the
/// arrangement {x_j = x_k} u {2x_i = x_j + x_k}. Among optimal cells the
/// one with the lexicographically smallest sign signature wins. Throws
/// TooLarge when b > exact_cap and InvalidArgument when exact_cap exceeds
/// kMaxExactCap.
CellSolution solve_exact(const WllocInstance& w, std::size_t exact_cap = kDefaultExactCap);

/// Best of `restarts` exact coordinate-descent runs from uniform random
/// starting points in [0,1]^b.
CellSolution solve_heuristic(const WllocInstance& w, std::size_t restarts, std::uint64_t seed);

/// Debug text: "WLLOC 1", "b=<B>", then "i j k w" per nonzero weight,
/// 1-based indices in lexicographic order.
std::string dump(const WllocInstance& w);

/// Full-dimensional cells of the arrangement on b points factor through the
/// left-to-right ordering: inside the open cone of one ordering, the only
/// forms without a fixed sign are 2x_q - x_p - x_r for ordering positions
/// p < q < r, and they depend on the consecutive gaps alone. A GapCell is
/// one region of that gap-space arrangement; every (ordering, GapCell) pair
/// is one cell of the full arrangement.
struct GapCell {
	/// Interior point: positive integer gaps, every form nonzero.
	std::vector<std::int64_t> gaps;
	/// Bit t set when position triple t (LineArrangement::triples read as
	/// ordering positions) is violated.
	std::vector<std::uint64_t> violated;
};

struct LineArrangement {
	std::size_t b = 0;
	/// Ordered triples of distinct indices, lexicographic.
	std::vector<std::array<std::size_t, 3>> triples;
	std::vector<GapCell> gap_cells;

	/// b! * gap_cells.size().
	std::uint64_t cell_count() const;
};

/// Cell table for b points, built on first use and cached (thread-safe).
/// Throws InvalidArgument for b > kMaxExactCap.
const LineArrangement& line_arrangement(std::size_t b);

/// Sign of each form (0 negative or zero, 1 positive): x_j - x_k for j < k,
/// then 2x_i - x_j - x_k for (i, j, k) with j < k and i outside {j, k}, in
/// lexicographic order. Optimal cells are ranked by this vector.
std::vector<std::uint8_t> cell_signature(std::span<const double> positions);

} // namespace lloc
