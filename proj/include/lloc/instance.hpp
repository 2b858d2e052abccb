/// @file  instance.hpp
/// @brief Dense ordinal-triple instances on the line and their embeddings.
///
/// An instance over points 0..n-1 answers, for every pivot u and every
/// unordered pair {v, w} of other points, which of v and w is asserted to be
/// strictly closer to u. The triple (u, v, w) is "in the instance" when v is
/// the asserted-closer point. One bit is stored per (pivot, pair) slot.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lloc {

using Point = std::size_t;

/// Real coordinates of the points, index-aligned. Values must be finite.
class Embedding {
public:
	Embedding() = default;
	explicit Embedding(std::vector<double> positions);

	std::size_t size() const noexcept { return positions_.size(); }
	double operator[](Point i) const { return positions_[i]; }
	const std::vector<double>& positions() const noexcept { return positions_; }

	friend bool operator==(const Embedding&, const Embedding&) = default;

private:
	std::vector<double> positions_;
};

/// How from_embedding resolves exact distance ties.
enum class TieRule { reject, lower_index_closer };

/// How violation counting treats exact distance ties. The default matches
/// the strict inequality: a tie never satisfies a constraint.
enum class TieSemantics { violate, lower_index_closer };

class Instance {
public:
	/// n points; every slot starts with the higher-index point asserted closer.
	explicit Instance(std::size_t n);

	std::size_t size() const noexcept { return n_; }
	/// C(n-1, 2): constraints sharing one pivot.
	std::uint64_t pairs_per_pivot() const noexcept { return pairs_; }
	/// n * C(n-1, 2).
	std::uint64_t total_constraints() const noexcept { return pairs_ * n_; }

	/// Position of pair {v, w} (v < w, both != u) in pivot u's lexicographic
	/// pair order.
	std::uint64_t pair_index(Point u, Point v, Point w) const;
	/// Global slot id u * C(n-1,2) + pair_index.
	std::uint64_t slot(Point u, Point v, Point w) const { return u * pairs_ + pair_index(u, v, w); }
	/// Inverse of slot(): the pivot and the pair (v < w).
	void decode_slot(std::uint64_t slot, Point& u, Point& v, Point& w) const;

	/// Raw bit of a slot: true when the lower-index point of the pair is
	/// asserted closer.
	bool bit(std::uint64_t slot) const { return (words_[slot >> 6] >> (slot & 63)) & 1U; }
	void set_bit(std::uint64_t slot, bool value);
	void flip_bit(std::uint64_t slot) { words_[slot >> 6] ^= std::uint64_t{1} << (slot & 63); }

	/// The point of {v, w} asserted closer to u.
	Point closer(Point u, Point v, Point w) const;
	/// Whether (u, v, w) is in the instance, i.e. v is asserted closer than w.
	bool contains(Point u, Point v, Point w) const { return closer(u, v, w) == v; }
	/// Asserts that `near` is closer to u than `far`.
	void assert_closer(Point u, Point near, Point far);

	friend bool operator==(const Instance&, const Instance&) = default;

private:
	void check_triple(Point u, Point v, Point w) const;

	std::size_t n_;
	std::uint64_t pairs_;
	std::vector<std::uint64_t> words_;
};

/// Number of slots on which two instances of the same size disagree.
std::uint64_t hamming_distance(const Instance& a, const Instance& b);

/// Instance realized by `positions`. Throws TieEncountered under
/// TieRule::reject when a pivot is equidistant from two points.
Instance from_embedding(const Embedding& positions, TieRule tie_rule = TieRule::reject);

struct CorruptionSpec {
	double fraction = 0.0;
	std::uint64_t seed = 0;
};

/// floor(fraction * total) for the instance size; the exact flip count.
std::uint64_t corruption_flip_count(const Instance& inst, double fraction);

/// Flips exactly corruption_flip_count slots chosen uniformly without
/// replacement (selection sampling over the slots in order).
Instance corrupt(const Instance& inst, const CorruptionSpec& spec);

/// Constraints not satisfied by emb.
std::uint64_t violated_count(const Instance& inst, const Embedding& emb,
	TieSemantics ties = TieSemantics::violate);

/// Violations among the constraints of a single pivot.
std::uint64_t pivot_violated_count(const Instance& inst, const Embedding& emb, Point pivot,
	TieSemantics ties = TieSemantics::violate);

/// Monte-Carlo estimate of the violated fraction from `samples` uniform
/// slot draws (with replacement).
double violated_estimate(const Instance& inst, const Embedding& emb,
	std::uint64_t samples, std::uint64_t seed);

/// Fraction of pivot i's constraints satisfied by emb. Point i is
/// alpha-good iff the result is at least alpha.
double pivot_goodness(const Instance& inst, const Embedding& emb, Point i);

/// Coordinates {0, 2, ..., 2k, 2k+1, ..., 3k}: evenly spaced pairs followed
/// by a unit-spaced tail.
std::vector<double> mixed_gap_positions(std::size_t k);

/// from_embedding over mixed_gap_positions(k) with lower-index tie breaking.
Instance mixed_gap_instance(std::size_t k);

/// Text serialization. Format:
///   LLOC 1
///   n=<N>
///   <u>:<hex>          (one line per pivot, u = 0..N-1)
/// The hex string holds C(N-1,2) bits, MSB first within each digit and
/// zero-padded at the end.
std::string serialize(const Instance& inst);
Instance parse_instance(std::string_view text);

void write_instance_file(const std::string& path, const Instance& inst);
Instance read_instance_file(const std::string& path);

/// Embedding text format: one "index position" pair per line.
std::string serialize(const Embedding& emb);
Embedding parse_embedding(std::string_view text);

void write_embedding_file(const std::string& path, const Embedding& emb);
Embedding read_embedding_file(const std::string& path);

} // namespace lloc
