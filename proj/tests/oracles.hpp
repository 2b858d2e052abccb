/// @file  oracles.hpp
/// @brief Independent reference computations and instance fixtures for tests.
///
/// Nothing here calls the solvers under test. Each oracle recomputes its
/// answer by a different and deliberately naive route.
#pragma once

#include <lloc/instance.hpp>
#include <lloc/rng.hpp>
#include <lloc/tournament.hpp>
#include <lloc/wlloc.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using lloc::Point;

/// Minimum violated weight of a 3-index weighted instance, enumerating the 6
/// left-to-right orders (a, m, c) and whether the middle point is nearer the
/// left or the right neighbour. For a tie-free placement the outer points
/// always prefer the middle one; only the middle point's preference depends
/// on the gaps.
inline std::int64_t wlloc_b3_minimum(const lloc::WllocInstance& w) {
	std::array<std::size_t, 3> order{0, 1, 2};
	std::int64_t best = std::numeric_limits<std::int64_t>::max();
	do {
		const auto [a, m, c] = order;
		const std::int64_t outer = w.weight(a, c, m) + w.weight(c, a, m);
		best = std::min(best, outer + w.weight(m, c, a)); // left gap smaller
		best = std::min(best, outer + w.weight(m, a, c)); // right gap smaller
	} while (std::next_permutation(order.begin(), order.end()));
	return best;
}

/// Back arcs of `ordering` counted pair by pair.
inline std::uint64_t back_arcs(const lloc::Tournament& t, const std::vector<std::size_t>& ordering) {
	std::uint64_t back = 0;
	for (std::size_t i = 0; i < ordering.size(); ++i)
		for (std::size_t j = i + 1; j < ordering.size(); ++j)
			if (t.arc(ordering[j], ordering[i]))
				++back;
	return back;
}

/// Minimum back arcs over all m! orderings.
inline std::uint64_t fas_minimum(const lloc::Tournament& t) {
	std::vector<std::size_t> ord(t.size());
	std::iota(ord.begin(), ord.end(), std::size_t{0});
	std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
	do
		best = std::min(best, back_arcs(t, ord));
	while (std::next_permutation(ord.begin(), ord.end()));
	return best;
}

/// Violated count straight from the definition, iterating ordered triples.
inline std::uint64_t violated_naive(const lloc::Instance& inst, const std::vector<double>& x) {
	const std::size_t n = inst.size();
	std::uint64_t bad = 0;
	for (Point u = 0; u < n; ++u)
		for (Point v = 0; v < n; ++v)
			for (Point w = 0; w < n; ++w) {
				if (u == v || u == w || v == w || !inst.contains(u, v, w))
					continue;
				const double dv = x[u] > x[v] ? x[u] - x[v] : x[v] - x[u];
				const double dw = x[u] > x[w] ? x[u] - x[w] : x[w] - x[u];
				if (!(dv < dw))
					++bad;
			}
	return bad;
}

/// Minimum violated count over all embeddings of a small instance, found by
/// scanning every ordering and every integer gap vector in [1, max_gap]^(n-1).
/// Exact whenever every cell of the arrangement 2x_q = x_p + x_r in gap
/// space holds such a grid point. Counting distinct sign patterns on the
/// grid: n = 4 saturates at 8 regions from max_gap = 4, n = 5 at 58 regions
/// from max_gap = 10.
inline std::uint64_t lloc_grid_minimum(const lloc::Instance& inst, std::int64_t max_gap = 12) {
	const std::size_t n = inst.size();
	std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
	std::vector<std::size_t> perm(n);
	std::iota(perm.begin(), perm.end(), std::size_t{0});
	std::vector<std::int64_t> gaps(n - 1, 1);
	std::vector<double> x(n);
	do {
		std::fill(gaps.begin(), gaps.end(), 1);
		for (;;) {
			std::int64_t pos = 0;
			for (std::size_t t = 0; t < n; ++t) {
				if (t > 0)
					pos += gaps[t - 1];
				x[perm[t]] = static_cast<double>(pos);
			}
			best = std::min(best, violated_naive(inst, x));
			if (best == 0)
				return 0;
			std::size_t t = 0;
			while (t < gaps.size() && gaps[t] == max_gap)
				gaps[t++] = 1;
			if (t == gaps.size())
				break;
			++gaps[t];
		}
	} while (std::next_permutation(perm.begin(), perm.end()));
	return best;
}

/// Instance with every slot drawn uniformly at random.
inline lloc::Instance random_instance(std::size_t n, std::uint64_t seed) {
	lloc::Instance inst(n);
	lloc::Rng rng(seed);
	for (std::uint64_t s = 0; s < inst.total_constraints(); ++s)
		inst.set_bit(s, rng.next() & 1U);
	return inst;
}

/// Tournament on m vertices with uniformly random arcs.
inline lloc::Tournament random_tournament(std::size_t m, std::uint64_t seed) {
	std::vector<Point> labels(m);
	std::iota(labels.begin(), labels.end(), Point{0});
	lloc::Tournament t(labels);
	lloc::Rng rng(seed);
	for (std::size_t a = 0; a < m; ++a)
		for (std::size_t b = a + 1; b < m; ++b)
			if (rng.next() & 1U)
				t.set_arc(b, a);
	return t;
}

/// Uniform positions in [0, 1] (generic with probability one).
inline std::vector<double> uniform_positions(std::size_t n, std::uint64_t seed) {
	lloc::Rng rng(seed);
	std::vector<double> x(n);
	for (auto& v : x)
		v = rng.uniform01();
	return x;
}

/// Bucket-aligned planted geometry: `clusters` groups of `per_cluster`
/// points, cluster centers left to right with gaps in [1, 2], points within
/// +-spread of their center. Redrawn until every comparison between
/// distinct clusters has center-distance margin >= 0.1, so any collapse of
/// whole clusters orders clusters exactly as the points do. Point ids are
/// shuffled so that the cluster structure is not visible in the labels.
inline std::vector<double> aligned_cluster_positions(std::size_t clusters, std::size_t per_cluster,
	double spread, std::uint64_t seed) {
	lloc::Rng rng(seed);
	std::vector<double> centers(clusters);
	for (;;) {
		centers[0] = 0.0;
		for (std::size_t c = 1; c < clusters; ++c)
			centers[c] = centers[c - 1] + rng.uniform(1.0, 2.0);
		bool ok = true;
		for (std::size_t a = 0; a < clusters && ok; ++a)
			for (std::size_t b = 0; b < clusters && ok; ++b)
				for (std::size_t c = b + 1; c < clusters && ok; ++c)
					if (a != b && a != c) {
						const double db = std::abs(centers[a] - centers[b]);
						const double dc = std::abs(centers[a] - centers[c]);
						ok = std::abs(db - dc) >= 0.1;
					}
		if (ok)
			break;
	}
	const std::size_t n = clusters * per_cluster;
	std::vector<double> x(n);
	for (std::size_t i = 0; i < n; ++i)
		x[i] = centers[i / per_cluster] + rng.uniform(-spread, spread);
	for (std::size_t i = n; i > 1; --i)
		std::swap(x[i - 1], x[rng.uniform_index(i)]);
	return x;
}

/// Tie count of the collapse of aligned clusters: n * ((b-1) C(m,2) + C(m-1,2)).
inline std::uint64_t collapse_tie_count(std::uint64_t n, std::uint64_t b) {
	const std::uint64_t m = n / b;
	return n * ((b - 1) * (m * (m - 1) / 2) + (m - 1) * (m - 2) / 2);
}

} // namespace oracle
