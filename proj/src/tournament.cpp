/// @file  tournament.cpp
/// @brief Pivot tournaments, indegree ordering, reinsertion search, exact DP.

#include <lloc/error.hpp>
#include <lloc/tournament.hpp>

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace lloc {

Tournament::Tournament(std::vector<Point> labels)
	: labels_(std::move(labels)), adj_(labels_.size() * labels_.size(), 0) {
	const std::size_t m = size();
	for (std::size_t a = 0; a < m; ++a)
		for (std::size_t b = a + 1; b < m; ++b)
			adj_[a * m + b] = 1;
}

void Tournament::set_arc(std::size_t a, std::size_t b) {
	const std::size_t m = size();
	if (a >= m || b >= m || a == b)
		throw Error(ErrorCode::IndexOutOfRange, "bad tournament arc");
	adj_[a * m + b] = 1;
	adj_[b * m + a] = 0;
}

std::size_t Tournament::indegree(std::size_t v) const {
	std::size_t d = 0;
	for (std::size_t u = 0; u < size(); ++u)
		d += adj_[u * size() + v];
	return d;
}

Tournament pivot_tournament(const Instance& inst, Point p) {
	const std::size_t n = inst.size();
	if (p >= n)
		throw Error(ErrorCode::IndexOutOfRange, "pivot out of range");
	std::vector<Point> labels;
	labels.reserve(n - 1);
	for (Point q = 0; q < n; ++q)
		if (q != p)
			labels.push_back(q);
	Tournament t(labels);
	const std::size_t m = labels.size();
	for (std::size_t a = 0; a < m; ++a)
		for (std::size_t b = a + 1; b < m; ++b)
			if (!inst.contains(p, labels[a], labels[b]))
				t.set_arc(b, a);
	return t;
}

const char* to_string(FasMethod method) {
	switch (method) {
	case FasMethod::indegree: return "indegree";
	case FasMethod::indegree_local: return "indegree_local";
	case FasMethod::exact: return "exact";
	}
	return "unknown";
}

std::uint64_t count_back_arcs(const Tournament& t, const std::vector<std::size_t>& ordering) {
	const std::size_t m = t.size();
	if (ordering.size() != m)
		throw Error(ErrorCode::InvalidArgument, "ordering length differs from tournament size");
	std::vector<bool> seen(m, false);
	for (std::size_t v : ordering) {
		if (v >= m || seen[v])
			throw Error(ErrorCode::InvalidArgument, "ordering is not a permutation");
		seen[v] = true;
	}
	std::uint64_t back = 0;
	for (std::size_t i = 0; i < m; ++i)
		for (std::size_t j = i + 1; j < m; ++j)
			back += t.arc(ordering[j], ordering[i]);
	return back;
}

FasResult fas_indegree(const Tournament& t) {
	const std::size_t m = t.size();
	std::vector<std::size_t> indeg(m);
	for (std::size_t v = 0; v < m; ++v)
		indeg[v] = t.indegree(v);
	FasResult r;
	r.method = FasMethod::indegree;
	r.ordering.resize(m);
	std::iota(r.ordering.begin(), r.ordering.end(), std::size_t{0});
	// Local indices ascend with labels, so a stable sort breaks ties by label.
	std::stable_sort(r.ordering.begin(), r.ordering.end(),
		[&](std::size_t a, std::size_t b) { return indeg[a] < indeg[b]; });
	r.back_arcs = count_back_arcs(t, r.ordering);
	return r;
}

FasResult fas_local(const Tournament& t, const FasResult& start, std::size_t max_rounds) {
	FasResult r = start;
	r.back_arcs = count_back_arcs(t, r.ordering);
	r.method = FasMethod::indegree_local;
	auto& ord = r.ordering;
	const std::size_t m = t.size();
	for (std::size_t round = 0; round < max_rounds; ++round) {
		bool improved = false;
		for (std::size_t v = 0; v < m; ++v) {
			const std::size_t i = static_cast<std::size_t>(std::find(ord.begin(), ord.end(), v) - ord.begin());
			long best_delta = 0;
			std::size_t best_pos = i;
			long delta = 0;
			for (std::size_t j = i + 1; j < m; ++j) {
				delta += t.arc(v, ord[j]) ? 1 : -1;
				if (delta < best_delta) {
					best_delta = delta;
					best_pos = j;
				}
			}
			delta = 0;
			for (std::size_t j = i; j-- > 0;) {
				delta += t.arc(ord[j], v) ? 1 : -1;
				if (delta < best_delta) {
					best_delta = delta;
					best_pos = j;
				}
			}
			if (best_delta < 0) {
				ord.erase(ord.begin() + static_cast<long>(i));
				ord.insert(ord.begin() + static_cast<long>(best_pos), v);
				r.back_arcs -= static_cast<std::uint64_t>(-best_delta);
				improved = true;
			}
		}
		if (!improved)
			break;
	}
	return r;
}

FasResult fas_exact(const Tournament& t) {
	const std::size_t m = t.size();
	if (m > kFasExactMaxVertices)
		throw Error(ErrorCode::TooLarge, "fas_exact supports at most 16 vertices");
	std::vector<std::uint32_t> out(m, 0);
	for (std::size_t a = 0; a < m; ++a)
		for (std::size_t b = 0; b < m; ++b)
			if (a != b && t.arc(a, b))
				out[a] |= 1U << b;

	// best[S]: fewest back arcs among the vertices outside S when S is placed
	// first. A vertex placed after S creates one back arc per out-neighbor in S.
	const std::uint32_t full = m == 0 ? 0 : (1U << m) - 1;
	std::vector<std::uint32_t> best(std::size_t{full} + 1, 0);
	for (std::uint32_t s = full; s-- > 0;) {
		std::uint32_t value = std::numeric_limits<std::uint32_t>::max();
		for (std::size_t v = 0; v < m; ++v) {
			if (s & (1U << v))
				continue;
			const auto cost = static_cast<std::uint32_t>(std::popcount(out[v] & s)) + best[s | (1U << v)];
			value = std::min(value, cost);
		}
		best[s] = value;
	}

	FasResult r;
	r.method = FasMethod::exact;
	std::uint32_t s = 0;
	while (s != full) {
		for (std::size_t v = 0; v < m; ++v) {
			if (s & (1U << v))
				continue;
			const auto cost = static_cast<std::uint32_t>(std::popcount(out[v] & s)) + best[s | (1U << v)];
			if (cost == best[s]) {
				r.ordering.push_back(v);
				s |= 1U << v;
				break;
			}
		}
	}
	r.back_arcs = best[0];
	return r;
}

std::vector<Point> topological_order(const FasResult& fas, const Tournament& t) {
	if (fas.ordering.size() != t.size())
		throw Error(ErrorCode::InvalidArgument, "FAS ordering does not match the tournament");
	std::vector<Point> order;
	order.reserve(fas.ordering.size());
	for (std::size_t v : fas.ordering)
		order.push_back(t.labels()[v]);
	return order;
}

} // namespace lloc
