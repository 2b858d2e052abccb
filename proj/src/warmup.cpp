/// @file  warmup.cpp
/// @brief Pivot ordering, gap systems and the zero-violation solver.

#include <lloc/error.hpp>
#include <lloc/warmup.hpp>

#include <algorithm>
#include <limits>
#include <numeric>

namespace lloc {

std::optional<std::vector<Point>> order_by_pivot(const Instance& inst, Point p) {
	const std::size_t n = inst.size();
	if (p >= n)
		throw Error(ErrorCode::IndexOutOfRange, "pivot out of range");
	// Rank by the number of points each one beats; a strict total order gives
	// distinct counts, which the pairwise check below confirms.
	std::vector<std::size_t> wins(n, 0);
	std::vector<Point> rest;
	rest.reserve(n - 1);
	for (Point q = 0; q < n; ++q) {
		if (q == p)
			continue;
		rest.push_back(q);
		for (Point r = 0; r < n; ++r)
			if (r != p && r != q && inst.contains(p, q, r))
				++wins[q];
	}
	std::stable_sort(rest.begin(), rest.end(), [&](Point a, Point b) { return wins[a] > wins[b]; });
	for (std::size_t a = 0; a < rest.size(); ++a)
		for (std::size_t b = a + 1; b < rest.size(); ++b)
			if (!inst.contains(p, rest[a], rest[b]))
				return std::nullopt;
	rest.insert(rest.begin(), p);
	return rest;
}

namespace {

std::vector<std::size_t> positions_of(const std::vector<Point>& ordering) {
	const std::size_t n = ordering.size();
	std::vector<std::size_t> pos(n, n);
	for (std::size_t t = 0; t < n; ++t) {
		if (ordering[t] >= n || pos[ordering[t]] != n)
			throw Error(ErrorCode::InvalidArgument, "ordering is not a permutation");
		pos[ordering[t]] = t;
	}
	return pos;
}

std::size_t lo(std::size_t a, std::size_t b) { return std::min(a, b); }
std::size_t hi(std::size_t a, std::size_t b) { return std::max(a, b); }

} // namespace

IntRow GapSystem::coefficients(const GapRow& row) const {
	IntRow c(gap_count(), 0);
	for (std::size_t t = lo(row.pivot, row.far); t < hi(row.pivot, row.far); ++t)
		c[t] += 1;
	for (std::size_t t = lo(row.pivot, row.near); t < hi(row.pivot, row.near); ++t)
		c[t] -= 1;
	return c;
}

GapSystem build_gap_system(const Instance& inst, const std::vector<Point>& ordering) {
	if (ordering.size() != inst.size())
		throw Error(ErrorCode::LengthMismatch, "ordering length differs from instance size");
	const auto pos = positions_of(ordering);
	GapSystem sys;
	sys.ordering = ordering;
	const std::size_t n = inst.size();
	sys.rows.reserve(inst.total_constraints());
	for (Point u = 0; u < n; ++u)
		for (Point v = 0; v < n; ++v)
			for (Point w = v + 1; w < n; ++w) {
				if (v == u || w == u)
					continue;
				const Point near = inst.closer(u, v, w);
				const Point far = near == v ? w : v;
				sys.rows.push_back({pos[u], pos[near], pos[far]});
			}
	return sys;
}

std::optional<std::vector<IntRow>> reduce_gap_system(const GapSystem& sys) {
	const std::size_t n = sys.ordering.size();
	const std::size_t dims = sys.gap_count();
	using Span = std::pair<std::size_t, std::size_t>;
	std::vector<Span> intervals;
	// Near on the left, far on the right of the pivot (and the mirror case),
	// grouped by pivot position as (near, far).
	std::vector<std::vector<Span>> left_near(n), right_near(n);
	for (const auto& row : sys.rows) {
		const std::size_t i = row.pivot, j = row.near, k = row.far;
		const bool same_side = (j > i) == (k > i);
		if (same_side) {
			const std::size_t dj = hi(i, j) - lo(i, j), dk = hi(i, k) - lo(i, k);
			if (dk <= dj)
				return std::nullopt;
			intervals.emplace_back(lo(j, k), hi(j, k));
		} else if (j < i) {
			left_near[i].emplace_back(j, k);
		} else {
			right_near[i].emplace_back(j, k);
		}
	}

	std::vector<IntRow> out;
	auto emit = [&](std::size_t pos_lo, std::size_t pos_mid, std::size_t pos_hi, bool right_far) {
		// +1 on the far span, -1 on the near span.
		IntRow c(dims, 0);
		for (std::size_t t = pos_lo; t < pos_mid; ++t)
			c[t] = right_far ? -1 : 1;
		for (std::size_t t = pos_mid; t < pos_hi; ++t)
			c[t] = right_far ? 1 : -1;
		out.push_back(std::move(c));
	};

	// Keep inclusion-minimal intervals: sum over a sub-interval >= 1 implies it
	// for every super-interval.
	std::sort(intervals.begin(), intervals.end(), [](const Span& a, const Span& b) {
		return a.second != b.second ? a.second < b.second : a.first > b.first;
	});
	long max_start = -1;
	for (const auto& [a, b] : intervals) {
		if (static_cast<long>(a) > max_start) {
			IntRow c(dims, 0);
			for (std::size_t t = a; t < b; ++t)
				c[t] = 1;
			out.push_back(std::move(c));
			max_start = static_cast<long>(a);
		}
	}

	for (std::size_t i = 0; i < n; ++i) {
		// (j, k) with j < i < k: a wider near span (smaller j) and a shorter far
		// span (smaller k) make a row stronger.
		auto& a = left_near[i];
		std::sort(a.begin(), a.end());
		std::size_t min_k = std::numeric_limits<std::size_t>::max();
		for (const auto& [j, k] : a) {
			if (k < min_k) {
				emit(j, i, k, true);
				min_k = k;
			}
		}
		// (j, k) with k < i < j: stronger for larger j and larger k.
		auto& b = right_near[i];
		std::sort(b.begin(), b.end(), std::greater<>());
		long max_k = -1;
		for (const auto& [j, k] : b) {
			if (static_cast<long>(k) > max_k) {
				emit(k, i, j, false);
				max_k = static_cast<long>(k);
			}
		}
	}
	return out;
}

bool gap_system_satisfied(const GapSystem& sys, const std::vector<std::int64_t>& gaps) {
	if (gaps.size() != sys.gap_count())
		return false;
	std::vector<std::int64_t> prefix(sys.ordering.size(), 0);
	for (std::size_t t = 0; t < gaps.size(); ++t) {
		if (gaps[t] < 0)
			return false;
		prefix[t + 1] = prefix[t] + gaps[t];
	}
	auto dist = [&](std::size_t a, std::size_t b) {
		return a < b ? prefix[b] - prefix[a] : prefix[a] - prefix[b];
	};
	for (const auto& row : sys.rows)
		if (dist(row.pivot, row.near) + 1 > dist(row.pivot, row.far))
			return false;
	return true;
}

LpSolution lp_feasible(const GapSystem& sys, LpMode mode) {
	const auto reduced = reduce_gap_system(sys);
	if (!reduced)
		return {LpStatus::infeasible, {}};
	LpSolution sol = solve_unit_slack(*reduced, sys.gap_count(), mode);
	if (sol.status == LpStatus::feasible && !gap_system_satisfied(sys, sol.x))
		return {LpStatus::numerical_failure, {}};
	return sol;
}

Embedding embedding_from_gaps(const std::vector<Point>& ordering, const std::vector<std::int64_t>& gaps) {
	if (!ordering.empty() && gaps.size() + 1 != ordering.size())
		throw Error(ErrorCode::LengthMismatch, "need one gap between consecutive ordering entries");
	std::vector<double> positions(ordering.size(), 0.0);
	std::int64_t x = 0;
	for (std::size_t t = 0; t < ordering.size(); ++t) {
		if (t > 0)
			x += gaps[t - 1];
		positions[ordering[t]] = static_cast<double>(x);
	}
	return Embedding(std::move(positions));
}

ZeroSolveResult solve_zero(const Instance& inst) {
	ZeroSolveResult result;
	const std::size_t n = inst.size();
	if (n < 3) {
		std::vector<double> identity(n);
		std::iota(identity.begin(), identity.end(), 0.0);
		result.embedding = Embedding(std::move(identity));
		return result;
	}
	for (Point p = 0; p < n; ++p) {
		const auto ordering = order_by_pivot(inst, p);
		if (!ordering)
			continue;
		++result.consistent_pivots;
		const GapSystem sys = build_gap_system(inst, *ordering);
		++result.lp_solves;
		LpSolution sol = lp_feasible(sys, LpMode::floating);
		if (sol.status == LpStatus::numerical_failure) {
			++result.exact_retries;
			sol = lp_feasible(sys, LpMode::exact);
		}
		if (sol.status != LpStatus::feasible)
			continue;
		Embedding emb = embedding_from_gaps(*ordering, sol.x);
		if (violated_count(inst, emb) != 0)
			continue;
		result.embedding = std::move(emb);
		result.pivot = p;
		return result;
	}
	return result;
}

} // namespace lloc
