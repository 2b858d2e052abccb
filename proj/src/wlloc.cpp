/// @file  wlloc.cpp
/// @brief Retraction, arrangement cell enumeration and the weighted solvers.

#include <lloc/error.hpp>
#include <lloc/lp.hpp>
#include <lloc/rng.hpp>
#include <lloc/wlloc.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace lloc {

WllocInstance::WllocInstance(std::size_t b) : b_(b), w_(b * b * b, 0) {}

void WllocInstance::set_weight(std::size_t i, std::size_t j, std::size_t k, std::int64_t w) {
	if (i >= b_ || j >= b_ || k >= b_)
		throw Error(ErrorCode::IndexOutOfRange, "weight index out of range");
	if (i == j || i == k || j == k)
		throw Error(ErrorCode::InvalidArgument, "weights exist only for distinct triples");
	if (w < 0)
		throw Error(ErrorCode::InvalidArgument, "weights must be nonnegative");
	w_[index(i, j, k)] = w;
}

std::int64_t WllocInstance::total_weight() const {
	return std::accumulate(w_.begin(), w_.end(), std::int64_t{0});
}

WllocInstance retraction(const Instance& inst, const Partition& buckets,
	RetractionConvention convention) {
	const std::size_t n = inst.size();
	const std::size_t none = buckets.size();
	std::vector<std::size_t> block(n, none);
	for (std::size_t i = 0; i < buckets.size(); ++i) {
		if (buckets[i].empty())
			throw Error(ErrorCode::InvalidPartition, "empty block");
		for (Point p : buckets[i]) {
			if (p >= n)
				throw Error(ErrorCode::InvalidPartition, "block holds an out-of-range point");
			if (block[p] != none)
				throw Error(ErrorCode::InvalidPartition, "point appears in two blocks");
			block[p] = i;
		}
	}
	if (std::find(block.begin(), block.end(), none) != block.end())
		throw Error(ErrorCode::InvalidPartition, "blocks do not cover every point");

	WllocInstance w(buckets.size());
	const bool literal = convention == RetractionConvention::literal;
	for (Point u = 0; u < n; ++u) {
		const std::size_t bi = block[u];
		std::uint64_t s = u * inst.pairs_per_pivot();
		for (Point v = 0; v < n; ++v) {
			if (v == u)
				continue;
			const std::size_t bv = block[v];
			for (Point x = v + 1; x < n; ++x) {
				if (x == u)
					continue;
				const std::uint64_t slot = s++;
				const std::size_t bx = block[x];
				if (bv == bi || bx == bi || bv == bx)
					continue;
				// (u, near, far) is the constraint present in the instance.
				std::size_t bnear = bx, bfar = bv;
				if (inst.bit(slot))
					std::swap(bnear, bfar);
				if (literal)
					std::swap(bnear, bfar);
				w.add_weight(bi, bnear, bfar, 1);
			}
		}
	}
	return w;
}

std::int64_t evaluate(const WllocInstance& w, std::span<const double> positions) {
	const std::size_t b = w.size();
	if (positions.size() != b)
		throw Error(ErrorCode::LengthMismatch, "positions length differs from b");
	std::int64_t bad = 0;
	for (std::size_t i = 0; i < b; ++i)
		for (std::size_t j = 0; j < b; ++j)
			for (std::size_t k = 0; k < b; ++k) {
				if (i == j || i == k || j == k)
					continue;
				const std::int64_t wt = w.weight(i, j, k);
				if (wt != 0 && !(std::abs(positions[i] - positions[j]) < std::abs(positions[i] - positions[k])))
					bad += wt;
			}
	return bad;
}

std::string dump(const WllocInstance& w) {
	const std::size_t b = w.size();
	std::string out = "WLLOC 1\nb=" + std::to_string(b) + "\n";
	for (std::size_t i = 0; i < b; ++i)
		for (std::size_t j = 0; j < b; ++j)
			for (std::size_t k = 0; k < b; ++k) {
				if (i == j || i == k || j == k || w.weight(i, j, k) == 0)
					continue;
				out += std::to_string(i + 1) + ' ' + std::to_string(j + 1) + ' ' + std::to_string(k + 1) +
					' ' + std::to_string(w.weight(i, j, k)) + '\n';
			}
	return out;
}

// ---------------------------------------------------------------------------
// Arrangement cells

namespace {

std::uint64_t factorial(std::size_t b) {
	std::uint64_t f = 1;
	for (std::size_t t = 2; t <= b; ++t)
		f *= t;
	return f;
}

std::vector<std::array<std::size_t, 3>> ordered_triples(std::size_t b) {
	std::vector<std::array<std::size_t, 3>> triples;
	for (std::size_t i = 0; i < b; ++i)
		for (std::size_t j = 0; j < b; ++j)
			for (std::size_t k = 0; k < b; ++k)
				if (i != j && i != k && j != k)
					triples.push_back({i, j, k});
	return triples;
}

std::int64_t dot(const IntRow& row, const std::vector<std::int64_t>& x) {
	std::int64_t s = 0;
	for (std::size_t t = 0; t < row.size(); ++t)
		s += row[t] * x[t];
	return s;
}

IntRow negated(const IntRow& row) {
	IntRow out(row.size());
	for (std::size_t t = 0; t < row.size(); ++t)
		out[t] = -row[t];
	return out;
}

/// Regions of the arrangement of forms 2X_q - X_p - X_r (p < q < r) inside
/// the open positive orthant of gap space, by incremental splitting. Each
/// region carries its sign rows and an interior witness; a hyperplane is
/// added to a region only after an exact LP certifies that the far side is
/// nonempty.
std::vector<std::vector<std::int64_t>> gap_space_witnesses(std::size_t b) {
	const std::size_t dims = b - 1;
	struct Region {
		std::vector<IntRow> rows;
		std::vector<std::int64_t> witness;
	};
	std::vector<Region> regions(1);
	for (std::size_t t = 0; t < dims; ++t) {
		IntRow e(dims, 0);
		e[t] = 1;
		regions[0].rows.push_back(std::move(e));
	}
	regions[0].witness.assign(dims, 1);

	for (std::size_t p = 0; p < b; ++p)
		for (std::size_t q = p + 1; q < b; ++q)
			for (std::size_t r = q + 1; r < b; ++r) {
				IntRow form(dims, 0);
				for (std::size_t t = p; t < q; ++t)
					form[t] = 1;
				for (std::size_t t = q; t < r; ++t)
					form[t] = -1;
				std::vector<Region> next;
				for (auto& region : regions) {
					const std::int64_t value = dot(form, region.witness);
					for (int side : {1, -1}) {
						IntRow signed_form = side > 0 ? form : negated(form);
						Region child;
						child.rows = region.rows;
						child.rows.push_back(std::move(signed_form));
						if (value * side > 0) {
							child.witness = region.witness;
						} else {
							LpSolution sol = solve_unit_slack(child.rows, dims, LpMode::floating);
							if (sol.status == LpStatus::numerical_failure)
								sol = solve_unit_slack(child.rows, dims, LpMode::exact);
							if (sol.status != LpStatus::feasible)
								continue;
							child.witness = std::move(sol.x);
						}
						next.push_back(std::move(child));
					}
				}
				regions = std::move(next);
			}

	std::vector<std::vector<std::int64_t>> witnesses;
	witnesses.reserve(regions.size());
	for (auto& region : regions)
		witnesses.push_back(std::move(region.witness));
	return witnesses;
}

std::vector<std::int64_t> prefix_positions(const std::vector<std::int64_t>& gaps) {
	std::vector<std::int64_t> x(gaps.size() + 1, 0);
	for (std::size_t t = 0; t < gaps.size(); ++t)
		x[t + 1] = x[t] + gaps[t];
	return x;
}

std::unique_ptr<LineArrangement> build_arrangement(std::size_t b) {
	auto arr = std::make_unique<LineArrangement>();
	arr->b = b;
	arr->triples = ordered_triples(b);
	if (b < 3)
		return arr;
	const std::size_t words = (arr->triples.size() + 63) / 64;
	for (auto& gaps : gap_space_witnesses(b)) {
		GapCell cell;
		const auto x = prefix_positions(gaps);
		cell.violated.assign(words, 0);
		for (std::size_t t = 0; t < arr->triples.size(); ++t) {
			const auto [a, c, d] = arr->triples[t];
			const std::int64_t near = std::abs(x[a] - x[c]);
			const std::int64_t far = std::abs(x[a] - x[d]);
			if (!(near < far))
				cell.violated[t / 64] |= std::uint64_t{1} << (t % 64);
		}
		cell.gaps = std::move(gaps);
		arr->gap_cells.push_back(std::move(cell));
	}
	return arr;
}

template <class T>
std::vector<std::uint8_t> signature_of(std::span<const T> x) {
	const std::size_t b = x.size();
	std::vector<std::uint8_t> sig;
	for (std::size_t j = 0; j < b; ++j)
		for (std::size_t k = j + 1; k < b; ++k)
			sig.push_back(x[j] - x[k] > 0);
	for (std::size_t i = 0; i < b; ++i)
		for (std::size_t j = 0; j < b; ++j)
			for (std::size_t k = j + 1; k < b; ++k)
				if (i != j && i != k)
					sig.push_back(2 * x[i] - x[j] - x[k] > 0);
	return sig;
}

/// Integer positions of labels laid out by `perm` with the given gaps.
std::vector<std::int64_t> label_positions(const std::vector<std::size_t>& perm,
	const std::vector<std::int64_t>& gaps) {
	const auto x = prefix_positions(gaps);
	std::vector<std::int64_t> out(perm.size());
	for (std::size_t t = 0; t < perm.size(); ++t)
		out[perm[t]] = x[t];
	return out;
}

/// (X + 1) / 2^s with 2^s >= max X + 2: exact dyadic values in (0, 1).
std::vector<double> to_unit_interval(const std::vector<std::int64_t>& x) {
	const std::int64_t top = *std::max_element(x.begin(), x.end()) + 2;
	const int shift = std::bit_width(static_cast<std::uint64_t>(top));
	std::vector<double> out(x.size());
	for (std::size_t t = 0; t < x.size(); ++t)
		out[t] = std::ldexp(static_cast<double>(x[t] + 1), -shift);
	return out;
}

} // namespace

std::uint64_t LineArrangement::cell_count() const { return factorial(b) * gap_cells.size(); }

const LineArrangement& line_arrangement(std::size_t b) {
	if (b > kMaxExactCap)
		throw Error(ErrorCode::InvalidArgument, "arrangement tables are limited to b <= 6");
	static std::mutex mutex;
	static std::map<std::size_t, std::unique_ptr<LineArrangement>> cache;
	std::lock_guard<std::mutex> lock(mutex);
	auto& slot = cache[b];
	if (!slot)
		slot = build_arrangement(b);
	return *slot;
}

std::vector<std::uint8_t> cell_signature(std::span<const double> positions) {
	return signature_of(positions);
}

CellSolution solve_exact(const WllocInstance& w, std::size_t exact_cap) {
	if (exact_cap > kMaxExactCap)
		throw Error(ErrorCode::InvalidArgument, "exact_cap may not exceed 6");
	const std::size_t b = w.size();
	if (b > exact_cap)
		throw Error(ErrorCode::TooLarge, "b = " + std::to_string(b) + " exceeds exact_cap = " +
			std::to_string(exact_cap));
	CellSolution best;
	if (b < 3) {
		for (std::size_t i = 0; i < b; ++i)
			best.positions.push_back((2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(b)));
		best.violated_weight = evaluate(w, best.positions);
		return best;
	}

	const LineArrangement& arr = line_arrangement(b);
	const std::size_t nt = arr.triples.size();
	std::vector<std::int64_t> permuted(nt);
	std::vector<std::size_t> perm(b);
	std::iota(perm.begin(), perm.end(), std::size_t{0});

	std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
	std::vector<std::int64_t> best_x;
	std::vector<std::uint8_t> best_sig;
	do {
		for (std::size_t t = 0; t < nt; ++t) {
			const auto [a, c, d] = arr.triples[t];
			permuted[t] = w.weight(perm[a], perm[c], perm[d]);
		}
		for (const GapCell& cell : arr.gap_cells) {
			std::int64_t cost = 0;
			for (std::size_t word = 0; word < cell.violated.size(); ++word) {
				std::uint64_t bits = cell.violated[word];
				while (bits) {
					cost += permuted[word * 64 + static_cast<std::size_t>(std::countr_zero(bits))];
					bits &= bits - 1;
				}
			}
			if (cost > best_cost)
				continue;
			auto x = label_positions(perm, cell.gaps);
			auto sig = signature_of(std::span<const std::int64_t>(x));
			if (cost < best_cost || sig < best_sig) {
				best_cost = cost;
				best_x = std::move(x);
				best_sig = std::move(sig);
			}
		}
	} while (std::next_permutation(perm.begin(), perm.end()));

	best.positions = to_unit_interval(best_x);
	best.violated_weight = evaluate(w, best.positions);
	best.cells_examined = arr.cell_count();
	return best;
}

// ---------------------------------------------------------------------------
// Coordinate descent

namespace {

/// Violated weight of the triples that involve point i.
std::int64_t local_cost(const WllocInstance& w, const std::vector<double>& x, std::size_t i) {
	const std::size_t b = w.size();
	auto violated = [&](std::size_t a, std::size_t c, std::size_t d) {
		return !(std::abs(x[a] - x[c]) < std::abs(x[a] - x[d]));
	};
	std::int64_t cost = 0;
	for (std::size_t j = 0; j < b; ++j) {
		if (j == i)
			continue;
		for (std::size_t k = 0; k < b; ++k) {
			if (k == i || k == j)
				continue;
			// i as pivot, as the nearer point, as the farther point.
			if (const auto wt = w.weight(i, j, k); wt && violated(i, j, k))
				cost += wt;
			if (const auto wt = w.weight(j, i, k); wt && violated(j, i, k))
				cost += wt;
			if (const auto wt = w.weight(j, k, i); wt && violated(j, k, i))
				cost += wt;
		}
	}
	return cost;
}

} // namespace

CellSolution solve_heuristic(const WllocInstance& w, std::size_t restarts, std::uint64_t seed) {
	if (restarts == 0)
		throw Error(ErrorCode::InvalidArgument, "restarts must be at least 1");
	const std::size_t b = w.size();
	Rng rng(seed);
	CellSolution best;
	best.violated_weight = std::numeric_limits<std::int64_t>::max();
	std::uint64_t samples = 0;
	std::vector<double> breakpoints;
	for (std::size_t run = 0; run < restarts; ++run) {
		std::vector<double> x(b);
		for (auto& xi : x)
			xi = rng.uniform01();
		std::int64_t current = evaluate(w, x);
		bool improved = true;
		while (improved) {
			improved = false;
			for (std::size_t i = 0; i < b; ++i) {
				breakpoints.assign({0.0, 1.0});
				for (std::size_t j = 0; j < b; ++j) {
					if (j == i)
						continue;
					breakpoints.push_back(x[j]);
					for (std::size_t k = 0; k < b; ++k) {
						if (k == i || k == j)
							continue;
						if (j < k)
							breakpoints.push_back(0.5 * (x[j] + x[k]));
						breakpoints.push_back(2.0 * x[j] - x[k]);
					}
				}
				std::erase_if(breakpoints, [](double v) { return v < 0.0 || v > 1.0; });
				std::sort(breakpoints.begin(), breakpoints.end());
				breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

				const double keep = x[i];
				const std::int64_t base = local_cost(w, x, i);
				std::int64_t best_local = base;
				double best_xi = keep;
				for (std::size_t t = 0; t + 1 < breakpoints.size(); ++t) {
					const double mid = 0.5 * (breakpoints[t] + breakpoints[t + 1]);
					if (mid <= breakpoints[t] || mid >= breakpoints[t + 1])
						continue;
					x[i] = mid;
					++samples;
					const std::int64_t c = local_cost(w, x, i);
					if (c < best_local) {
						best_local = c;
						best_xi = mid;
					}
				}
				x[i] = best_xi;
				if (best_local < base) {
					current -= base - best_local;
					improved = true;
				}
			}
		}
		if (current < best.violated_weight) {
			best.violated_weight = current;
			best.positions = x;
		}
	}
	best.violated_weight = evaluate(w, best.positions);
	best.cells_examined = samples;
	return best;
}

} // namespace lloc
