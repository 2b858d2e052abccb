/// @file  pipeline.cpp
/// @brief Per-pivot candidates and deterministic best-candidate selection.

#include <lloc/error.hpp>
#include <lloc/pipeline.hpp>
#include <lloc/rng.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

namespace lloc {

const char* to_string(ExtensionMode mode) {
	return mode == ExtensionMode::collapse ? "collapse" : "jitter";
}

const char* to_string(SelectionMode mode) {
	return mode == SelectionMode::exact_count ? "exact_count" : "estimate";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
	return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

} // namespace

std::size_t resolve_bucket_count(const PipelineConfig& cfg, std::size_t n) {
	if (cfg.b.has_value() == cfg.epsilon.has_value())
		throw Error(ErrorCode::InvalidArgument, "exactly one of b and epsilon must be given");
	std::size_t b = 0;
	if (cfg.b) {
		b = *cfg.b;
	} else {
		const double eps = *cfg.epsilon;
		if (!(eps > 0.0 && eps < 1.0))
			throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
		b = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(std::pow(eps, -0.125))));
		b = std::min(b, n);
	}
	if (b < 3 || b > n)
		throw Error(ErrorCode::InvalidArgument,
			"b = " + std::to_string(b) + " must lie in [3, n] with n = " + std::to_string(n));
	return b;
}

Partition bucketize(const std::vector<Point>& ordering, std::size_t b) {
	const std::size_t n = ordering.size();
	if (b < 3 || b > n)
		throw Error(ErrorCode::InvalidArgument, "bucket count must lie in [3, n]");
	Partition blocks(b);
	std::size_t next = 0;
	for (std::size_t i = 0; i < b; ++i) {
		const std::size_t size = n / b + (i < n % b ? 1 : 0);
		blocks[i].assign(ordering.begin() + static_cast<long>(next),
			ordering.begin() + static_cast<long>(next + size));
		next += size;
	}
	return blocks;
}

Embedding extend(std::span<const double> g, const Partition& buckets, ExtensionMode mode) {
	if (g.size() != buckets.size())
		throw Error(ErrorCode::LengthMismatch, "one position per bucket required");
	std::size_t n = 0;
	for (const auto& block : buckets)
		n += block.size();
	std::vector<double> x(n, 0.0);
	std::vector<bool> seen(n, false);
	for (const auto& block : buckets)
		for (Point p : block) {
			if (p >= n || seen[p])
				throw Error(ErrorCode::InvalidPartition, "buckets are not a partition of the points");
			seen[p] = true;
		}

	double delta = 0.0;
	if (mode == ExtensionMode::jitter) {
		std::vector<double> sorted(g.begin(), g.end());
		std::sort(sorted.begin(), sorted.end());
		double gap = 0.0;
		for (std::size_t t = 0; t + 1 < sorted.size(); ++t) {
			const double d = sorted[t + 1] - sorted[t];
			if (d > 0.0 && (gap == 0.0 || d < gap))
				gap = d;
		}
		delta = kJitterScale * gap;
	}

	double first_direction = 1.0;
	for (std::size_t j = 1; j < g.size(); ++j)
		if (g[j] != g[0]) {
			first_direction = g[j] > g[0] ? 1.0 : -1.0;
			break;
		}

	for (std::size_t j = 0; j < buckets.size(); ++j) {
		const auto& block = buckets[j];
		const std::size_t m = block.size();
		double direction = first_direction;
		if (j > 0 && g[j] != g[0])
			direction = g[j] > g[0] ? 1.0 : -1.0;
		for (std::size_t t = 0; t < m; ++t) {
			double offset = 0.0;
			if (delta > 0.0 && m > 1)
				offset = direction * delta * (-1.0 + 2.0 * static_cast<double>(t) / static_cast<double>(m - 1));
			x[block[t]] = g[j] + offset;
		}
	}
	return Embedding(std::move(x));
}

Candidate solve_for_pivot(const Instance& inst, Point p, const PipelineConfig& cfg) {
	const std::size_t b = resolve_bucket_count(cfg, inst.size());
	Candidate c;
	c.pivot = p;

	auto start = Clock::now();
	const Tournament t = pivot_tournament(inst, p);
	FasResult fas;
	switch (cfg.fas) {
	case FasMethod::indegree: fas = fas_indegree(t); break;
	case FasMethod::indegree_local: fas = fas_local(t, fas_indegree(t)); break;
	case FasMethod::exact: fas = fas_exact(t); break;
	}
	c.back_arcs = fas.back_arcs;
	std::vector<Point> ordering{p};
	for (Point q : topological_order(fas, t))
		ordering.push_back(q);
	c.times.fas_ms = ms_since(start);

	start = Clock::now();
	const Partition buckets = bucketize(ordering, b);
	const WllocInstance w = retraction(inst, buckets);
	c.times.retraction_ms = ms_since(start);

	start = Clock::now();
	CellSolution sol;
	if (b <= cfg.exact_cap) {
		sol = solve_exact(w, cfg.exact_cap);
	} else {
		sol = solve_heuristic(w, cfg.heuristic_restarts, derive_seed(cfg.seed, p));
		c.exact_solve = false;
	}
	c.retraction_violated_weight = sol.violated_weight;
	c.times.solve_ms = ms_since(start);

	start = Clock::now();
	c.embedding = extend(sol.positions, buckets, cfg.extension);
	c.times.extend_ms = ms_since(start);

	start = Clock::now();
	if (cfg.selection == SelectionMode::exact_count)
		c.violated_count = violated_count(inst, c.embedding);
	else
		c.estimated_violated_fraction = violated_estimate(inst, c.embedding, cfg.estimate_samples, cfg.estimate_seed);
	c.times.evaluate_ms = ms_since(start);
	return c;
}

std::size_t effective_threads(std::size_t requested) {
	if (requested != 0)
		return requested;
	return std::max(1U, std::thread::hardware_concurrency());
}

SolveReport solve(const Instance& inst, const PipelineConfig& cfg) {
	const auto start = Clock::now();
	const std::size_t n = inst.size();
	SolveReport report;
	report.config = cfg;
	report.b = resolve_bucket_count(cfg, n);
	if (cfg.exact_cap > kMaxExactCap)
		throw Error(ErrorCode::InvalidArgument, "exact_cap may not exceed 6");
	if (cfg.heuristic_restarts == 0)
		throw Error(ErrorCode::InvalidArgument, "heuristic_restarts must be at least 1");
	if (cfg.selection == SelectionMode::estimate && cfg.estimate_samples == 0)
		throw Error(ErrorCode::InvalidArgument, "estimate selection needs at least one sample");

	std::vector<Point> pivots;
	if (cfg.pivots) {
		pivots = *cfg.pivots;
		if (pivots.empty())
			throw Error(ErrorCode::InvalidArgument, "pivot list is empty");
		for (Point p : pivots)
			if (p >= n)
				throw Error(ErrorCode::IndexOutOfRange, "pivot out of range");
	} else {
		for (Point p = 0; p < n; ++p)
			pivots.push_back(p);
	}

	report.candidates.resize(pivots.size());
	std::vector<std::exception_ptr> errors(pivots.size());
	std::atomic<std::size_t> next{0};
	auto work = [&] {
		for (std::size_t i = next++; i < pivots.size(); i = next++) {
			try {
				report.candidates[i] = solve_for_pivot(inst, pivots[i], cfg);
			} catch (...) {
				errors[i] = std::current_exception();
			}
		}
	};
	const std::size_t threads = std::min(effective_threads(cfg.threads), pivots.size());
	if (threads <= 1) {
		work();
	} else {
		std::vector<std::thread> pool;
		for (std::size_t i = 0; i < threads; ++i)
			pool.emplace_back(work);
		for (auto& th : pool)
			th.join();
	}
	for (auto& e : errors)
		if (e)
			std::rethrow_exception(e);

	auto score = [](const Candidate& c) {
		return c.violated_count ? static_cast<double>(*c.violated_count) : *c.estimated_violated_fraction;
	};
	std::size_t best = 0;
	for (std::size_t i = 1; i < report.candidates.size(); ++i) {
		const auto& a = report.candidates[i];
		const auto& w = report.candidates[best];
		if (score(a) < score(w) || (score(a) == score(w) && a.pivot < w.pivot))
			best = i;
	}
	for (const auto& c : report.candidates) {
		report.times.fas_ms += c.times.fas_ms;
		report.times.retraction_ms += c.times.retraction_ms;
		report.times.solve_ms += c.times.solve_ms;
		report.times.extend_ms += c.times.extend_ms;
		report.times.evaluate_ms += c.times.evaluate_ms;
	}

	const Candidate& winner = report.candidates[best];
	report.chosen_pivot = winner.pivot;
	report.embedding = winner.embedding;
	const auto recount = Clock::now();
	report.violated_count = winner.violated_count ? *winner.violated_count : violated_count(inst, winner.embedding);
	report.recount_ms = ms_since(recount);
	report.total_constraints = inst.total_constraints();
	report.satisfied_fraction = report.total_constraints == 0
		? 1.0
		: 1.0 - static_cast<double>(report.violated_count) / static_cast<double>(report.total_constraints);
	report.total_ms = ms_since(start);
	return report;
}

std::string report_json(const SolveReport& report, bool include_timings) {
	using nlohmann::ordered_json;
	const PipelineConfig& cfg = report.config;
	ordered_json config;
	config["b"] = report.b;
	if (cfg.epsilon)
		config["epsilon"] = *cfg.epsilon;
	config["fas"] = to_string(cfg.fas);
	config["extension"] = to_string(cfg.extension);
	config["selection"] = to_string(cfg.selection);
	if (cfg.selection == SelectionMode::estimate) {
		config["estimate_samples"] = cfg.estimate_samples;
		config["estimate_seed"] = cfg.estimate_seed;
	}
	config["exact_cap"] = cfg.exact_cap;
	config["heuristic_restarts"] = cfg.heuristic_restarts;
	config["seed"] = cfg.seed;
	if (cfg.pivots)
		config["pivots"] = *cfg.pivots;
	else
		config["pivots"] = "all";
	config["exact_bucket_solve"] = report.b <= cfg.exact_cap;

	ordered_json candidates = ordered_json::array();
	for (const auto& c : report.candidates) {
		ordered_json rec;
		rec["pivot"] = c.pivot;
		rec["back_arcs"] = c.back_arcs;
		rec["retraction_violated_weight"] = c.retraction_violated_weight;
		rec["bucket_solver"] = c.exact_solve ? "exact" : "heuristic";
		if (c.violated_count)
			rec["violated_count"] = *c.violated_count;
		if (c.estimated_violated_fraction)
			rec["estimated_violated_fraction"] = *c.estimated_violated_fraction;
		candidates.push_back(std::move(rec));
	}

	ordered_json doc;
	doc["chosen_pivot"] = report.chosen_pivot;
	doc["satisfied_fraction"] = report.satisfied_fraction;
	doc["violated_count"] = report.violated_count;
	doc["total_constraints"] = report.total_constraints;
	doc["config"] = std::move(config);
	doc["candidates"] = std::move(candidates);
	if (include_timings) {
		ordered_json t;
		t["fas"] = report.times.fas_ms;
		t["retraction"] = report.times.retraction_ms;
		t["bucket_solve"] = report.times.solve_ms;
		t["extend"] = report.times.extend_ms;
		t["evaluate"] = report.times.evaluate_ms;
		t["recount"] = report.recount_ms;
		t["total"] = report.total_ms;
		doc["timings_ms"] = std::move(t);
	}
	return doc.dump(2) + "\n";
}

} // namespace lloc
