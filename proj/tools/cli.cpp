/// @file  cli.cpp
/// @brief Subcommands of the `lloc` tool.

#include "cli.hpp"

#include <lloc/error.hpp>
#include <lloc/pipeline.hpp>
#include <lloc/rng.hpp>
#include <lloc/warmup.hpp>
#include <lloc/wlloc.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lloc::cli {

using nlohmann::ordered_json;

namespace {

/// Flag-level failure detected after CLI11 parsing.
struct FlagError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
	switch (code) {
	case ErrorCode::MalformedHeader:
	case ErrorCode::MalformedRecord:
	case ErrorCode::BadLength:
	case ErrorCode::BadHexDigit:
	case ErrorCode::NonFiniteInput:
	case ErrorCode::Io:
		return kParseError;
	case ErrorCode::TooLarge:
		return kSizeGuard;
	default:
		return kFlagError;
	}
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
	if (path.empty() || path == "-") {
		out << text;
		return;
	}
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
	f << text;
	if (!f)
		throw Error(ErrorCode::Io, "write failed: " + path);
}

std::string read_text(const std::string& path) {
	std::ifstream f(path, std::ios::binary);
	if (!f)
		throw Error(ErrorCode::Io, "cannot open " + path);
	std::ostringstream ss;
	ss << f.rdbuf();
	return ss.str();
}

std::string json_text(const ordered_json& doc) { return doc.dump(2) + "\n"; }

/// LLOC_THREADS, 0 (auto) when unset.
std::size_t env_threads() {
	const char* v = std::getenv("LLOC_THREADS");
	if (v == nullptr || *v == '\0')
		return 0;
	char* end = nullptr;
	const unsigned long t = std::strtoul(v, &end, 10);
	if (*end != '\0')
		throw FlagError("LLOC_THREADS must be a nonnegative integer");
	return t;
}

Distribution parse_distribution(const std::string& s) {
	if (s == "uniform")
		return Distribution::uniform;
	if (s == "clustered")
		return Distribution::clustered;
	if (s == "mixed_gap")
		return Distribution::mixed_gap;
	throw FlagError("unknown distribution: " + s);
}

void check_gen_spec(const GenSpec& spec) {
	if (spec.dist == Distribution::mixed_gap) {
		if (spec.k == 0 || spec.n != 2 * spec.k + 1)
			throw FlagError("mixed_gap needs k >= 1 and n = 2k + 1");
		return;
	}
	if (spec.n < 3)
		throw FlagError("n must be at least 3");
	if (spec.dist == Distribution::clustered && (spec.clusters == 0 || !(spec.spread >= 0.0)))
		throw FlagError("clustered needs clusters >= 1 and spread >= 0");
}

// ---------------------------------------------------------------------------

struct SolveFlags {
	std::size_t b = 0;
	double eps = 0.0;
	std::string fas = "indegree_local";
	std::string mode = "collapse";
	std::string select;
	std::uint64_t samples = kDefaultEstimateSamples;
	std::size_t exact_cap = kDefaultExactCap;
	std::size_t restarts = 20;
	std::uint64_t seed = 0;
	std::vector<std::size_t> pivots;
	bool no_timings = false;
};

PipelineConfig make_config(const SolveFlags& f, bool b_set, bool eps_set, std::size_t n) {
	PipelineConfig cfg;
	if (b_set && eps_set)
		throw FlagError("--b and --eps are mutually exclusive");
	if (b_set)
		cfg.b = f.b;
	else if (eps_set)
		cfg.epsilon = f.eps;
	else
		cfg.b = std::min<std::size_t>(5, n);
	if (f.fas == "indegree")
		cfg.fas = FasMethod::indegree;
	else if (f.fas == "indegree_local")
		cfg.fas = FasMethod::indegree_local;
	else if (f.fas == "exact")
		cfg.fas = FasMethod::exact;
	else
		throw FlagError("unknown --fas: " + f.fas);
	if (f.mode == "collapse")
		cfg.extension = ExtensionMode::collapse;
	else if (f.mode == "jitter")
		cfg.extension = ExtensionMode::jitter;
	else
		throw FlagError("unknown --mode: " + f.mode);
	std::string select = f.select;
	if (select.empty())
		select = n > 150 ? "estimate" : "exact";
	if (select == "exact")
		cfg.selection = SelectionMode::exact_count;
	else if (select == "estimate")
		cfg.selection = SelectionMode::estimate;
	else
		throw FlagError("unknown --select: " + select);
	cfg.estimate_samples = f.samples;
	cfg.estimate_seed = f.seed;
	if (f.exact_cap > kMaxExactCap)
		throw FlagError("--exact-cap may not exceed 6");
	cfg.exact_cap = f.exact_cap;
	if (f.restarts == 0)
		throw FlagError("--restarts must be at least 1");
	cfg.heuristic_restarts = f.restarts;
	cfg.seed = f.seed;
	if (!f.pivots.empty())
		cfg.pivots = std::vector<Point>(f.pivots.begin(), f.pivots.end());
	cfg.threads = env_threads();
	try {
		resolve_bucket_count(cfg, n);
	} catch (const Error& e) {
		throw FlagError(e.what());
	}
	return cfg;
}

double quantile(const std::vector<double>& sorted, double q) {
	if (sorted.empty())
		return 0.0;
	const double pos = q * static_cast<double>(sorted.size() - 1);
	const auto lo = static_cast<std::size_t>(std::floor(pos));
	const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
	return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ordered_json embedding_json(const Embedding& emb) { return emb.positions(); }

// ---------------------------------------------------------------------------
// bench

struct BenchCell {
	std::size_t n;
	std::string dist;
	double corruption;
	std::size_t b;
	std::string method;
};

std::vector<ordered_json> as_list(const ordered_json& cfg, const char* key, ordered_json fallback) {
	const ordered_json& v = cfg.contains(key) ? cfg[key] : fallback;
	if (v.is_array())
		return {v.begin(), v.end()};
	return {v};
}

/// Shortest text that reads back as v.
std::string format_double(double v) {
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, res.ptr);
}

int cmd_bench(const std::string& config_path, const std::string& out_path, std::ostream& out,
	std::ostream& err) {
	ordered_json cfg;
	try {
		cfg = ordered_json::parse(read_text(config_path));
	} catch (const ordered_json::exception& e) {
		throw Error(ErrorCode::MalformedRecord, std::string("bench config: ") + e.what());
	}
	if (!cfg.is_object())
		throw Error(ErrorCode::MalformedRecord, "bench config must be a JSON object");

	std::vector<BenchCell> cells;
	std::vector<std::uint64_t> seeds;
	std::size_t clusters = 5;
	double spread = 0.01;
	std::size_t restarts = 20;
	try {
		for (const auto& s : as_list(cfg, "seeds", ordered_json::array({0})))
			seeds.push_back(s.get<std::uint64_t>());
		clusters = cfg.value("clusters", std::size_t{5});
		spread = cfg.value("spread", 0.01);
		restarts = cfg.value("restarts", std::size_t{20});
		for (const auto& n : as_list(cfg, "n", ordered_json::array()))
			for (const auto& d : as_list(cfg, "dist", "uniform"))
				for (const auto& c : as_list(cfg, "corruption", 0.0))
					for (const auto& b : as_list(cfg, "b", ordered_json::array()))
						for (const auto& m : as_list(cfg, "method", "collapse"))
							cells.push_back({n.get<std::size_t>(), d.get<std::string>(), c.get<double>(),
								b.get<std::size_t>(), m.get<std::string>()});
	} catch (const ordered_json::exception& e) {
		throw FlagError(std::string("bench config: ") + e.what());
	}
	const std::size_t threads = env_threads();

	std::string csv = "instance_id,n,b,dist,corruption,seed,method,satisfied_fraction,wall_ms,failed,error\n";
	struct Summary {
		std::vector<double> values;
	};
	std::vector<std::pair<std::string, Summary>> summary;
	for (const auto& cell : cells) {
		std::ostringstream label;
		label << "n=" << cell.n << " b=" << cell.b << ' ' << cell.dist << " corruption=" << format_double(cell.corruption)
			  << ' ' << cell.method;
		Summary sum;
		for (std::uint64_t seed : seeds) {
			const std::string id = "n" + std::to_string(cell.n) + "-" + cell.dist + "-c" + format_double(cell.corruption) +
				"-s" + std::to_string(seed);
			double fraction = std::nan("");
			std::string error;
			const auto start = std::chrono::steady_clock::now();
			try {
				GenSpec spec;
				spec.n = cell.n;
				spec.dist = parse_distribution(cell.dist);
				spec.clusters = clusters;
				spec.spread = spread;
				spec.k = cell.n / 2;
				spec.seed = derive_seed(seed, 0);
				check_gen_spec(spec);
				const Instance truth = realize(spec, generate_positions(spec));
				const Instance inst = corrupt(truth, {cell.corruption, derive_seed(seed, 1)});
				if (cell.method == "zero") {
					const auto r = solve_zero(inst);
					if (!r.embedding)
						throw Error(ErrorCode::InvalidArgument, "no perfect embedding");
					fraction = 1.0;
				} else {
					PipelineConfig pc;
					pc.b = cell.b;
					if (cell.method == "jitter")
						pc.extension = ExtensionMode::jitter;
					else if (cell.method != "collapse")
						throw FlagError("unknown method: " + cell.method);
					pc.selection = cell.n > 150 ? SelectionMode::estimate : SelectionMode::exact_count;
					pc.estimate_seed = seed;
					pc.heuristic_restarts = restarts;
					pc.seed = seed;
					pc.threads = threads;
					fraction = solve(inst, pc).satisfied_fraction;
				}
			} catch (const std::exception& e) {
				error = e.what();
			}
			const double wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
			std::replace(error.begin(), error.end(), ',', ';');
			std::replace(error.begin(), error.end(), '\n', ' ');
			csv += id + ',' + std::to_string(cell.n) + ',' + std::to_string(cell.b) + ',' + cell.dist + ',' +
				format_double(cell.corruption) + ',' + std::to_string(seed) + ',' + cell.method + ',' +
				(error.empty() ? format_double(fraction) : std::string()) + ',' + format_double(wall) + ',' +
				(error.empty() ? "0" : "1") + ',' + error + '\n';
			if (error.empty())
				sum.values.push_back(fraction);
		}
		summary.emplace_back(label.str(), std::move(sum));
	}

	std::ostringstream table;
	for (const auto& [label, sum] : summary) {
		const auto& v = sum.values;
		const double count = static_cast<double>(v.size());
		const double mean = v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / count;
		double var = 0.0;
		for (double x : v)
			var += (x - mean) * (x - mean);
		const double sd = v.size() > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
		char buf[96];
		std::snprintf(buf, sizeof buf, "  %.6f +- %.6f  (%zu ok)", mean, sd, v.size());
		table << label << buf << '\n';
	}
	if (out_path.empty()) {
		out << csv;
		err << table.str();
	} else {
		write_text(out_path, csv, out);
		out << table.str();
	}
	return kOk;
}

} // namespace

// ---------------------------------------------------------------------------

Embedding generate_positions(const GenSpec& spec) {
	if (spec.dist == Distribution::mixed_gap)
		return Embedding(mixed_gap_positions(spec.k));
	Rng rng(spec.seed);
	std::vector<double> centers;
	for (;;) {
		if (spec.dist == Distribution::clustered) {
			centers.resize(spec.clusters);
			for (auto& c : centers)
				c = rng.uniform01();
		}
		std::vector<double> x(spec.n);
		for (std::size_t i = 0; i < spec.n; ++i) {
			if (spec.dist == Distribution::uniform)
				x[i] = rng.uniform01();
			else
				x[i] = centers[i % spec.clusters] + rng.uniform(-spec.spread, spec.spread);
		}
		Embedding emb(std::move(x));
		try {
			from_embedding(emb);
			return emb;
		} catch (const Error& e) {
			if (e.code() != ErrorCode::TieEncountered)
				throw;
		}
	}
}

Instance realize(const GenSpec& spec, const Embedding& positions) {
	return from_embedding(positions,
		spec.dist == Distribution::mixed_gap ? TieRule::lower_index_closer : TieRule::reject);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
	CLI::App app{"Line embeddings from dense ordinal triples", "lloc"};
	app.require_subcommand(1);

	GenSpec gen;
	std::string gen_dist = "uniform", gen_out;
	auto* sc_gen = app.add_subcommand("gen", "Generate an instance and its ground-truth embedding");
	sc_gen->add_option("--n", gen.n, "Number of points")->required();
	sc_gen->add_option("--dist", gen_dist, "uniform | clustered | mixed_gap");
	sc_gen->add_option("--clusters", gen.clusters, "Cluster count (clustered)");
	sc_gen->add_option("--spread", gen.spread, "Cluster half-width (clustered)");
	sc_gen->add_option("--k", gen.k, "Family parameter (mixed_gap, n = 2k+1)");
	sc_gen->add_option("--seed", gen.seed, "Random seed");
	sc_gen->add_option("--out", gen_out, "Instance path; truth goes to <out>.truth")->required();

	std::string cor_in, cor_out;
	CorruptionSpec cor;
	auto* sc_corrupt = app.add_subcommand("corrupt", "Flip a fraction of the constraints");
	sc_corrupt->add_option("instance", cor_in)->required();
	sc_corrupt->add_option("--fraction", cor.fraction, "Fraction of slots to flip")->required();
	sc_corrupt->add_option("--seed", cor.seed, "Random seed");
	sc_corrupt->add_option("--out", cor_out, "Output path (stdout if omitted)");

	std::string solve_in, solve_out, solve_emb;
	SolveFlags sf;
	auto* sc_solve = app.add_subcommand("solve", "Run the approximation pipeline");
	sc_solve->add_option("instance", solve_in)->required();
	auto* opt_b = sc_solve->add_option("--b", sf.b, "Bucket count");
	auto* opt_eps = sc_solve->add_option("--eps", sf.eps, "Derive b from epsilon");
	sc_solve->add_option("--fas", sf.fas, "indegree | indegree_local | exact");
	sc_solve->add_option("--mode", sf.mode, "collapse | jitter");
	sc_solve->add_option("--select", sf.select, "exact | estimate (estimate when n > 150)");
	sc_solve->add_option("--samples", sf.samples, "Samples per candidate under estimate");
	sc_solve->add_option("--exact-cap", sf.exact_cap, "Largest b solved exactly (max 6)");
	sc_solve->add_option("--restarts", sf.restarts, "Heuristic restarts when b > exact cap");
	sc_solve->add_option("--seed", sf.seed, "Random seed");
	sc_solve->add_option("--pivots", sf.pivots, "Pivots to try (default all)");
	sc_solve->add_flag("--no-timings", sf.no_timings, "Omit timings_ms from the report");
	sc_solve->add_option("--out", solve_out, "Report path (stdout if omitted)");
	sc_solve->add_option("--embedding", solve_emb, "Embedding path (default <out>.embedding)");

	std::string zero_in, zero_out, zero_emb;
	auto* sc_zero = app.add_subcommand("solve-zero", "Find a violation-free embedding or prove none exists");
	sc_zero->add_option("instance", zero_in)->required();
	sc_zero->add_option("--out", zero_out, "Report path (stdout if omitted)");
	sc_zero->add_option("--embedding", zero_emb, "Embedding path, written on success");

	std::string eval_in, eval_emb;
	auto* sc_eval = app.add_subcommand("eval", "Count violated constraints of an embedding");
	sc_eval->add_option("instance", eval_in)->required();
	sc_eval->add_option("embedding", eval_emb)->required();

	std::string oracle_in, oracle_out;
	std::size_t oracle_cap = kDefaultExactCap;
	auto* sc_oracle = app.add_subcommand("oracle", "Global minimum by exhaustive cell enumeration");
	sc_oracle->add_option("instance", oracle_in)->required();
	sc_oracle->add_option("--exact-cap", oracle_cap, "Largest n accepted (max 6)");
	sc_oracle->add_option("--out", oracle_out, "Report path (stdout if omitted)");

	std::string bench_cfg, bench_out;
	auto* sc_bench = app.add_subcommand("bench", "Run a benchmark grid, CSV rows plus summary");
	sc_bench->add_option("config", bench_cfg)->required();
	sc_bench->add_option("--out", bench_out, "CSV path (stdout if omitted)");

	try {
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	} catch (const CLI::CallForHelp& e) {
		out << app.help();
		return kOk;
	} catch (const CLI::ParseError& e) {
		err << "lloc: " << e.what() << '\n';
		return kFlagError;
	}

	try {
		if (sc_gen->parsed()) {
			gen.dist = parse_distribution(gen_dist);
			if (gen.dist == Distribution::mixed_gap && gen.k == 0 && gen.n % 2 == 1)
				gen.k = gen.n / 2;
			check_gen_spec(gen);
			const Embedding truth = generate_positions(gen);
			write_instance_file(gen_out, realize(gen, truth));
			write_embedding_file(gen_out + ".truth", truth);
			return kOk;
		}
		if (sc_corrupt->parsed()) {
			if (!(cor.fraction >= 0.0 && cor.fraction <= 1.0))
				throw FlagError("--fraction must lie in [0, 1]");
			const Instance inst = read_instance_file(cor_in);
			write_text(cor_out, serialize(corrupt(inst, cor)), out);
			return kOk;
		}
		if (sc_solve->parsed()) {
			const Instance inst = read_instance_file(solve_in);
			const PipelineConfig cfg = make_config(sf, opt_b->count() > 0, opt_eps->count() > 0, inst.size());
			const SolveReport report = solve(inst, cfg);
			write_text(solve_out, report_json(report, !sf.no_timings), out);
			if (solve_emb.empty() && !solve_out.empty() && solve_out != "-")
				solve_emb = solve_out + ".embedding";
			if (!solve_emb.empty())
				write_embedding_file(solve_emb, report.embedding);
			return kOk;
		}
		if (sc_zero->parsed()) {
			const Instance inst = read_instance_file(zero_in);
			const ZeroSolveResult r = solve_zero(inst);
			ordered_json doc;
			doc["perfect"] = r.embedding.has_value();
			doc["n"] = inst.size();
			doc["total_constraints"] = inst.total_constraints();
			doc["consistent_pivots"] = r.consistent_pivots;
			doc["lp_solves"] = r.lp_solves;
			doc["exact_retries"] = r.exact_retries;
			if (r.embedding) {
				doc["pivot"] = r.pivot ? ordered_json(*r.pivot) : ordered_json(nullptr);
				doc["violated_count"] = violated_count(inst, *r.embedding);
				doc["embedding"] = embedding_json(*r.embedding);
				if (!zero_emb.empty())
					write_embedding_file(zero_emb, *r.embedding);
			}
			write_text(zero_out, json_text(doc), out);
			return kOk;
		}
		if (sc_eval->parsed()) {
			const Instance inst = read_instance_file(eval_in);
			const Embedding emb = read_embedding_file(eval_emb);
			if (emb.size() != inst.size())
				throw FlagError("embedding has " + std::to_string(emb.size()) + " points, instance has " +
					std::to_string(inst.size()));
			const std::uint64_t bad = violated_count(inst, emb);
			std::vector<double> goodness(inst.size());
			for (Point i = 0; i < inst.size(); ++i)
				goodness[i] = pivot_goodness(inst, emb, i);
			std::sort(goodness.begin(), goodness.end());
			ordered_json doc;
			doc["n"] = inst.size();
			doc["violated_count"] = bad;
			doc["total_constraints"] = inst.total_constraints();
			doc["satisfied_fraction"] = inst.total_constraints() == 0
				? 1.0
				: 1.0 - static_cast<double>(bad) / static_cast<double>(inst.total_constraints());
			ordered_json q;
			q["min"] = quantile(goodness, 0.0);
			q["q1"] = quantile(goodness, 0.25);
			q["median"] = quantile(goodness, 0.5);
			q["q3"] = quantile(goodness, 0.75);
			q["max"] = quantile(goodness, 1.0);
			doc["pivot_goodness"] = std::move(q);
			out << json_text(doc);
			return kOk;
		}
		if (sc_oracle->parsed()) {
			if (oracle_cap > kMaxExactCap)
				throw FlagError("--exact-cap may not exceed 6");
			const Instance inst = read_instance_file(oracle_in);
			if (inst.size() > oracle_cap) {
				err << "lloc: oracle limited to n <= " << oracle_cap << ", got n = " << inst.size() << '\n';
				return kSizeGuard;
			}
			Partition singletons(inst.size());
			for (Point i = 0; i < inst.size(); ++i)
				singletons[i] = {i};
			const CellSolution sol = solve_exact(retraction(inst, singletons), oracle_cap);
			const Embedding emb(sol.positions);
			ordered_json doc;
			doc["n"] = inst.size();
			doc["minimum_violated"] = violated_count(inst, emb);
			doc["total_constraints"] = inst.total_constraints();
			doc["cells_examined"] = sol.cells_examined;
			doc["embedding"] = embedding_json(emb);
			write_text(oracle_out, json_text(doc), out);
			return kOk;
		}
		if (sc_bench->parsed())
			return cmd_bench(bench_cfg, bench_out, out, err);
	} catch (const FlagError& e) {
		err << "lloc: " << e.what() << '\n';
		return kFlagError;
	} catch (const Error& e) {
		err << "lloc: " << e.what() << '\n';
		return exit_code_for(e.code());
	}
	return kFlagError;
}

} // namespace lloc::cli
