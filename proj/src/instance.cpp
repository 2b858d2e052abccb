/// @file  instance.cpp
/// @brief Dense instance storage, generation, corruption, evaluation and I/O.

#include <lloc/error.hpp>
#include <lloc/instance.hpp>
#include <lloc/rng.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lloc {

const char* to_string(ErrorCode code) {
	switch (code) {
	case ErrorCode::TieEncountered: return "TieEncountered";
	case ErrorCode::NonFiniteInput: return "NonFiniteInput";
	case ErrorCode::LengthMismatch: return "LengthMismatch";
	case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
	case ErrorCode::MalformedHeader: return "MalformedHeader";
	case ErrorCode::MalformedRecord: return "MalformedRecord";
	case ErrorCode::BadLength: return "BadLength";
	case ErrorCode::BadHexDigit: return "BadHexDigit";
	case ErrorCode::InvalidPartition: return "InvalidPartition";
	case ErrorCode::InvalidArgument: return "InvalidArgument";
	case ErrorCode::TooLarge: return "TooLarge";
	case ErrorCode::Io: return "Io";
	}
	return "Unknown";
}

Embedding::Embedding(std::vector<double> positions) : positions_(std::move(positions)) {
	for (double x : positions_)
		if (!std::isfinite(x))
			throw Error(ErrorCode::NonFiniteInput, "embedding coordinate is not finite");
}

namespace {

std::uint64_t choose2(std::uint64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

/// Offset of the first pair (a, .) in the lexicographic order over m items.
std::uint64_t row_offset(std::uint64_t a, std::uint64_t m) { return a * (2 * m - a - 1) / 2; }

/// Calls fn(v, w, slot) for every pair v < w of pivot u, in slot order.
template <class Fn>
void for_each_pair(const Instance& inst, Point u, Fn&& fn) {
	const std::size_t n = inst.size();
	std::uint64_t s = u * inst.pairs_per_pivot();
	for (Point v = 0; v < n; ++v) {
		if (v == u)
			continue;
		for (Point w = v + 1; w < n; ++w) {
			if (w == u)
				continue;
			fn(v, w, s++);
		}
	}
}

bool satisfied(double du, double dv, bool lower_closer, TieSemantics ties) {
	// du: distance to the lower-index point, dv: to the higher-index point.
	if (du == dv)
		return ties == TieSemantics::lower_index_closer && lower_closer;
	return lower_closer ? du < dv : dv < du;
}

} // namespace

Instance::Instance(std::size_t n)
	: n_(n), pairs_(choose2(n == 0 ? 0 : n - 1)), words_((pairs_ * n + 63) / 64, 0) {}

void Instance::check_triple(Point u, Point v, Point w) const {
	if (u >= n_ || v >= n_ || w >= n_)
		throw Error(ErrorCode::IndexOutOfRange, "point index out of range");
	if (u == v || u == w || v == w)
		throw Error(ErrorCode::InvalidArgument, "triple points must be distinct");
}

std::uint64_t Instance::pair_index(Point u, Point v, Point w) const {
	check_triple(u, v, w);
	if (v > w)
		std::swap(v, w);
	const std::uint64_t m = n_ - 1;
	const std::uint64_t a = v - (v > u ? 1 : 0);
	const std::uint64_t b = w - (w > u ? 1 : 0);
	return row_offset(a, m) + (b - a - 1);
}

void Instance::decode_slot(std::uint64_t slot, Point& u, Point& v, Point& w) const {
	if (slot >= total_constraints())
		throw Error(ErrorCode::IndexOutOfRange, "slot out of range");
	u = slot / pairs_;
	const std::uint64_t r = slot % pairs_;
	const std::uint64_t m = n_ - 1;
	// Largest a with row_offset(a) <= r.
	std::uint64_t lo = 0, hi = m - 1;
	while (lo + 1 < hi) {
		const std::uint64_t mid = (lo + hi) / 2;
		if (row_offset(mid, m) <= r)
			lo = mid;
		else
			hi = mid;
	}
	const std::uint64_t a = row_offset(hi, m) <= r ? hi : lo;
	const std::uint64_t b = r - row_offset(a, m) + a + 1;
	v = a + (a >= u ? 1 : 0);
	w = b + (b >= u ? 1 : 0);
}

void Instance::set_bit(std::uint64_t slot, bool value) {
	const std::uint64_t mask = std::uint64_t{1} << (slot & 63);
	if (value)
		words_[slot >> 6] |= mask;
	else
		words_[slot >> 6] &= ~mask;
}

Point Instance::closer(Point u, Point v, Point w) const {
	const bool lower = bit(slot(u, v, w));
	return lower ? std::min(v, w) : std::max(v, w);
}

void Instance::assert_closer(Point u, Point near, Point far) {
	set_bit(slot(u, near, far), near < far);
}

std::uint64_t hamming_distance(const Instance& a, const Instance& b) {
	if (a.size() != b.size())
		throw Error(ErrorCode::LengthMismatch, "instances differ in size");
	std::uint64_t diff = 0;
	const std::uint64_t total = a.total_constraints();
	for (std::uint64_t s = 0; s < total; ++s)
		diff += a.bit(s) != b.bit(s);
	return diff;
}

Instance from_embedding(const Embedding& positions, TieRule tie_rule) {
	const std::size_t n = positions.size();
	if (n < 3)
		throw Error(ErrorCode::InvalidArgument, "an instance needs at least 3 points");
	Instance inst(n);
	for (Point u = 0; u < n; ++u) {
		const double xu = positions[u];
		for_each_pair(inst, u, [&](Point v, Point w, std::uint64_t s) {
			const double dv = std::abs(xu - positions[v]);
			const double dw = std::abs(xu - positions[w]);
			if (dv == dw && tie_rule == TieRule::reject) {
				throw Error(ErrorCode::TieEncountered,
					"pivot " + std::to_string(u) + " is equidistant from " + std::to_string(v) +
						" and " + std::to_string(w));
			}
			inst.set_bit(s, dv <= dw);
		});
	}
	return inst;
}

std::uint64_t corruption_flip_count(const Instance& inst, double fraction) {
	if (!(fraction >= 0.0 && fraction <= 1.0))
		throw Error(ErrorCode::InvalidArgument, "corruption fraction must lie in [0, 1]");
	const auto total = inst.total_constraints();
	const auto k = static_cast<std::uint64_t>(std::floor(fraction * static_cast<double>(total)));
	return std::min(k, total);
}

Instance corrupt(const Instance& inst, const CorruptionSpec& spec) {
	const std::uint64_t total = inst.total_constraints();
	std::uint64_t remaining = corruption_flip_count(inst, spec.fraction);
	Instance out = inst;
	Rng rng(spec.seed);
	// Selection sampling: slot s is taken with probability remaining / (total - s).
	for (std::uint64_t s = 0; s < total && remaining > 0; ++s) {
		if (total - s == remaining || rng.uniform_index(total - s) < remaining) {
			out.flip_bit(s);
			--remaining;
		}
	}
	return out;
}

std::uint64_t pivot_violated_count(const Instance& inst, const Embedding& emb, Point pivot,
	TieSemantics ties) {
	if (emb.size() != inst.size())
		throw Error(ErrorCode::LengthMismatch, "embedding length differs from instance size");
	if (pivot >= inst.size())
		throw Error(ErrorCode::IndexOutOfRange, "pivot out of range");
	std::uint64_t bad = 0;
	const double xu = emb[pivot];
	for_each_pair(inst, pivot, [&](Point v, Point w, std::uint64_t s) {
		const double dv = std::abs(xu - emb[v]);
		const double dw = std::abs(xu - emb[w]);
		bad += !satisfied(dv, dw, inst.bit(s), ties);
	});
	return bad;
}

std::uint64_t violated_count(const Instance& inst, const Embedding& emb, TieSemantics ties) {
	if (emb.size() != inst.size())
		throw Error(ErrorCode::LengthMismatch, "embedding length differs from instance size");
	std::uint64_t bad = 0;
	for (Point u = 0; u < inst.size(); ++u)
		bad += pivot_violated_count(inst, emb, u, ties);
	return bad;
}

double violated_estimate(const Instance& inst, const Embedding& emb, std::uint64_t samples,
	std::uint64_t seed) {
	if (samples == 0)
		throw Error(ErrorCode::InvalidArgument, "samples must be positive");
	if (emb.size() != inst.size())
		throw Error(ErrorCode::LengthMismatch, "embedding length differs from instance size");
	const std::uint64_t total = inst.total_constraints();
	if (total == 0)
		return 0.0;
	Rng rng(seed);
	std::uint64_t bad = 0;
	for (std::uint64_t i = 0; i < samples; ++i) {
		const std::uint64_t s = rng.uniform_index(total);
		Point u, v, w;
		inst.decode_slot(s, u, v, w);
		const double dv = std::abs(emb[u] - emb[v]);
		const double dw = std::abs(emb[u] - emb[w]);
		bad += !satisfied(dv, dw, inst.bit(s), TieSemantics::violate);
	}
	return static_cast<double>(bad) / static_cast<double>(samples);
}

double pivot_goodness(const Instance& inst, const Embedding& emb, Point i) {
	if (i >= inst.size())
		throw Error(ErrorCode::IndexOutOfRange, "pivot out of range");
	const std::uint64_t pairs = inst.pairs_per_pivot();
	if (pairs == 0)
		return 1.0;
	const std::uint64_t bad = pivot_violated_count(inst, emb, i);
	return static_cast<double>(pairs - bad) / static_cast<double>(pairs);
}

std::vector<double> mixed_gap_positions(std::size_t k) {
	if (k < 2)
		throw Error(ErrorCode::InvalidArgument, "mixed-gap family needs k >= 2");
	std::vector<double> xs;
	xs.reserve(2 * k + 1);
	for (std::size_t t = 0; t <= k; ++t)
		xs.push_back(static_cast<double>(2 * t));
	for (std::size_t x = 2 * k + 1; x <= 3 * k; ++x)
		xs.push_back(static_cast<double>(x));
	return xs;
}

Instance mixed_gap_instance(std::size_t k) {
	return from_embedding(Embedding(mixed_gap_positions(k)), TieRule::lower_index_closer);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
	if (c >= '0' && c <= '9')
		return c - '0';
	if (c >= 'a' && c <= 'f')
		return c - 'a' + 10;
	if (c >= 'A' && c <= 'F')
		return c - 'A' + 10;
	return -1;
}

/// Splits on '\n'; a single trailing newline does not produce an extra line.
std::vector<std::string_view> split_lines(std::string_view text) {
	std::vector<std::string_view> lines;
	std::size_t start = 0;
	while (start < text.size()) {
		const std::size_t end = text.find('\n', start);
		if (end == std::string_view::npos) {
			lines.push_back(text.substr(start));
			break;
		}
		lines.push_back(text.substr(start, end - start));
		start = end + 1;
	}
	return lines;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
	if (s.empty())
		return false;
	const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
	return ec == std::errc() && ptr == s.data() + s.size();
}

std::string read_file(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw Error(ErrorCode::Io, "cannot open " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
	out << text;
	if (!out)
		throw Error(ErrorCode::Io, "write failed for " + path);
}

} // namespace

std::string serialize(const Instance& inst) {
	const std::size_t n = inst.size();
	const std::uint64_t pairs = inst.pairs_per_pivot();
	const std::uint64_t digits = (pairs + 3) / 4;
	std::string out = "LLOC 1\nn=" + std::to_string(n) + "\n";
	out.reserve(out.size() + n * (digits + 8));
	for (Point u = 0; u < n; ++u) {
		out += std::to_string(u);
		out += ':';
		const std::uint64_t base = u * pairs;
		for (std::uint64_t d = 0; d < digits; ++d) {
			unsigned value = 0;
			for (unsigned b = 0; b < 4; ++b) {
				const std::uint64_t idx = d * 4 + b;
				const bool bit = idx < pairs && inst.bit(base + idx);
				value |= static_cast<unsigned>(bit) << (3 - b);
			}
			out += kHexDigits[value];
		}
		out += '\n';
	}
	return out;
}

Instance parse_instance(std::string_view text) {
	const auto lines = split_lines(text);
	if (lines.size() < 2 || lines[0] != "LLOC 1")
		throw Error(ErrorCode::MalformedHeader, "expected 'LLOC 1' on the first line");
	std::size_t n = 0;
	if (lines[1].substr(0, 2) != "n=" || !parse_number(lines[1].substr(2), n) || n < 3)
		throw Error(ErrorCode::MalformedHeader, "expected 'n=<N>' with N >= 3 on the second line");
	if (lines.size() != n + 2)
		throw Error(ErrorCode::BadLength, "expected " + std::to_string(n) + " pivot records, found " +
			std::to_string(lines.size() - 2));
	Instance inst(n);
	const std::uint64_t pairs = inst.pairs_per_pivot();
	const std::uint64_t digits = (pairs + 3) / 4;
	for (Point u = 0; u < n; ++u) {
		const std::string_view line = lines[u + 2];
		const std::size_t colon = line.find(':');
		std::size_t label = 0;
		if (colon == std::string_view::npos || !parse_number(line.substr(0, colon), label) ||
			label != u)
			throw Error(ErrorCode::MalformedRecord, "expected record '" + std::to_string(u) + ":...'");
		const std::string_view hex = line.substr(colon + 1);
		if (hex.size() != digits)
			throw Error(ErrorCode::BadLength, "pivot " + std::to_string(u) + " has " +
				std::to_string(hex.size()) + " hex digits, expected " + std::to_string(digits));
		const std::uint64_t base = u * pairs;
		for (std::uint64_t d = 0; d < digits; ++d) {
			const int value = hex_value(hex[d]);
			if (value < 0)
				throw Error(ErrorCode::BadHexDigit, std::string("invalid hex digit '") + hex[d] + "'");
			for (unsigned b = 0; b < 4; ++b) {
				const std::uint64_t idx = d * 4 + b;
				const bool bit = (value >> (3 - b)) & 1;
				if (idx < pairs)
					inst.set_bit(base + idx, bit);
				else if (bit)
					throw Error(ErrorCode::BadHexDigit, "nonzero padding bit in pivot " + std::to_string(u));
			}
		}
	}
	return inst;
}

void write_instance_file(const std::string& path, const Instance& inst) {
	write_file(path, serialize(inst));
}

Instance read_instance_file(const std::string& path) { return parse_instance(read_file(path)); }

std::string serialize(const Embedding& emb) {
	std::string out;
	char buf[64];
	for (Point i = 0; i < emb.size(); ++i) {
		std::snprintf(buf, sizeof buf, "%zu %.17g\n", i, emb[i]);
		out += buf;
	}
	return out;
}

Embedding parse_embedding(std::string_view text) {
	std::vector<std::pair<std::size_t, double>> entries;
	for (std::string_view line : split_lines(text)) {
		if (!line.empty() && line.back() == '\r')
			line.remove_suffix(1);
		if (line.empty())
			continue;
		const std::size_t space = line.find(' ');
		std::size_t index = 0;
		double x = 0.0;
		if (space == std::string_view::npos || !parse_number(line.substr(0, space), index) ||
			!parse_number(line.substr(space + 1), x))
			throw Error(ErrorCode::MalformedRecord, "expected 'index position', got '" +
				std::string(line) + "'");
		entries.emplace_back(index, x);
	}
	std::vector<double> positions(entries.size(), 0.0);
	std::vector<bool> seen(entries.size(), false);
	for (const auto& [index, x] : entries) {
		if (index >= entries.size() || seen[index])
			throw Error(ErrorCode::MalformedRecord, "embedding indices must be 0..n-1, each once");
		seen[index] = true;
		positions[index] = x;
	}
	return Embedding(std::move(positions));
}

void write_embedding_file(const std::string& path, const Embedding& emb) {
	write_file(path, serialize(emb));
}

Embedding read_embedding_file(const std::string& path) { return parse_embedding(read_file(path)); }

} // namespace lloc
