#include "oracles.hpp"

#include <lloc/error.hpp>
#include <lloc/instance.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <string>

using namespace lloc;

namespace {

Instance from_013() { return from_embedding(Embedding({0.0, 1.0, 3.0})); }

ErrorCode code_of(auto&& fn) {
	try {
		fn();
	} catch (const Error& e) {
		return e.code();
	}
	ADD_FAILURE() << "no lloc::Error thrown";
	return ErrorCode::Io;
}

} // namespace

TEST(Instance, SlotLayoutIsBijective) {
	for (std::size_t n : {3u, 4u, 7u, 12u}) {
		Instance inst(n);
		std::vector<bool> seen(inst.total_constraints(), false);
		for (Point u = 0; u < n; ++u)
			for (Point v = 0; v < n; ++v)
				for (Point w = v + 1; w < n; ++w) {
					if (u == v || u == w)
						continue;
					const auto s = inst.slot(u, v, w);
					ASSERT_LT(s, inst.total_constraints());
					EXPECT_FALSE(seen[s]);
					seen[s] = true;
					Point a, b, c;
					inst.decode_slot(s, a, b, c);
					EXPECT_EQ(a, u);
					EXPECT_EQ(b, v);
					EXPECT_EQ(c, w);
				}
		EXPECT_EQ(inst.total_constraints(), n * (n - 1) * (n - 2) / 2);
	}
}

TEST(Instance, FromEmbeddingSmallExample) {
	const Instance inst = from_013();
	EXPECT_TRUE(inst.contains(0, 1, 2));
	EXPECT_TRUE(inst.contains(1, 0, 2));
	EXPECT_TRUE(inst.contains(2, 1, 0));
	EXPECT_FALSE(inst.contains(0, 2, 1));
	EXPECT_FALSE(inst.contains(1, 2, 0));
	EXPECT_FALSE(inst.contains(2, 0, 1));
}

TEST(Instance, FromEmbeddingTies) {
	EXPECT_EQ(code_of([] { from_embedding(Embedding({0.0, 1.0, 2.0})); }), ErrorCode::TieEncountered);
	const Instance lower = from_embedding(Embedding({0.0, 1.0, 2.0}), TieRule::lower_index_closer);
	EXPECT_TRUE(lower.contains(1, 0, 2));
	EXPECT_EQ(code_of([] { from_embedding(Embedding({0.0, 1.0})); }), ErrorCode::InvalidArgument);
}

TEST(Instance, EmbeddingRejectsNonFinite) {
	EXPECT_EQ(code_of([] { Embedding({0.0, std::nan("")}); }), ErrorCode::NonFiniteInput);
	EXPECT_EQ(code_of([] { Embedding({0.0, 1.0 / 0.0}); }), ErrorCode::NonFiniteInput);
}

TEST(Instance, GenericPlantedHasNoViolations) {
	for (std::uint64_t seed = 1; seed <= 5; ++seed) {
		const Embedding e(oracle::uniform_positions(20, seed));
		EXPECT_EQ(violated_count(from_embedding(e), e), 0u);
	}
}

TEST(Instance, ViolatedCountExamples) {
	const Instance inst = from_013();
	EXPECT_EQ(violated_count(inst, Embedding({0.0, 1.0, 3.0})), 0u);
	EXPECT_EQ(violated_count(inst, Embedding({0.0, 2.0, 3.0})), 1u);
	EXPECT_EQ(violated_count(inst, Embedding({0.0, 0.0, 0.0})), 3u);
	EXPECT_EQ(code_of([&] { violated_count(inst, Embedding({0.0, 1.0})); }), ErrorCode::LengthMismatch);
}

TEST(Instance, ViolatedCountMatchesNaiveOracle) {
	for (std::uint64_t seed = 1; seed <= 20; ++seed) {
		const Instance inst = oracle::random_instance(3 + seed % 9, seed);
		auto x = oracle::uniform_positions(inst.size(), seed + 100);
		if (seed % 3 == 0)
			x[1] = x[0]; // force some ties
		EXPECT_EQ(violated_count(inst, Embedding(x)), oracle::violated_naive(inst, x));
	}
}

TEST(Instance, ViolatedCountAffineInvariant) {
	const Instance inst = oracle::random_instance(9, 3);
	const auto x = oracle::uniform_positions(9, 4);
	std::vector<double> y(x.size());
	for (std::size_t i = 0; i < x.size(); ++i)
		y[i] = 4.0 * x[i] - 7.0;
	EXPECT_EQ(violated_count(inst, Embedding(x)), violated_count(inst, Embedding(y)));
}

TEST(Instance, TieSemanticsLowerIndexCloser) {
	const Instance inst = from_embedding(Embedding({0.0, 1.0, 2.0}), TieRule::lower_index_closer);
	const Embedding e({0.0, 1.0, 2.0});
	EXPECT_EQ(violated_count(inst, e), 1u);
	EXPECT_EQ(violated_count(inst, e, TieSemantics::lower_index_closer), 0u);
}

TEST(Instance, CorruptCountsAndDeterminism) {
	const Instance base = from_embedding(Embedding(oracle::uniform_positions(10, 1)));
	EXPECT_EQ(corrupt(base, {0.0, 5}), base);
	EXPECT_EQ(corrupt(corrupt(base, {1.0, 3}), {1.0, 8}), base);
	const Instance half = corrupt(base, {0.5, 7});
	EXPECT_EQ(hamming_distance(base, half), 180u);
	EXPECT_EQ(half, corrupt(base, {0.5, 7}));
	EXPECT_NE(half, corrupt(base, {0.5, 8}));
	for (double f : {0.01, 0.1, 0.33, 0.9}) {
		EXPECT_EQ(hamming_distance(base, corrupt(base, {f, 11})), corruption_flip_count(base, f));
		EXPECT_EQ(corruption_flip_count(base, f), static_cast<std::uint64_t>(f * 360.0));
	}
}

TEST(Instance, ViolatedEstimate) {
	const Instance inst = from_013();
	EXPECT_EQ(violated_estimate(inst, Embedding({0.0, 1.0, 3.0}), 500, 1), 0.0);
	EXPECT_EQ(violated_estimate(inst, Embedding({0.0, 0.0, 0.0}), 1000, 1), 1.0);

	const Embedding truth(oracle::uniform_positions(30, 9));
	const Instance noisy = corrupt(from_embedding(truth), {0.1, 2});
	const double exact = static_cast<double>(violated_count(noisy, truth)) / static_cast<double>(noisy.total_constraints());
	int within = 0;
	for (std::uint64_t seed = 0; seed < 100; ++seed) {
		const double est = violated_estimate(noisy, truth, 10000, seed);
		within += std::abs(est - exact) <= 0.02;
	}
	EXPECT_GE(within, 95);
	EXPECT_EQ(violated_estimate(noisy, truth, 1000, 4), violated_estimate(noisy, truth, 1000, 4));
}

TEST(Instance, PivotGoodness) {
	const Instance inst = from_013();
	EXPECT_EQ(pivot_goodness(inst, Embedding({0.0, 1.0, 3.0}), 0), 1.0);
	EXPECT_EQ(pivot_goodness(inst, Embedding({0.0, 2.0, 3.0}), 1), 0.0);
	EXPECT_EQ(code_of([&] { pivot_goodness(inst, Embedding({0.0, 2.0, 3.0}), 3); }), ErrorCode::IndexOutOfRange);

	const Instance r = oracle::random_instance(11, 5);
	const Embedding e(oracle::uniform_positions(11, 6));
	double satisfied = 0.0;
	for (Point i = 0; i < 11; ++i)
		satisfied += pivot_goodness(r, e, i) * static_cast<double>(r.pairs_per_pivot());
	EXPECT_NEAR(satisfied + static_cast<double>(violated_count(r, e)), static_cast<double>(r.total_constraints()), 1e-9);
}

TEST(Instance, MixedGap) {
	EXPECT_EQ(mixed_gap_positions(2), (std::vector<double>{0, 2, 4, 5, 6}));
	const Instance inst = mixed_gap_instance(2);
	EXPECT_EQ(inst.size(), 5u);
	const Embedding identity(mixed_gap_positions(2));
	EXPECT_EQ(violated_count(inst, identity, TieSemantics::lower_index_closer), 0u);

	const Instance k20 = mixed_gap_instance(20);
	std::vector<double> spaced(k20.size());
	for (std::size_t i = 0; i < spaced.size(); ++i)
		spaced[i] = static_cast<double>(i);
	// Exact count, cross-checked by direct enumeration: 1135 of 31980.
	EXPECT_EQ(k20.total_constraints(), 31980u);
	EXPECT_EQ(violated_count(k20, Embedding(spaced)), 1135u);
}

TEST(Instance, SerializeRoundTrip) {
	for (std::uint64_t seed = 0; seed < 100; ++seed) {
		const Instance inst = oracle::random_instance(3 + seed % 38, seed);
		EXPECT_EQ(parse_instance(serialize(inst)), inst);
	}
	const std::string three = serialize(from_013());
	EXPECT_EQ(three, "LLOC 1\nn=3\n0:8\n1:8\n2:0\n");
}

TEST(Instance, ParseErrors) {
	const std::string good = serialize(oracle::random_instance(6, 1));
	EXPECT_EQ(code_of([&] { parse_instance("LLOC 2\nn=3\n0:8\n1:8\n2:0\n"); }), ErrorCode::MalformedHeader);
	EXPECT_EQ(code_of([&] { parse_instance("LLOC 1\nn=x\n"); }), ErrorCode::MalformedHeader);
	EXPECT_EQ(code_of([&] { parse_instance("LLOC 1\nn=3\n0:8\n1:8\n"); }), ErrorCode::BadLength);
	EXPECT_EQ(code_of([&] { parse_instance("LLOC 1\nn=3\n0:8\n1:88\n2:0\n"); }), ErrorCode::BadLength);
	EXPECT_EQ(code_of([&] { parse_instance("LLOC 1\nn=3\n0:8\n1:g\n2:0\n"); }), ErrorCode::BadHexDigit);
	EXPECT_EQ(code_of([&] { parse_instance("LLOC 1\nn=3\n0:8\n1:4\n2:0\n"); }), ErrorCode::BadHexDigit);
	EXPECT_EQ(code_of([&] { parse_instance("LLOC 1\nn=3\n0:8\n2:8\n1:0\n"); }), ErrorCode::MalformedRecord);
	EXPECT_EQ(code_of([&] { parse_instance(good.substr(0, good.size() - 3)); }), ErrorCode::BadLength);
}

TEST(Instance, EmbeddingFileRoundTrip) {
	const Embedding e({0.1, -3.5e-7, 12345.678901234567, 1.0 / 3.0});
	EXPECT_EQ(parse_embedding(serialize(e)), e);
	const std::string path = ::testing::TempDir() + "emb_roundtrip.txt";
	write_embedding_file(path, e);
	EXPECT_EQ(read_embedding_file(path), e);
	std::remove(path.c_str());
	EXPECT_EQ(code_of([] { parse_embedding("0 1.0\n2 3.0\n"); }), ErrorCode::MalformedRecord);
}
