#include "oracles.hpp"

#include <lloc/error.hpp>
#include <lloc/tournament.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace lloc;

namespace {

Tournament cycle3() {
	Tournament t({1, 2, 3});
	t.set_arc(0, 1);
	t.set_arc(1, 2);
	t.set_arc(2, 0);
	return t;
}

/// Arc i -> j iff (j - i) mod 5 is 1 or 2.
Tournament rotational5() {
	Tournament t({0, 1, 2, 3, 4});
	for (std::size_t i = 0; i < 5; ++i)
		for (std::size_t j = 0; j < 5; ++j) {
			const std::size_t d = (j + 5 - i) % 5;
			if (d == 1 || d == 2)
				t.set_arc(i, j);
		}
	return t;
}

} // namespace

TEST(Tournament, PivotTournamentSmall) {
	const Instance inst = from_embedding(Embedding({0.0, 1.0, 3.0}));
	const Tournament t0 = pivot_tournament(inst, 0);
	EXPECT_EQ(t0.labels(), (std::vector<Point>{1, 2}));
	EXPECT_TRUE(t0.arc(0, 1));
	const Tournament t2 = pivot_tournament(inst, 2);
	EXPECT_EQ(t2.labels(), (std::vector<Point>{0, 1}));
	EXPECT_TRUE(t2.arc(1, 0));
	EXPECT_THROW(pivot_tournament(inst, 3), Error);
}

TEST(Tournament, PlantedTournamentsAreAcyclic) {
	const auto x = oracle::uniform_positions(20, 2);
	const Instance inst = from_embedding(Embedding(x));
	for (Point p = 0; p < 20; ++p) {
		const Tournament t = pivot_tournament(inst, p);
		for (const FasResult& r : {fas_indegree(t), fas_local(t, fas_indegree(t))}) {
			EXPECT_EQ(r.back_arcs, 0u);
			const auto order = topological_order(r, t);
			for (std::size_t i = 0; i + 1 < order.size(); ++i)
				EXPECT_LT(std::abs(x[p] - x[order[i]]), std::abs(x[p] - x[order[i + 1]]));
		}
	}
}

TEST(Tournament, TransitiveTournamentUniqueOrder) {
	Tournament t({5, 6, 7, 8});
	// Topological order 2, 0, 3, 1.
	const std::vector<std::size_t> want{2, 0, 3, 1};
	for (std::size_t a = 0; a < 4; ++a)
		for (std::size_t b = a + 1; b < 4; ++b)
			t.set_arc(want[a], want[b]);
	EXPECT_EQ(fas_indegree(t).ordering, want);
	EXPECT_EQ(fas_exact(t).back_arcs, 0u);
	EXPECT_EQ(fas_exact(t).ordering, want);
	EXPECT_EQ(topological_order(fas_indegree(t), t), (std::vector<Point>{7, 5, 8, 6}));
}

TEST(Tournament, ThreeCycle) {
	const Tournament t = cycle3();
	EXPECT_EQ(fas_indegree(t).back_arcs, 1u);
	EXPECT_EQ(fas_local(t, fas_indegree(t)).back_arcs, 1u);
	EXPECT_EQ(fas_exact(t).back_arcs, 1u);
	// Rotations of the cycle have one back arc; reversals have two.
	for (auto ord : {std::vector<std::size_t>{0, 1, 2}, {1, 2, 0}, {2, 0, 1}})
		EXPECT_EQ(count_back_arcs(t, ord), 1u);
	for (auto ord : {std::vector<std::size_t>{2, 1, 0}, {1, 0, 2}, {0, 2, 1}})
		EXPECT_EQ(count_back_arcs(t, ord), 2u);
}

TEST(Tournament, RotationalFiveVertex) {
	const Tournament t = rotational5();
	// Every vertex has out-degree 2; no ordering does better than 3 back arcs.
	EXPECT_EQ(oracle::fas_minimum(t), 3u);
	EXPECT_EQ(fas_exact(t).back_arcs, 3u);
}

TEST(Tournament, ExactMatchesBruteForceAndIsLexSmallest) {
	for (std::uint64_t seed = 0; seed < 60; ++seed) {
		const Tournament t = oracle::random_tournament(2 + seed % 7, seed);
		const FasResult r = fas_exact(t);
		EXPECT_EQ(r.back_arcs, oracle::fas_minimum(t));
		EXPECT_EQ(oracle::back_arcs(t, r.ordering), r.back_arcs);
		std::vector<std::size_t> ord(t.size());
		std::iota(ord.begin(), ord.end(), std::size_t{0});
		do {
			if (oracle::back_arcs(t, ord) == r.back_arcs) {
				EXPECT_EQ(ord, r.ordering);
				break;
			}
		} while (std::next_permutation(ord.begin(), ord.end()));
	}
}

TEST(Tournament, HeuristicsQuality) {
	int local_matches = 0;
	for (std::uint64_t seed = 0; seed < 200; ++seed) {
		const Tournament t = oracle::random_tournament(8, 1000 + seed);
		const FasResult ind = fas_indegree(t);
		const FasResult loc = fas_local(t, ind);
		const FasResult ex = fas_exact(t);
		EXPECT_EQ(oracle::back_arcs(t, ind.ordering), ind.back_arcs);
		EXPECT_EQ(oracle::back_arcs(t, loc.ordering), loc.back_arcs);
		EXPECT_LE(ind.back_arcs, 5 * ex.back_arcs);
		EXPECT_LE(loc.back_arcs, ind.back_arcs);
		EXPECT_LE(ex.back_arcs, loc.back_arcs);
		local_matches += loc.back_arcs == ex.back_arcs;
	}
	EXPECT_GE(local_matches, 160);
}

TEST(Tournament, LocalKeepsOptimalInput) {
	const Tournament t = oracle::random_tournament(7, 3);
	const FasResult ex = fas_exact(t);
	const FasResult loc = fas_local(t, ex);
	EXPECT_EQ(loc.back_arcs, ex.back_arcs);
}

TEST(Tournament, Guards) {
	EXPECT_THROW(fas_exact(oracle::random_tournament(17, 1)), Error);
	const Tournament t = oracle::random_tournament(4, 1);
	EXPECT_THROW(count_back_arcs(t, {0, 1, 1, 2}), Error);
	EXPECT_THROW(count_back_arcs(t, {0, 1, 2}), Error);
}
