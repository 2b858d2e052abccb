#include "oracles.hpp"

#include <lloc/error.hpp>
#include <lloc/lp.hpp>

#include <gtest/gtest.h>

using namespace lloc;

TEST(Lp, SimpleFeasible) {
	// d2 >= 1, d2 - d1 >= 1, d1 >= 1.
	const std::vector<IntRow> rows{{0, 1}, {-1, 1}, {1, 0}};
	for (LpMode mode : {LpMode::floating, LpMode::exact}) {
		const LpSolution s = solve_unit_slack(rows, 2, mode);
		ASSERT_EQ(s.status, LpStatus::feasible);
		EXPECT_EQ(s.x, (std::vector<std::int64_t>{1, 2}));
	}
}

TEST(Lp, Infeasible) {
	// d1 >= 1 and d1 + 1 <= d1.
	EXPECT_EQ(solve_unit_slack({{1}, {0}}, 1, LpMode::exact).status, LpStatus::infeasible);
	// x - y >= 1 and y - x >= 1.
	const std::vector<IntRow> rows{{1, -1}, {-1, 1}};
	EXPECT_EQ(solve_unit_slack(rows, 2, LpMode::exact).status, LpStatus::infeasible);
	EXPECT_NE(solve_unit_slack(rows, 2, LpMode::floating).status, LpStatus::feasible);
}

TEST(Lp, EmptyAndMismatch) {
	EXPECT_EQ(solve_unit_slack({}, 3, LpMode::exact).x, (std::vector<std::int64_t>{1, 1, 1}));
	EXPECT_THROW(solve_unit_slack({{1, 1}}, 3, LpMode::exact), Error);
}

TEST(Lp, RandomSystemsAgreeAcrossModes) {
	// Rows built to hold at a hidden positive point stay feasible; random
	// rows give a mix. Both modes must agree whenever floating commits.
	for (std::uint64_t seed = 0; seed < 200; ++seed) {
		Rng rng(seed);
		const std::size_t dim = 1 + rng.uniform_index(5);
		const std::size_t count = 1 + rng.uniform_index(8);
		std::vector<std::int64_t> hidden(dim);
		for (auto& h : hidden)
			h = 1 + static_cast<std::int64_t>(rng.uniform_index(6));
		const bool planted = seed % 2 == 0;
		std::vector<IntRow> rows;
		while (rows.size() < count) {
			IntRow r(dim);
			std::int64_t dot = 0;
			for (std::size_t t = 0; t < dim; ++t) {
				r[t] = static_cast<int>(rng.uniform_index(5)) - 2;
				dot += r[t] * hidden[t];
			}
			if (!planted || dot >= 1)
				rows.push_back(r);
		}
		const LpSolution ex = solve_unit_slack(rows, dim, LpMode::exact);
		const LpSolution fl = solve_unit_slack(rows, dim, LpMode::floating);
		if (planted)
			EXPECT_EQ(ex.status, LpStatus::feasible);
		if (ex.status == LpStatus::feasible)
			EXPECT_TRUE(satisfies_unit_slack(rows, ex.x));
		if (fl.status == LpStatus::feasible) {
			EXPECT_TRUE(satisfies_unit_slack(rows, fl.x));
			EXPECT_EQ(ex.status, LpStatus::feasible);
		}
		if (fl.status == LpStatus::infeasible)
			EXPECT_EQ(ex.status, LpStatus::infeasible);
	}
}

TEST(Lp, SatisfiesCheck) {
	EXPECT_TRUE(satisfies_unit_slack({{1, -1}}, {3, 2}));
	EXPECT_FALSE(satisfies_unit_slack({{1, -1}}, {3, 3}));
	EXPECT_FALSE(satisfies_unit_slack({{1}}, {-1}));
}
