/// @file  lp.hpp
/// @brief Strict feasibility of homogeneous integer systems.
///
/// Every system this library meets has the form "find x >= 0 with
/// a_r . x > 0 for all rows r". Such a system is homogeneous, so strict
/// feasibility is equivalent to feasibility of a_r . x >= 1. The solver
/// minimizes sum(x) subject to those rows by running the primal simplex
/// method on the dual (max sum(y) s.t. A^T y <= 1, y >= 0). That dual
/// starts from a feasible slack basis, so no phase one is needed, and an
/// unbounded dual proves the original system infeasible.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lloc {

using IntRow = std::vector<int>;

enum class LpStatus { feasible, infeasible, numerical_failure };
enum class LpMode { floating, exact };

const char* to_string(LpStatus status);

struct LpSolution {
	LpStatus status = LpStatus::infeasible;
	/// Nonnegative integer point with a_r . x >= 1 for every row, verified in
	/// exact integer arithmetic. Empty unless status == feasible.
	std::vector<std::int64_t> x;
};

/// Solves rows . x >= 1, x >= 0 over `dim` variables.
///
/// exact: rational simplex (GMP); the answer is always certified.
/// floating: double simplex, then the solution is scaled, rounded to
/// integers and verified exactly. An unverifiable point or an
/// infeasibility claim from the floating solver yields numerical_failure;
/// the caller should retry in exact mode.
///
/// Infeasibility detected without the simplex (a row with no positive
/// coefficient) is reported in either mode.
LpSolution solve_unit_slack(const std::vector<IntRow>& rows, std::size_t dim, LpMode mode);

/// Exact check of rows . x >= 1 and x >= 0.
bool satisfies_unit_slack(const std::vector<IntRow>& rows, const std::vector<std::int64_t>& x);

} // namespace lloc
