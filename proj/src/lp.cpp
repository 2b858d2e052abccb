/// @file  lp.cpp
/// @brief Dense tableau simplex (Bland's rule) over double and GMP rationals.

#include <lloc/error.hpp>
#include <lloc/lp.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace lloc {

const char* to_string(LpStatus status) {
	switch (status) {
	case LpStatus::feasible: return "feasible";
	case LpStatus::infeasible: return "infeasible";
	case LpStatus::numerical_failure: return "numerical_failure";
	}
	return "unknown";
}

namespace {

constexpr double kTol = 1e-9;

bool positive(double v) { return v > kTol; }
bool negative(double v) { return v < -kTol; }
bool is_zero(double v) { return std::abs(v) <= kTol; }
bool positive(const mpq_class& v) { return sgn(v) > 0; }
bool negative(const mpq_class& v) { return sgn(v) < 0; }
bool is_zero(const mpq_class& v) { return sgn(v) == 0; }

/// Primal simplex on the dual problem max 1.y s.t. A^T y <= 1, y >= 0.
/// Returns the dual prices (the minimizer of sum(x) s.t. A x >= 1, x >= 0)
/// or nullopt when the dual is unbounded. `iteration_cap` of 0 means none.
template <class T>
std::optional<std::vector<T>> dual_simplex_prices(const std::vector<IntRow>& rows, std::size_t dim,
	std::size_t iteration_cap, bool& capped) {
	capped = false;
	const std::size_t r = rows.size();
	const std::size_t cols = r + dim;
	const std::size_t width = cols + 1;
	std::vector<T> tab(dim * width, T(0));
	std::vector<T> obj(width, T(0));
	std::vector<std::size_t> basis(dim);
	for (std::size_t t = 0; t < dim; ++t) {
		T* row = &tab[t * width];
		for (std::size_t j = 0; j < r; ++j)
			row[j] = rows[j][t];
		row[r + t] = 1;
		row[cols] = 1;
		basis[t] = r + t;
	}
	for (std::size_t j = 0; j < r; ++j)
		obj[j] = -1;

	for (std::size_t iter = 0;; ++iter) {
		if (iteration_cap != 0 && iter >= iteration_cap) {
			capped = true;
			return std::nullopt;
		}
		std::size_t enter = cols;
		for (std::size_t j = 0; j < cols; ++j) {
			if (negative(obj[j])) {
				enter = j;
				break;
			}
		}
		if (enter == cols) {
			std::vector<T> prices(dim);
			for (std::size_t t = 0; t < dim; ++t)
				prices[t] = obj[r + t];
			return prices;
		}
		std::size_t leave = dim;
		for (std::size_t t = 0; t < dim; ++t) {
			const T& a = tab[t * width + enter];
			if (!positive(a))
				continue;
			if (leave == dim) {
				leave = t;
				continue;
			}
			// Compare rhs_t / a against rhs_leave / a_leave without dividing.
			const T lhs = tab[t * width + cols] * tab[leave * width + enter];
			const T rhs = tab[leave * width + cols] * a;
			if (lhs < rhs || (!(rhs < lhs) && basis[t] < basis[leave]))
				leave = t;
		}
		if (leave == dim)
			return std::nullopt;

		T* prow = &tab[leave * width];
		const T pivot = prow[enter];
		for (std::size_t j = 0; j < width; ++j)
			if (!is_zero(prow[j]))
				prow[j] /= pivot;
		prow[enter] = 1;
		auto eliminate = [&](T* row) {
			const T factor = row[enter];
			if (is_zero(factor))
				return;
			for (std::size_t j = 0; j < width; ++j)
				if (!is_zero(prow[j]))
					row[j] -= factor * prow[j];
			row[enter] = 0;
		};
		for (std::size_t t = 0; t < dim; ++t)
			if (t != leave)
				eliminate(&tab[t * width]);
		eliminate(obj.data());
		basis[leave] = enter;
	}
}

std::int64_t gcd_reduce(std::vector<std::int64_t>& x) {
	std::int64_t g = 0;
	for (auto v : x)
		g = std::gcd(g, v);
	if (g > 1)
		for (auto& v : x)
			v /= g;
	return g;
}

LpSolution finish(const std::vector<IntRow>& rows, std::vector<std::int64_t> x) {
	gcd_reduce(x);
	if (!satisfies_unit_slack(rows, x))
		return {LpStatus::numerical_failure, {}};
	return {LpStatus::feasible, std::move(x)};
}

LpSolution solve_floating(const std::vector<IntRow>& rows, std::size_t dim) {
	bool capped = false;
	const std::size_t cap = 50 * (rows.size() + dim) + 1000;
	const auto prices = dual_simplex_prices<double>(rows, dim, cap, capped);
	if (!prices)
		return {LpStatus::numerical_failure, {}};
	// Each row value is >= 1 up to rounding. Scaling by twice the largest row
	// l1-norm leaves room for rounding every coordinate to an integer.
	long norm = 1;
	for (const auto& row : rows) {
		long s = 0;
		for (int a : row)
			s += std::abs(a);
		norm = std::max(norm, s);
	}
	const double scale = 2.0 * static_cast<double>(norm);
	std::vector<std::int64_t> x(dim);
	for (std::size_t t = 0; t < dim; ++t) {
		const double v = std::max(0.0, (*prices)[t]) * scale;
		if (!(v < 0x1.0p52))
			return {LpStatus::numerical_failure, {}};
		x[t] = std::llround(v);
	}
	return finish(rows, std::move(x));
}

LpSolution solve_exact(const std::vector<IntRow>& rows, std::size_t dim) {
	bool capped = false;
	const auto prices = dual_simplex_prices<mpq_class>(rows, dim, 0, capped);
	if (!prices)
		return {LpStatus::infeasible, {}};
	mpz_class lcm = 1;
	for (const auto& p : *prices)
		mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
	std::vector<mpz_class> scaled(dim);
	mpz_class g = 0;
	for (std::size_t t = 0; t < dim; ++t) {
		scaled[t] = (*prices)[t].get_num() * (lcm / (*prices)[t].get_den());
		mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled[t].get_mpz_t());
	}
	std::vector<std::int64_t> x(dim);
	const mpz_class limit = mpz_class(1) << 52;
	for (std::size_t t = 0; t < dim; ++t) {
		if (g > 1)
			scaled[t] /= g;
		if (scaled[t] >= limit)
			return {LpStatus::numerical_failure, {}};
		x[t] = scaled[t].get_si();
	}
	return finish(rows, std::move(x));
}

} // namespace

bool satisfies_unit_slack(const std::vector<IntRow>& rows, const std::vector<std::int64_t>& x) {
	for (auto v : x)
		if (v < 0)
			return false;
	for (const auto& row : rows) {
		if (row.size() != x.size())
			return false;
		__int128 s = 0;
		for (std::size_t t = 0; t < row.size(); ++t)
			s += static_cast<__int128>(row[t]) * x[t];
		if (s < 1)
			return false;
	}
	return true;
}

LpSolution solve_unit_slack(const std::vector<IntRow>& rows, std::size_t dim, LpMode mode) {
	for (const auto& row : rows) {
		if (row.size() != dim)
			throw Error(ErrorCode::LengthMismatch, "LP row length differs from dimension");
		// No positive coefficient: a . x <= 0 < 1 for every x >= 0.
		if (std::none_of(row.begin(), row.end(), [](int a) { return a > 0; }))
			return {LpStatus::infeasible, {}};
	}
	if (rows.empty())
		return {LpStatus::feasible, std::vector<std::int64_t>(dim, 1)};
	return mode == LpMode::exact ? solve_exact(rows, dim) : solve_floating(rows, dim);
}

} // namespace lloc
