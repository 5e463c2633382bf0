#ifndef COLMKT_LINALG_HPP
#define COLMKT_LINALG_HPP

#include <cstddef>
#include <vector>

#include "rational.hpp"

namespace colmkt
{

/** Dense row-major matrix of exact rationals. */
struct RatMat
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> data;

    RatMat() = default;
    RatMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Rational(0)) {}

    Rational& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    /** Append one row; fixes the column count on first use. */
    void append_row(const RatVec& row);

    RatVec row(std::size_t r) const;

    /** M·x, throws `DimensionMismatch` if x has the wrong length. */
    RatVec apply(const RatVec& x) const;
};

/**
 * Result of an exact linear solve M·x = rhs.
 *
 * Feasible systems carry one particular solution (free variables pinned to 0)
 * and a nullspace basis, one vector per free column in increasing column
 * order.  Infeasible systems carry a left-kernel certificate y with
 * yᵀM = 0 and yᵀrhs != 0, which proves infeasibility exactly.
 */
struct LinearSolveResult
{
    bool feasible = false;
    std::size_t rank = 0;
    RatVec particular;
    std::vector<RatVec> nullspace;
    RatVec left_kernel;
};

/**
 * Exact determinant via Bareiss fraction-free elimination: rows are scaled to
 * integers, the elimination keeps every intermediate value an integer (each
 * division is exact), and the final pivot recovers the determinant after
 * undoing the row scalings.  Throws `NotSquare` for non-square input.
 */
Rational determinant(const RatMat& m);

/** Exact rank via the same elimination. */
std::size_t rank(const RatMat& m);

/**
 * Solve M·x = rhs exactly (see `LinearSolveResult`).  Deterministic: pivot
 * columns left to right, pivot row = first remaining row with a nonzero
 * entry.  Throws `DimensionMismatch` if rhs has the wrong length.
 */
LinearSolveResult solve_linear_system(const RatMat& m, const RatVec& rhs);

}   // namespace colmkt

#endif   // COLMKT_LINALG_HPP
