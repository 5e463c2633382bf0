#ifndef COLMKT_POLYTOPE_HPP
#define COLMKT_POLYTOPE_HPP

#include <optional>
#include <vector>

#include "linalg.hpp"
#include "rational.hpp"

namespace colmkt
{

/**
 * Closed convex polytope in H-representation:
 *
 *     { x in Q^dim :  eq_coeffs·x = eq_rhs,
 *                     x_k >= 0 where nonneg[k],
 *                     ineq_coeffs·x <= ineq_rhs }
 *
 * `vertices` is a write-once cache filled by whoever runs the enumeration;
 * every cached vertex is a basic feasible point of the system.
 */
struct Polytope
{
    std::size_t dim = 0;
    RatMat eq_coeffs;
    RatVec eq_rhs;
    std::vector<bool> nonneg;
    RatMat ineq_coeffs;
    RatVec ineq_rhs;
    std::optional<std::vector<RatVec>> vertices;

    explicit Polytope(std::size_t n = 0) : dim(n), nonneg(n, false) {}

    void add_eq(const RatVec& row, const Rational& rhs);
    void add_ineq(const RatVec& row, const Rational& rhs);
};

/** Closed membership test (equalities exact, inequalities weak). */
bool contains(const Polytope& p, const RatVec& x);

/** Dimension cap for vertex enumeration: COLMKT_MAX_VERTEX_DIM or 24. */
int default_vertex_dimension_limit();

/**
 * All vertices, exactly: exhaustive search over candidate active sets (each
 * vertex is the unique solution of the equalities plus a maximal independent
 * choice of tight inequality/bound rows), with dependent choices pruned as
 * the search descends.  Output is deduplicated and sorted lexicographically.
 *
 * Throws `DimensionLimitExceeded` when dim exceeds the limit (pass
 * `dim_limit` <= 0 to use `default_vertex_dimension_limit()`); callers are
 * expected to fall back to LP-only queries in that case.
 */
std::vector<RatVec> enumerate_vertices(const Polytope& p, int dim_limit = 0);

/**
 * Affine dimension of the polytope, certified by a strictly interior point:
 * every flagged coordinate strictly positive and every extra inequality
 * strict, so no inequality is implicitly tight and the affine hull is the
 * solution set of the equalities alone.  Returns dim - rank(eq_coeffs).
 * Throws `PointNotStrictlyInterior` otherwise.
 */
std::size_t affine_dimension(const Polytope& p, const RatVec& interior_point);

}   // namespace colmkt

#endif   // COLMKT_POLYTOPE_HPP
