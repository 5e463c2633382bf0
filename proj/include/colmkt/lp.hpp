#ifndef COLMKT_LP_HPP
#define COLMKT_LP_HPP

#include <optional>
#include <vector>

#include "linalg.hpp"
#include "rational.hpp"

namespace colmkt
{

/**
 * Exact linear program over rationals:
 *
 *     optimize  cᵀx   (min by default, max when `maximize` is set)
 *     s.t.      eq_coeffs · x  = eq_rhs
 *               le_coeffs · x <= le_rhs
 *               x_k >= lower_bounds[k]  where a bound is present (free otherwise)
 *
 * Upper bounds and >= rows are expressed by negating a <= row.
 */
struct LinearProgram
{
    std::size_t num_vars = 0;
    RatVec objective;
    bool maximize = false;
    RatMat eq_coeffs;
    RatVec eq_rhs;
    RatMat le_coeffs;
    RatVec le_rhs;
    std::vector<std::optional<Rational>> lower_bounds;

    explicit LinearProgram(std::size_t n = 0)
        : num_vars(n), objective(n, Rational(0)), lower_bounds(n, std::nullopt)
    {
    }

    void add_eq(const RatVec& row, const Rational& rhs);
    void add_le(const RatVec& row, const Rational& rhs);
};

/**
 * Exact proof that the constraint system is empty: multipliers u (equalities,
 * free sign), v >= 0 (<= rows) and w >= 0 (lower bounds, zero at free
 * variables) with  uᵀC + vᵀA - w = 0  and  uᵀd + vᵀb - wᵀl < 0.
 */
struct FarkasCertificate
{
    RatVec eq_multipliers;
    RatVec le_multipliers;
    RatVec bound_multipliers;
};

enum class LPStatus
{
    Optimal,
    Infeasible,
    Unbounded
};

struct LPResult
{
    LPStatus status = LPStatus::Infeasible;
    Rational value;                        // Optimal only, in the original sense
    RatVec primal;                         // Optimal only
    std::optional<FarkasCertificate> farkas;   // Infeasible only
    RatVec ray;                            // Unbounded only: improving direction
};

/**
 * Two-phase primal simplex with Bland's anti-cycling rule, entirely in exact
 * rational arithmetic.  Deterministic: entering variable = lowest eligible
 * index, ratio ties broken by lowest basis index, fixed standard-form
 * construction order.  Infeasible outcomes always carry a verified Farkas
 * certificate; unbounded outcomes carry an improving ray r with
 * eq·r = 0, le·r <= 0, r_k >= 0 at bounded variables.
 */
LPResult solve_lp(const LinearProgram& lp);

/** Exact check of a Farkas certificate against the program. */
bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert);

}   // namespace colmkt

#endif   // COLMKT_LP_HPP
