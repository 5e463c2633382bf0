#ifndef COLMKT_ARBITRAGE_HPP
#define COLMKT_ARBITRAGE_HPP

#include <optional>
#include <vector>

#include "gains.hpp"
#include "market.hpp"
#include "polytope.hpp"
#include "rational.hpp"

namespace colmkt
{

/** One candidate martingale measure per agent (same atom order as the model). */
struct MeasureVector
{
    std::vector<RatVec> per_agent;
};

/** Every component strictly positive on every atom. */
bool full_support(const MeasureVector& mv);

/**
 * Closed polytope of agent i's martingale measures: Q >= 0, mass one, and
 * for every trade date t, information block B in F^i_{t-1} and accessible
 * asset j,   sum_{w in B} Q(w) (X^j_t(w) - X^j_{t-1}(w)) = 0.
 * Its strictly positive points are exactly the equivalent martingale
 * measures; when any exist the polytope is their closure.
 */
Polytope agent_mm_polytope(const MarketModel& model, std::size_t agent);

/**
 * Closed polytope of measure vectors (Q^1..Q^N): the product of the agent
 * polytopes cut by one polar equality per explicit exchange generator,
 * sum_i E_{Q^i}[Y^i] = 0.  Deterministic zero-sum transfers add no rows
 * (they follow from each Q^i having mass one).  Coordinates are agent-major.
 */
Polytope collective_mm_polytope(const MarketModel& model, const ExchangeSpace& exchange);

/** Outcome of maximizing the smallest flagged coordinate over a polytope. */
struct MaxTResult
{
    bool feasible = false;
    Rational t_star;   // >= 0 whenever feasible
    RatVec point;      // attaining point
};

/**
 * Solve max t s.t. x in polytope, x_k >= t at every nonneg coordinate.
 * `feasible` is false when the polytope itself is empty.  A strictly
 * positive t_star certifies a full-support point; t_star = 0 certifies that
 * none exists (every point touches the boundary).
 */
MaxTResult max_t_interior(const Polytope& poly);

/**
 * A collective arbitrage: strategies per agent and an exchange realization
 * whose combined outcome is nonnegative everywhere and positive somewhere.
 * The exchange used is  sum_m generator_coefficients[m] * Y_m  plus the
 * deterministic zero-sum vector `deterministic_transfer`.
 */
struct ArbitrageWitness
{
    std::vector<AgentStrategy> strategies;
    RatVec generator_coefficients;
    RatVec deterministic_transfer;   // N entries summing to zero
    RandomVector outcome;
};

/**
 * Verdict of a no-arbitrage style check.  `holds` is decided twice — by the
 * dual (max-t over the measure polytope) and by the primal (LP searching for
 * a nonnegative nonzero outcome, bounded by 1 componentwise so the optimum
 * is 0 exactly when no arbitrage exists) — and the two must agree, else
 * `InternalInconsistency` is thrown.
 */
struct NcaReport
{
    bool holds = false;
    bool polytope_empty = false;
    std::optional<Rational> max_t;            // absent when the polytope is empty
    std::optional<MeasureVector> measure;     // full-support point, when holds
    std::optional<ArbitrageWitness> witness;  // when violated
};

/** Classical single-agent viability under that agent's own filtration. */
NcaReport check_na_agent(const MarketModel& model, std::size_t agent);

/**
 * Classical viability of the pooled market: one synthetic agent holding the
 * union of all assets under the join (coarsest common refinement) of the
 * agents' filtrations.  The synthetic single-agent market is returned so a
 * witness can be interpreted.
 */
struct GlobalNaReport
{
    NcaReport report;
    MarketModel joined_market;
};

GlobalNaReport check_na_global(const MarketModel& model);

/** Collective viability given the exchange space. */
NcaReport check_nca(const MarketModel& model, const ExchangeSpace& exchange);

/**
 * Relations audited (throwing `ImplicationViolated` on any breach):
 *   - pooled viability implies collective viability (zero-sum generators only),
 *   - collective viability implies every agent's viability,
 *   - with deterministic transfers only, collective viability is equivalent
 *     to the conjunction of the agents' viabilities.
 */
struct ImplicationsAudit
{
    bool na_global = false;
    bool nca = false;
    std::vector<bool> na_agent;
    bool generators_zero_sum = false;     // first leg applicable
    bool deterministic_only = false;      // equivalence leg applicable
};

ImplicationsAudit implications_audit(const MarketModel& model, const ExchangeSpace& exchange);

/** True when the polytope holding the certified interior point is a single
 *  point (affine dimension zero). */
bool is_singleton(const Polytope& poly, const RatVec& interior_point);

/**
 * Valuation bounds and extreme valuations of a claim across all collective
 * martingale measure vectors:  sum range [lower, upper] of
 * sum_i E_{Q^i}[f^i], the extreme points of the closure of the valuation-
 * tuple set in R^N (omitted beyond the vertex dimension limit), and whether
 * the claim is replicable (in which case the set is a single point).
 * Requires collective viability (NcaViolated).
 */
struct PriceSetResult
{
    Rational sum_lower;
    Rational sum_upper;
    bool replicable = false;
    bool vertices_available = false;
    std::vector<RatVec> vertices;   // extreme valuation tuples, lexicographic
};

PriceSetResult price_set(const MarketModel& model, const ExchangeSpace& exchange,
                         const RandomVector& claim, int dim_limit = 0);

/**
 * Append one asset per agent paying E_{Q^i}[f^i | F^i_t], accessible to that
 * agent only.  `measure` must be a full-support collective martingale
 * measure vector for the exchange space (MeasureNotCollectiveMartingale).
 * The extension preserves collective viability.
 */
MarketModel extended_market(const MarketModel& model, const ExchangeSpace& exchange,
                            const RandomVector& claim, const MeasureVector& measure);

}   // namespace colmkt

#endif   // COLMKT_ARBITRAGE_HPP
