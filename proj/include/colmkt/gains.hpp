#ifndef COLMKT_GAINS_HPP
#define COLMKT_GAINS_HPP

#include <vector>

#include "market.hpp"
#include "rational.hpp"

namespace colmkt
{

/**
 * One spanning element of an agent's terminal trading gains: buy one unit of
 * accessible asset `asset_pos` (position within the agent's access list) on
 * block `block` of the agent's time-(t-1) partition, sell at t.  `values` is
 * the resulting payoff per atom: 1_B * (X_t - X_{t-1}).
 */
struct GainsGenerator
{
    int t = 0;          // trade date, 1..T
    int block = 0;      // index into F^i_{t-1}
    int asset_pos = 0;  // index into the agent's access list
    RatVec values;
};

/**
 * Deterministically ordered basis (t, then block, then asset) spanning the
 * space of terminal gains an agent can trade into.  Zero generators (from
 * locally constant prices) are kept so coefficients stay aligned with
 * strategy keys.
 */
struct GainsBasis
{
    std::size_t agent = 0;
    std::vector<GainsGenerator> generators;
};

GainsBasis gains_basis(const MarketModel& model, std::size_t agent);

/**
 * Predictable holdings in the agent's accessible risky assets:
 * holdings[t-1][block][asset_pos] is the position carried over (t-1, t] when
 * the time-(t-1) information block is `block`.
 */
struct AgentStrategy
{
    std::vector<std::vector<std::vector<Rational>>> holdings;
};

/** All-zero strategy of the correct shape for the agent. */
AgentStrategy zero_strategy(const MarketModel& model, std::size_t agent);

/** Shape check against the agent's filtration/access (BlockKeyMismatch). */
void validate_strategy_shape(const MarketModel& model, std::size_t agent,
                             const AgentStrategy& strategy);

/** Terminal gain per atom of a strategy: sum of holdings times increments. */
RatVec gain_of_strategy(const MarketModel& model, std::size_t agent,
                        const AgentStrategy& strategy);

/** Gains accumulated only over trade dates <= t. */
RatVec gain_of_strategy_upto(const MarketModel& model, std::size_t agent,
                             const AgentStrategy& strategy, int t);

/** Flatten holdings into coefficients aligned with `gains_basis` order. */
RatVec strategy_to_coefficients(const MarketModel& model, std::size_t agent,
                                const AgentStrategy& strategy);

/** Inverse of `strategy_to_coefficients`. */
AgentStrategy strategy_from_coefficients(const MarketModel& model, std::size_t agent,
                                         const RatVec& coefficients);

/** Y_{1:T} and the running sums Y_{1:t} of a schedule. */
struct AggregatedExchanges
{
    RandomVector total;
    std::vector<RandomVector> running;   // running[t-1] = Y_{1:t}
};

AggregatedExchanges aggregate_exchanges(const MarketModel& model,
                                        const ExchangeSchedule& schedule);

/**
 * Fully specified collectively self-financing strategy: initial wealths,
 * risky holdings, and the riskless (numeraire) positions
 * riskless[agent][t-1][block] that make the books balance.
 */
struct CsfStrategy
{
    RatVec initial_wealth;
    std::vector<AgentStrategy> risky;
    std::vector<std::vector<RatVec>> riskless;
};

/**
 * Complete risky holdings into a collectively self-financing strategy: the
 * riskless position is the unique one satisfying, at every rebalancing date
 * t = 1..T-1 and atom,
 *
 *     holdings(t+1) . (1, X_t)  =  holdings(t) . (1, X_t) + Y_t ,
 *
 * seeded by initial wealth at time 0.  Purely bookkeeping: no admissibility
 * or optimality is implied.
 */
CsfStrategy lift_to_csf(const MarketModel& model, const RatVec& initial_wealth,
                        const std::vector<AgentStrategy>& risky,
                        const ExchangeSchedule& schedule);

/** Per-agent wealth paths values[agent][t][atom], t = 0..T. */
struct ValueProcess
{
    std::vector<std::vector<RatVec>> values;
};

/**
 * Evaluate V^i_t = holdings(t) . (1, X_t) + Y^i_t (and V_0 = initial
 * wealth), verifying the self-financing identity at every rebalancing date
 * (CsfViolation) and the running decomposition
 * V^i_t = v^i_0 + gains_{1..t} + Y^i_{1:t} (InternalInconsistency — that one
 * cannot fail for balanced books).
 */
ValueProcess value_process(const MarketModel& model, const CsfStrategy& strategy,
                           const ExchangeSchedule& schedule);

}   // namespace colmkt

#endif   // COLMKT_GAINS_HPP
