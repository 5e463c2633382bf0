#ifndef COLMKT_RANDOM_MARKET_HPP
#define COLMKT_RANDOM_MARKET_HPP

#include <cstdint>

#include "gains.hpp"
#include "market.hpp"
#include "rational.hpp"

namespace colmkt
{

/**
 * Deterministic 64-bit generator (SplitMix64 update).  Self-contained so a
 * seed produces the same stream on every platform and standard library —
 * the distribution adapters in <random> are not portable across vendors.
 */
struct Rng
{
    std::uint64_t state = 0;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64();

    /** Uniform-enough integer in [lo, hi], inclusive; requires lo <= hi. */
    int next_int(int lo, int hi);

    /** num/den with num in [lo, hi] and den in [1, max_den]. */
    Rational next_rational(int lo, int hi, int max_den);
};

struct RandomMarketOptions
{
    int min_agents = 2;
    int max_agents = 3;
    int min_atoms = 3;
    int max_atoms = 9;
    int min_horizon = 1;
    int max_horizon = 3;
    int max_children = 3;       // splitting factor per information block
    int max_assets_per_agent = 2;

    /**
     * true: price every asset as a martingale (backward, under one shared
     * full-support measure) on its owner's information tree, which keeps the
     * market collectively viable for every zero-sum exchange space and every
     * agent classically viable.  false: draw prices forward without any
     * structure, so arbitrages (single-agent and collective) occur freely.
     */
    bool martingale_prices = true;
};

/**
 * A segmented market drawn from the options: shared atoms and reference
 * probability, one random refining information tree per agent, and one or
 * two assets per agent, adapted to (and tradeable only under) the owner's
 * tree.  The model always passes `validate_model`.
 */
MarketModel random_market(Rng& rng, const RandomMarketOptions& options);

/** Claim with each component drawn constant on the owner's terminal blocks. */
RandomVector random_claim(const MarketModel& model, Rng& rng, int lo, int hi, int max_den);

/**
 * Zero-sum exchange space all agents can verify: either the block transfers
 * of the time-t common partition for a random t, or a few dense zero-sum
 * vectors drawn constant on the terminal common partition.  May also come
 * out empty (deterministic transfers only).
 */
ExchangeSpace random_exchange_space(const MarketModel& model, Rng& rng);

/** Schedule of exchange vectors Y_1..Y_T, Y_t drawn on the time-t common
 *  partition (zero-sum across agents). */
ExchangeSchedule random_schedule(const MarketModel& model, Rng& rng, int lo, int hi,
                                 int max_den);

/** Random holdings of the right predictable shape for each agent. */
std::vector<AgentStrategy> random_strategies(const MarketModel& model, Rng& rng, int lo,
                                             int hi, int max_den);

}   // namespace colmkt

#endif   // COLMKT_RANDOM_MARKET_HPP
