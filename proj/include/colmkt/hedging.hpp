#ifndef COLMKT_HEDGING_HPP
#define COLMKT_HEDGING_HPP

#include <optional>
#include <vector>

#include "arbitrage.hpp"
#include "gains.hpp"
#include "market.hpp"
#include "rational.hpp"

namespace colmkt
{

/**
 * Exact witness for a hedging price: deterministic transfers `transfer`
 * (one per agent, summing to `price`), trading strategies, an exchange
 * realization (explicit generator coefficients plus a deterministic zero-sum
 * vector), and the pointwise slack of the hedge inequality:
 *
 *   super:      transfer + gains + exchange - claim = slack >= 0
 *   sub:        claim - (transfer + gains + exchange) = slack >= 0
 *   replicate:  slack = 0
 */
struct HedgeCertificate
{
    Rational price;
    RatVec transfer;
    std::vector<AgentStrategy> strategies;
    RatVec generator_coefficients;
    RatVec deterministic_transfer;
    RandomVector slack;
};

struct PriceResult
{
    Rational price;
    HedgeCertificate certificate;
};

/**
 * Least total endowment that lets the agents jointly dominate the claim:
 * inf { sum_i m_i : m + k + Y >= f }.  Computed in the normalized form
 * (equal per-agent transfers, price = N * a — deterministic reshuffles are
 * free inside the exchange space), so the certificate's transfer is uniform
 * and the infimum is attained.  Requires collective viability (NcaViolated).
 */
PriceResult super_price(const MarketModel& model, const ExchangeSpace& exchange,
                        const RandomVector& claim);

/** Greatest total endowment dominated by the claim: -super_price(-f), with
 *  the certificate mirrored. */
PriceResult sub_price(const MarketModel& model, const ExchangeSpace& exchange,
                      const RandomVector& claim);

/** sup of sum_i E_{Q^i}[f^i] over the closed collective measure polytope;
 *  equals `super_price` exactly (strong duality).  NcaViolated guard. */
Rational dual_super_price(const MarketModel& model, const ExchangeSpace& exchange,
                          const RandomVector& claim);

/** Single-agent superhedging of a payoff measurable for that agent, using
 *  only that agent's trades: inf { m : m + k >= g, k agent-attainable }. */
struct ClassicalPriceResult
{
    Rational price;
    AgentStrategy strategy;
    RatVec slack;
};

ClassicalPriceResult classical_super_price(const MarketModel& model, std::size_t agent,
                                           const RatVec& payoff);

/**
 * With deterministic transfers only, the collective price splits into the
 * agents' classical prices: collective == sum(per_agent), else
 * `DecompositionViolated` (an engine-bug detector, not an input error).
 */
struct DecompositionReport
{
    Rational collective;
    RatVec per_agent;
};

DecompositionReport decomposition_check(const MarketModel& model, const RandomVector& claim);

/**
 * Decide membership of the claim in  R^N + gains + exchange span.  On
 * success the certificate has identically zero slack and its price (the
 * total transfer) is the unique arbitrage-consistent valuation.  On failure
 * `left_kernel` is an exact separating functional: it annihilates every
 * column of the replication system but not the claim.
 */
struct ReplicationOutcome
{
    std::optional<HedgeCertificate> certificate;
    RatVec left_kernel;
};

ReplicationOutcome try_replicate(const MarketModel& model, const ExchangeSpace& exchange,
                                 const RandomVector& claim);

/** Throwing form: `NotReplicable` carries the left-kernel certificate in its
 *  message; use `try_replicate` for structured access. */
HedgeCertificate replicate(const MarketModel& model, const ExchangeSpace& exchange,
                           const RandomVector& claim);

/**
 * [sub, super] price interval plus replicability, with the exact dichotomy
 * verified: zero gap iff replicable (IffViolated otherwise).
 */
struct PriceGap
{
    Rational lower;
    Rational upper;
    bool replicable = false;
};

PriceGap price_gap(const MarketModel& model, const ExchangeSpace& exchange,
                   const RandomVector& claim);

/**
 * Collective completeness, decided three independent ways that must agree
 * (EquivalenceViolated otherwise):
 *   1. the collective measure polytope is a single point,
 *   2. every claim in the finite spanning family (terminal-block indicators
 *      per agent, plus the generators) is replicable,
 *   3. sub and super prices coincide on that family.
 */
struct CompletenessReport
{
    bool complete = false;
    bool singleton = false;
    bool family_replicable = false;
    bool family_prices_coincide = false;
    std::size_t family_size = 0;
};

CompletenessReport completeness(const MarketModel& model, const ExchangeSpace& exchange);

/**
 * Drop generators already representable by trading gains, deterministic
 * zero-sum transfers and earlier generators; prices are invariant under this
 * reduction and the pricing routines apply it before building their LPs.
 */
ExchangeSpace reduce_exchange_space(const MarketModel& model, const ExchangeSpace& exchange);

}   // namespace colmkt

#endif   // COLMKT_HEDGING_HPP
