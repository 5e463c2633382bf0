#include "colmkt/gains.hpp"

#include <string>

namespace colmkt
{

namespace
{

void require_agent(const MarketModel& model, std::size_t agent)
{
    if (agent >= model.num_agents())
        throw DimensionMismatch("agent index " + std::to_string(agent) + " out of range");
}

}   // namespace

GainsBasis gains_basis(const MarketModel& model, std::size_t agent)
{
    require_agent(model, agent);
    const AgentSpec& spec = model.agents[agent];
    GainsBasis basis;
    basis.agent = agent;
    for (int t = 1; t <= model.horizon; ++t)
    {
        const Partition& prev = spec.filtration.levels[static_cast<std::size_t>(t - 1)];
        for (std::size_t b = 0; b < prev.blocks.size(); ++b)
        {
            for (std::size_t pos = 0; pos < spec.assets.size(); ++pos)
            {
                const PriceProcess& asset =
                    model.assets[static_cast<std::size_t>(spec.assets[pos])];
                GainsGenerator gen;
                gen.t = t;
                gen.block = static_cast<int>(b);
                gen.asset_pos = static_cast<int>(pos);
                gen.values.assign(model.num_atoms(), Rational(0));
                for (const int atom : prev.blocks[b])
                {
                    const std::size_t a = static_cast<std::size_t>(atom);
                    gen.values[a] = asset.prices[static_cast<std::size_t>(t)][a] -
                                    asset.prices[static_cast<std::size_t>(t - 1)][a];
                }
                basis.generators.push_back(std::move(gen));
            }
        }
    }
    return basis;
}

AgentStrategy zero_strategy(const MarketModel& model, std::size_t agent)
{
    require_agent(model, agent);
    const AgentSpec& spec = model.agents[agent];
    AgentStrategy strategy;
    strategy.holdings.resize(static_cast<std::size_t>(model.horizon));
    for (int t = 1; t <= model.horizon; ++t)
    {
        const Partition& prev = spec.filtration.levels[static_cast<std::size_t>(t - 1)];
        strategy.holdings[static_cast<std::size_t>(t - 1)].assign(
            prev.blocks.size(), RatVec(spec.assets.size(), Rational(0)));
    }
    return strategy;
}

void validate_strategy_shape(const MarketModel& model, std::size_t agent,
                             const AgentStrategy& strategy)
{
    require_agent(model, agent);
    const AgentSpec& spec = model.agents[agent];
    if (strategy.holdings.size() != static_cast<std::size_t>(model.horizon))
        throw BlockKeyMismatch("agent " + spec.name + ": expected holdings for " +
                               std::to_string(model.horizon) + " trade dates");
    for (int t = 1; t <= model.horizon; ++t)
    {
        const Partition& prev = spec.filtration.levels[static_cast<std::size_t>(t - 1)];
        const auto& level = strategy.holdings[static_cast<std::size_t>(t - 1)];
        if (level.size() != prev.blocks.size())
            throw BlockKeyMismatch("agent " + spec.name + " at time " + std::to_string(t) +
                                   ": expected " + std::to_string(prev.blocks.size()) +
                                   " block entries, got " + std::to_string(level.size()));
        for (const RatVec& row : level)
            if (row.size() != spec.assets.size())
                throw BlockKeyMismatch("agent " + spec.name + " at time " + std::to_string(t) +
                                       ": expected " + std::to_string(spec.assets.size()) +
                                       " asset positions per block");
    }
}

RatVec gain_of_strategy_upto(const MarketModel& model, std::size_t agent,
                             const AgentStrategy& strategy, int upto)
{
    validate_strategy_shape(model, agent, strategy);
    const AgentSpec& spec = model.agents[agent];
    RatVec gain(model.num_atoms(), Rational(0));
    for (int t = 1; t <= upto; ++t)
    {
        const Partition& prev = spec.filtration.levels[static_cast<std::size_t>(t - 1)];
        const std::vector<int> block_of = prev.lookup();
        for (std::size_t a = 0; a < model.num_atoms(); ++a)
        {
            const auto& row =
                strategy.holdings[static_cast<std::size_t>(t - 1)]
                                 [static_cast<std::size_t>(block_of[a])];
            for (std::size_t pos = 0; pos < spec.assets.size(); ++pos)
            {
                if (row[pos] == 0)
                    continue;
                const PriceProcess& asset =
                    model.assets[static_cast<std::size_t>(spec.assets[pos])];
                gain[a] += row[pos] * (asset.prices[static_cast<std::size_t>(t)][a] -
                                       asset.prices[static_cast<std::size_t>(t - 1)][a]);
            }
        }
    }
    return gain;
}

RatVec gain_of_strategy(const MarketModel& model, std::size_t agent,
                        const AgentStrategy& strategy)
{
    return gain_of_strategy_upto(model, agent, strategy, model.horizon);
}

RatVec strategy_to_coefficients(const MarketModel& model, std::size_t agent,
                                const AgentStrategy& strategy)
{
    validate_strategy_shape(model, agent, strategy);
    RatVec coeffs;
    for (const auto& level : strategy.holdings)
        for (const auto& row : level)
            for (const Rational& q : row)
                coeffs.push_back(q);
    return coeffs;
}

AgentStrategy strategy_from_coefficients(const MarketModel& model, std::size_t agent,
                                         const RatVec& coefficients)
{
    AgentStrategy strategy = zero_strategy(model, agent);
    std::size_t k = 0;
    for (auto& level : strategy.holdings)
        for (auto& row : level)
            for (Rational& q : row)
            {
                if (k >= coefficients.size())
                    throw DimensionMismatch("strategy_from_coefficients: too few coefficients");
                q = coefficients[k++];
            }
    if (k != coefficients.size())
        throw DimensionMismatch("strategy_from_coefficients: too many coefficients");
    return strategy;
}

AggregatedExchanges aggregate_exchanges(const MarketModel& model,
                                        const ExchangeSchedule& schedule)
{
    validate_schedule(model, schedule);
    AggregatedExchanges out;
    RandomVector acc;
    acc.components.assign(model.num_agents(), RatVec(model.num_atoms(), Rational(0)));
    for (const RandomVector& step : schedule.per_time)
    {
        for (std::size_t i = 0; i < model.num_agents(); ++i)
            for (std::size_t a = 0; a < model.num_atoms(); ++a)
                acc.components[i][a] += step.components[i][a];
        out.running.push_back(acc);
    }
    out.total = acc;
    return out;
}

CsfStrategy lift_to_csf(const MarketModel& model, const RatVec& initial_wealth,
                        const std::vector<AgentStrategy>& risky,
                        const ExchangeSchedule& schedule)
{
    if (initial_wealth.size() != model.num_agents() || risky.size() != model.num_agents())
        throw DimensionMismatch("lift_to_csf: expected one wealth and one strategy per agent");
    validate_schedule(model, schedule);

    CsfStrategy out;
    out.initial_wealth = initial_wealth;
    out.risky = risky;
    out.riskless.resize(model.num_agents());

    for (std::size_t i = 0; i < model.num_agents(); ++i)
    {
        validate_strategy_shape(model, i, risky[i]);
        const AgentSpec& spec = model.agents[i];
        auto& h = out.riskless[i];
        h.resize(static_cast<std::size_t>(model.horizon));

        auto risky_value_at = [&](int t, std::size_t a) -> Rational
        {
            // holdings carried over (t-1, t], valued at time `t` prices
            const Partition& prev = spec.filtration.levels[static_cast<std::size_t>(t - 1)];
            const int b = prev.lookup()[a];
            Rational v = 0;
            const auto& row = risky[i].holdings[static_cast<std::size_t>(t - 1)]
                                               [static_cast<std::size_t>(b)];
            for (std::size_t pos = 0; pos < spec.assets.size(); ++pos)
                if (row[pos] != 0)
                    v += row[pos] *
                         model.assets[static_cast<std::size_t>(spec.assets[pos])]
                             .prices[static_cast<std::size_t>(t)][a];
            return v;
        };

        // Seed: value at time 0 must equal the initial wealth on every
        // initial information block.
        {
            const Partition& p0 = spec.filtration.levels[0];
            h[0].assign(p0.blocks.size(), Rational(0));
            for (std::size_t b = 0; b < p0.blocks.size(); ++b)
            {
                const std::size_t a = static_cast<std::size_t>(p0.blocks[b].front());
                Rational risky0 = 0;
                const auto& row = risky[i].holdings[0][b];
                for (std::size_t pos = 0; pos < spec.assets.size(); ++pos)
                    if (row[pos] != 0)
                        risky0 += row[pos] *
                                  model.assets[static_cast<std::size_t>(spec.assets[pos])]
                                      .prices[0][a];
                h[0][b] = initial_wealth[i] - risky0;
            }
        }

        // Roll forward: the time-(t+1) riskless position on each time-t block
        // is pinned by the collectively self-financing identity.
        for (int t = 1; t < model.horizon; ++t)
        {
            const Partition& prev = spec.filtration.levels[static_cast<std::size_t>(t - 1)];
            const Partition& cur = spec.filtration.levels[static_cast<std::size_t>(t)];
            const std::vector<int> prev_of = prev.lookup();
            h[static_cast<std::size_t>(t)].assign(cur.blocks.size(), Rational(0));
            for (std::size_t b = 0; b < cur.blocks.size(); ++b)
            {
                const std::size_t a = static_cast<std::size_t>(cur.blocks[b].front());
                const int pb = prev_of[a];
                const Rational pre_value = h[static_cast<std::size_t>(t - 1)]
                                            [static_cast<std::size_t>(pb)] +
                                           risky_value_at(t, a) +
                                           schedule.per_time[static_cast<std::size_t>(t - 1)]
                                               .components[i][a];
                // subtract the cost of the new risky position at time-t prices
                Rational risky_next = 0;
                const auto& row = risky[i].holdings[static_cast<std::size_t>(t)]
                                                   [static_cast<std::size_t>(b)];
                for (std::size_t pos = 0; pos < spec.assets.size(); ++pos)
                    if (row[pos] != 0)
                        risky_next += row[pos] *
                                      model.assets[static_cast<std::size_t>(spec.assets[pos])]
                                          .prices[static_cast<std::size_t>(t)][a];
                h[static_cast<std::size_t>(t)][b] = pre_value - risky_next;
            }
        }
    }
    return out;
}

ValueProcess value_process(const MarketModel& model, const CsfStrategy& strategy,
                           const ExchangeSchedule& schedule)
{
    if (strategy.risky.size() != model.num_agents() ||
        strategy.riskless.size() != model.num_agents() ||
        strategy.initial_wealth.size() != model.num_agents())
        throw DimensionMismatch("value_process: per-agent fields have wrong sizes");
    validate_schedule(model, schedule);
    const AggregatedExchanges agg = aggregate_exchanges(model, schedule);

    ValueProcess out;
    out.values.resize(model.num_agents());
    for (std::size_t i = 0; i < model.num_agents(); ++i)
    {
        validate_strategy_shape(model, i, strategy.risky[i]);
        const AgentSpec& spec = model.agents[i];

        auto portfolio_value = [&](int held_for_t, int priced_at, std::size_t a) -> Rational
        {
            // holdings keyed at F_{held_for_t - 1}, valued at time `priced_at`
            const Partition& prev =
                spec.filtration.levels[static_cast<std::size_t>(held_for_t - 1)];
            const int b = prev.lookup()[a];
            if (strategy.riskless[i].size() < static_cast<std::size_t>(held_for_t) ||
                strategy.riskless[i][static_cast<std::size_t>(held_for_t - 1)].size() !=
                    prev.blocks.size())
                throw BlockKeyMismatch("value_process: riskless positions for agent " +
                                       spec.name + " do not match its filtration");
            Rational v = strategy.riskless[i][static_cast<std::size_t>(held_for_t - 1)]
                                          [static_cast<std::size_t>(b)];
            const auto& row = strategy.risky[i].holdings[static_cast<std::size_t>(held_for_t - 1)]
                                                        [static_cast<std::size_t>(b)];
            for (std::size_t pos = 0; pos < spec.assets.size(); ++pos)
                if (row[pos] != 0)
                    v += row[pos] *
                         model.assets[static_cast<std::size_t>(spec.assets[pos])]
                             .prices[static_cast<std::size_t>(priced_at)][a];
            return v;
        };

        auto& path = out.values[i];
        path.assign(static_cast<std::size_t>(model.horizon) + 1,
                    RatVec(model.num_atoms(), Rational(0)));
        for (std::size_t a = 0; a < model.num_atoms(); ++a)
        {
            path[0][a] = portfolio_value(1, 0, a);
            if (path[0][a] != strategy.initial_wealth[i])
                throw CsfViolation("agent " + spec.name +
                                   ": time-0 portfolio value differs from initial wealth");
            for (int t = 1; t <= model.horizon; ++t)
                path[static_cast<std::size_t>(t)][a] =
                    portfolio_value(t, t, a) +
                    schedule.per_time[static_cast<std::size_t>(t - 1)].components[i][a];
            // Rebalancing identity at t = 1..T-1:
            // new holdings at time-t prices = old holdings at time-t prices + Y_t.
            for (int t = 1; t < model.horizon; ++t)
            {
                const Rational lhs = portfolio_value(t + 1, t, a);
                const Rational rhs = portfolio_value(t, t, a) +
                                     schedule.per_time[static_cast<std::size_t>(t - 1)]
                                         .components[i][a];
                if (lhs != rhs)
                    throw CsfViolation("agent " + spec.name + " at time " + std::to_string(t) +
                                       ", atom " + model.space.atoms[a] +
                                       ": rebalancing identity violated");
            }
        }

        // Cross-check the running decomposition V_t = v_0 + gains + transfers.
        for (int t = 0; t <= model.horizon; ++t)
        {
            const RatVec gains = gain_of_strategy_upto(model, i, strategy.risky[i], t);
            for (std::size_t a = 0; a < model.num_atoms(); ++a)
            {
                Rational expect = strategy.initial_wealth[i] + gains[a];
                if (t >= 1)
                    expect += agg.running[static_cast<std::size_t>(t - 1)].components[i][a];
                if (path[static_cast<std::size_t>(t)][a] != expect)
                    throw InternalInconsistency(
                        "value_process: running decomposition failed for agent " + spec.name);
            }
        }
    }
    return out;
}

}   // namespace colmkt
