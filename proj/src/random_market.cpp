#include "colmkt/random_market.hpp"

#include <algorithm>
#include <string>

namespace colmkt
{

std::uint64_t Rng::next_u64()
{
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int Rng::next_int(int lo, int hi)
{
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

Rational Rng::next_rational(int lo, int hi, int max_den)
{
    const int num = next_int(lo, hi);
    const int den = next_int(1, max_den);
    return Rational(num) / den;
}

namespace
{

/** Split each block of `level` into 1..max_children consecutive runs. */
Partition refine_randomly(const Partition& level, Rng& rng, int max_children)
{
    Partition next;
    for (const std::vector<int>& block : level.blocks)
    {
        const int sz = static_cast<int>(block.size());
        const int parts = rng.next_int(1, std::min(sz, max_children));
        // parts-1 distinct cut positions in 1..sz-1
        std::vector<int> cuts;
        while (static_cast<int>(cuts.size()) < parts - 1)
        {
            const int c = rng.next_int(1, sz - 1);
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end())
                cuts.push_back(c);
        }
        cuts.push_back(0);
        cuts.push_back(sz);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
            next.blocks.emplace_back(block.begin() + cuts[p], block.begin() + cuts[p + 1]);
    }
    next.normalize();
    return next;
}

Filtration random_tree(std::size_t K, int horizon, Rng& rng, int max_children)
{
    Filtration f;
    Partition level;
    level.blocks.emplace_back();
    for (std::size_t a = 0; a < K; ++a)
        level.blocks.back().push_back(static_cast<int>(a));
    f.levels.push_back(level);
    for (int t = 1; t <= horizon; ++t)
    {
        level = refine_randomly(level, rng, max_children);
        f.levels.push_back(level);
    }
    return f;
}

/** Strictly positive rationals with mass one. */
RatVec random_measure(std::size_t K, Rng& rng)
{
    RatVec weights;
    Rational total = 0;
    for (std::size_t a = 0; a < K; ++a)
    {
        weights.push_back(Rational(rng.next_int(1, 12)));
        total += weights.back();
    }
    for (Rational& w : weights)
        w /= total;
    return weights;
}

/** Backward martingale prices on the tree under `q`: terminal values drawn,
 *  earlier values are conditional expectations block by block. */
std::vector<RatVec> martingale_prices(const Filtration& tree, const RatVec& q, Rng& rng)
{
    const std::size_t K = q.size();
    const int T = static_cast<int>(tree.levels.size()) - 1;
    std::vector<RatVec> prices(static_cast<std::size_t>(T) + 1, RatVec(K, Rational(0)));
    for (const std::vector<int>& block : tree.levels[static_cast<std::size_t>(T)].blocks)
    {
        const Rational value = rng.next_rational(1, 32, 4);
        for (const int atom : block)
            prices[static_cast<std::size_t>(T)][static_cast<std::size_t>(atom)] = value;
    }
    for (int t = T - 1; t >= 0; --t)
        for (const std::vector<int>& block : tree.levels[static_cast<std::size_t>(t)].blocks)
        {
            Rational mass = 0;
            Rational value = 0;
            for (const int atom : block)
            {
                mass += q[static_cast<std::size_t>(atom)];
                value += q[static_cast<std::size_t>(atom)] *
                         prices[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(atom)];
            }
            value /= mass;
            for (const int atom : block)
                prices[static_cast<std::size_t>(t)][static_cast<std::size_t>(atom)] = value;
        }
    return prices;
}

/** Forward prices with no structure beyond adaptedness to the tree. */
std::vector<RatVec> unstructured_prices(const Filtration& tree, std::size_t K, Rng& rng)
{
    const int T = static_cast<int>(tree.levels.size()) - 1;
    std::vector<RatVec> prices(static_cast<std::size_t>(T) + 1, RatVec(K, Rational(0)));
    for (int t = 0; t <= T; ++t)
        for (const std::vector<int>& block : tree.levels[static_cast<std::size_t>(t)].blocks)
        {
            const Rational value = rng.next_rational(0, 32, 4);
            for (const int atom : block)
                prices[static_cast<std::size_t>(t)][static_cast<std::size_t>(atom)] = value;
        }
    return prices;
}

}   // namespace

MarketModel random_market(Rng& rng, const RandomMarketOptions& options)
{
    MarketModel model;
    const std::size_t K =
        static_cast<std::size_t>(rng.next_int(options.min_atoms, options.max_atoms));
    for (std::size_t a = 0; a < K; ++a)
        model.space.atoms.push_back("w" + std::to_string(a + 1));
    model.space.prob = random_measure(K, rng);
    model.horizon = rng.next_int(options.min_horizon, options.max_horizon);

    // One shared pricing measure: with martingale_prices it certifies the
    // viability of every agent (and of the collective, for zero-sum
    // exchanges).  Independent of the reference probability on purpose.
    const RatVec q = random_measure(K, rng);

    const int N = rng.next_int(options.min_agents, options.max_agents);
    for (int i = 0; i < N; ++i)
    {
        AgentSpec agent;
        agent.name = "agent" + std::to_string(i + 1);
        agent.filtration = random_tree(K, model.horizon, rng, options.max_children);
        const int num_assets = rng.next_int(1, options.max_assets_per_agent);
        for (int j = 0; j < num_assets; ++j)
        {
            PriceProcess proc;
            proc.name = "S" + std::to_string(model.assets.size() + 1);
            proc.prices = options.martingale_prices
                              ? martingale_prices(agent.filtration, q, rng)
                              : unstructured_prices(agent.filtration, K, rng);
            agent.assets.push_back(static_cast<int>(model.assets.size()));
            model.assets.push_back(std::move(proc));
        }
        model.agents.push_back(std::move(agent));
    }
    validate_model(model);
    return model;
}

RandomVector random_claim(const MarketModel& model, Rng& rng, int lo, int hi, int max_den)
{
    RandomVector claim;
    for (const AgentSpec& agent : model.agents)
    {
        RatVec comp(model.num_atoms(), Rational(0));
        const Partition& terminal =
            agent.filtration.levels[static_cast<std::size_t>(model.horizon)];
        for (const std::vector<int>& block : terminal.blocks)
        {
            const Rational value = rng.next_rational(lo, hi, max_den);
            for (const int atom : block)
                comp[static_cast<std::size_t>(atom)] = value;
        }
        claim.components.push_back(std::move(comp));
    }
    validate_random_vector(model, claim, "random claim");
    return claim;
}

ExchangeSpace random_exchange_space(const MarketModel& model, Rng& rng)
{
    const int mode = rng.next_int(0, 2);
    if (mode == 0)
        return ExchangeSpace{};   // deterministic zero-sum transfers only
    if (mode == 1)
        return zero_sum_generators_from_partition(model, rng.next_int(0, model.horizon));

    // A few dense zero-sum vectors on the terminal common partition.
    const Partition meet = meet_partition(model, model.horizon);
    const std::size_t N = model.num_agents();
    ExchangeSpace space;
    const int count = rng.next_int(1, 3);
    for (int g = 0; g < count; ++g)
    {
        RandomVector gen;
        gen.components.assign(N, RatVec(model.num_atoms(), Rational(0)));
        for (const std::vector<int>& block : meet.blocks)
        {
            Rational running = 0;
            for (std::size_t i = 0; i + 1 < N; ++i)
            {
                const Rational value = rng.next_rational(-4, 4, 3);
                running += value;
                for (const int atom : block)
                    gen.components[i][static_cast<std::size_t>(atom)] = value;
            }
            for (const int atom : block)
                gen.components[N - 1][static_cast<std::size_t>(atom)] = -running;
        }
        space.generators.push_back(std::move(gen));
    }
    return space;
}

ExchangeSchedule random_schedule(const MarketModel& model, Rng& rng, int lo, int hi,
                                 int max_den)
{
    ExchangeSchedule schedule;
    const std::size_t N = model.num_agents();
    for (int t = 1; t <= model.horizon; ++t)
    {
        const Partition meet = meet_partition(model, t);
        RandomVector y;
        y.components.assign(N, RatVec(model.num_atoms(), Rational(0)));
        for (const std::vector<int>& block : meet.blocks)
        {
            Rational running = 0;
            for (std::size_t i = 0; i + 1 < N; ++i)
            {
                const Rational value = rng.next_rational(lo, hi, max_den);
                running += value;
                for (const int atom : block)
                    y.components[i][static_cast<std::size_t>(atom)] = value;
            }
            for (const int atom : block)
                y.components[N - 1][static_cast<std::size_t>(atom)] = -running;
        }
        schedule.per_time.push_back(std::move(y));
    }
    validate_schedule(model, schedule);
    return schedule;
}

std::vector<AgentStrategy> random_strategies(const MarketModel& model, Rng& rng, int lo,
                                             int hi, int max_den)
{
    std::vector<AgentStrategy> out;
    for (std::size_t i = 0; i < model.num_agents(); ++i)
    {
        AgentStrategy s = zero_strategy(model, i);
        for (auto& level : s.holdings)
            for (auto& block : level)
                for (Rational& h : block)
                    h = rng.next_rational(lo, hi, max_den);
        out.push_back(std::move(s));
    }
    return out;
}

}   // namespace colmkt
