#include "colmkt/market.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace colmkt
{

std::size_t Partition::num_atoms() const
{
    std::size_t n = 0;
    for (const auto& b : blocks)
        n += b.size();
    return n;
}

std::vector<int> Partition::lookup() const
{
    std::vector<int> map(num_atoms(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (const int atom : blocks[b])
            map[static_cast<std::size_t>(atom)] = static_cast<int>(b);
    return map;
}

bool Partition::refines(const Partition& coarser) const
{
    const std::vector<int> outer = coarser.lookup();
    for (const auto& block : blocks)
    {
        const int target = outer[static_cast<std::size_t>(block.front())];
        for (const int atom : block)
            if (outer[static_cast<std::size_t>(atom)] != target)
                return false;
    }
    return true;
}

bool Partition::measures_event(const std::vector<int>& event) const
{
    std::vector<bool> in_event(num_atoms(), false);
    for (const int atom : event)
        in_event[static_cast<std::size_t>(atom)] = true;
    for (const auto& block : blocks)
    {
        const bool first = in_event[static_cast<std::size_t>(block.front())];
        for (const int atom : block)
            if (in_event[static_cast<std::size_t>(atom)] != first)
                return false;
    }
    return true;
}

bool Partition::measures_values(const RatVec& values) const
{
    for (const auto& block : blocks)
    {
        const Rational& first = values[static_cast<std::size_t>(block.front())];
        for (const int atom : block)
            if (values[static_cast<std::size_t>(atom)] != first)
                return false;
    }
    return true;
}

void Partition::normalize()
{
    for (auto& block : blocks)
        std::sort(block.begin(), block.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

int SampleSpace::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == label)
            return static_cast<int>(i);
    return -1;
}

std::string SampleSpace::block_label(const std::vector<int>& block) const
{
    std::string out = "{";
    for (std::size_t i = 0; i < block.size(); ++i)
    {
        if (i)
            out += ",";
        out += atoms[static_cast<std::size_t>(block[i])];
    }
    return out + "}";
}

namespace
{

void validate_partition_covers(const Partition& part, std::size_t num_atoms,
                               const std::string& where)
{
    std::vector<int> seen(num_atoms, 0);
    for (const auto& block : part.blocks)
    {
        if (block.empty())
            throw ParseError(where + ": empty block");
        for (const int atom : block)
        {
            if (atom < 0 || static_cast<std::size_t>(atom) >= num_atoms)
                throw ParseError(where + ": atom index out of range");
            ++seen[static_cast<std::size_t>(atom)];
        }
    }
    for (std::size_t a = 0; a < num_atoms; ++a)
    {
        if (seen[a] == 0)
            throw ParseError(where + ": atom missing from partition");
        if (seen[a] > 1)
            throw ParseError(where + ": atom repeated in partition");
    }
}

}   // namespace

void validate_model(const MarketModel& model)
{
    const std::size_t num_atoms = model.space.size();
    if (num_atoms == 0)
        throw ParseError("model has no atoms");
    if (model.horizon < 1)
        throw ParseError("model horizon must be at least 1");
    {
        std::vector<std::string> labels = model.space.atoms;
        std::sort(labels.begin(), labels.end());
        if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
            throw ParseError("duplicate atom label");
    }
    if (model.space.prob.size() != num_atoms)
        throw ParseError("probability vector size mismatch");
    Rational mass = 0;
    for (std::size_t a = 0; a < num_atoms; ++a)
    {
        if (model.space.prob[a] <= 0)
            throw ZeroProbabilityAtom("atom " + model.space.atoms[a] +
                                      " must carry strictly positive probability");
        mass += model.space.prob[a];
    }
    if (mass != 1)
        throw MassNotOne("probabilities sum to " + to_string(mass) + ", expected 1");

    const std::size_t T = static_cast<std::size_t>(model.horizon);
    for (const PriceProcess& asset : model.assets)
    {
        if (asset.prices.size() != T + 1)
            throw ParseError("asset " + asset.name + ": expected " + std::to_string(T + 1) +
                             " price rows");
        for (const RatVec& row : asset.prices)
            if (row.size() != num_atoms)
                throw ParseError("asset " + asset.name + ": price row width mismatch");
    }

    for (const AgentSpec& agent : model.agents)
    {
        for (const int j : agent.assets)
            if (j < 0 || static_cast<std::size_t>(j) >= model.assets.size())
                throw UnknownAssetIndex("agent " + agent.name + " references asset index " +
                                        std::to_string(j + 1) + " outside 1.." +
                                        std::to_string(model.assets.size()));
        if (agent.filtration.levels.size() != T + 1)
            throw ParseError("agent " + agent.name + ": expected " + std::to_string(T + 1) +
                             " filtration levels");
        for (std::size_t t = 0; t <= T; ++t)
            validate_partition_covers(agent.filtration.levels[t], num_atoms,
                                      "agent " + agent.name + " filtration level " +
                                          std::to_string(t));
        if (!model.non_trivial_initial && agent.filtration.levels[0].blocks.size() != 1)
            throw NonRefiningFiltration("agent " + agent.name +
                                        ": time-0 partition must be trivial");
        for (std::size_t t = 0; t < T; ++t)
            if (!agent.filtration.levels[t + 1].refines(agent.filtration.levels[t]))
                throw NonRefiningFiltration("agent " + agent.name + ": level " +
                                            std::to_string(t + 1) + " does not refine level " +
                                            std::to_string(t));
        for (const int j : agent.assets)
        {
            const PriceProcess& asset = model.assets[static_cast<std::size_t>(j)];
            for (std::size_t t = 0; t <= T; ++t)
                for (const auto& block : agent.filtration.levels[t].blocks)
                {
                    const Rational& first = asset.prices[t][static_cast<std::size_t>(block.front())];
                    for (const int atom : block)
                        if (asset.prices[t][static_cast<std::size_t>(atom)] != first)
                            throw NonAdaptedAsset(agent.name, asset.name, static_cast<int>(t),
                                                  model.space.block_label(block));
                }
        }
    }
}

void validate_random_vector(const MarketModel& model, const RandomVector& rv,
                            const std::string& what)
{
    if (rv.components.size() != model.num_agents())
        throw DimensionMismatch(what + ": expected " + std::to_string(model.num_agents()) +
                                " components");
    for (std::size_t i = 0; i < rv.components.size(); ++i)
    {
        if (rv.components[i].size() != model.num_atoms())
            throw DimensionMismatch(what + ": component " + std::to_string(i + 1) +
                                    " width mismatch");
        const Partition& terminal =
            model.agents[i].filtration.levels[static_cast<std::size_t>(model.horizon)];
        if (!terminal.measures_values(rv.components[i]))
            throw EventNotMeasurable(what + ": component for agent " + model.agents[i].name +
                                     " is not measurable at the terminal partition");
    }
}

void validate_schedule(const MarketModel& model, const ExchangeSchedule& schedule)
{
    if (schedule.per_time.size() != static_cast<std::size_t>(model.horizon))
        throw DimensionMismatch("schedule: expected " + std::to_string(model.horizon) +
                                " exchange vectors");
    for (std::size_t t = 1; t <= schedule.per_time.size(); ++t)
    {
        const RandomVector& rv = schedule.per_time[t - 1];
        if (rv.components.size() != model.num_agents())
            throw DimensionMismatch("schedule at time " + std::to_string(t) +
                                    ": component count mismatch");
        for (std::size_t i = 0; i < rv.components.size(); ++i)
        {
            if (rv.components[i].size() != model.num_atoms())
                throw DimensionMismatch("schedule at time " + std::to_string(t) +
                                        ": component width mismatch");
            if (!model.agents[i].filtration.levels[t].measures_values(rv.components[i]))
                throw EventNotMeasurable("schedule at time " + std::to_string(t) +
                                         ": component for agent " + model.agents[i].name +
                                         " is not measurable at that time");
        }
    }
}

RandomVector indicator_claim(const MarketModel& model, std::size_t agent,
                             const std::vector<int>& event)
{
    if (agent >= model.num_agents())
        throw DimensionMismatch("indicator_claim: agent index out of range");
    const Partition& terminal =
        model.agents[agent].filtration.levels[static_cast<std::size_t>(model.horizon)];
    if (!terminal.measures_event(event))
        throw EventNotMeasurable("indicator_claim: event " + model.space.block_label(event) +
                                 " is not measurable for agent " + model.agents[agent].name +
                                 " at the terminal time");
    RandomVector claim;
    claim.components.assign(model.num_agents(), RatVec(model.num_atoms(), Rational(0)));
    for (const int atom : event)
        claim.components[agent][static_cast<std::size_t>(atom)] = 1;
    return claim;
}

Partition meet_partition(const MarketModel& model, int t)
{
    const std::size_t num_atoms = model.num_atoms();
    std::vector<int> parent(num_atoms);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a)
    {
        while (parent[static_cast<std::size_t>(a)] != a)
        {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    auto unite = [&](int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    };
    for (const AgentSpec& agent : model.agents)
        for (const auto& block : agent.filtration.levels[static_cast<std::size_t>(t)].blocks)
            for (std::size_t k = 1; k < block.size(); ++k)
                unite(block[0], block[k]);

    std::map<int, std::vector<int>> groups;
    for (std::size_t a = 0; a < num_atoms; ++a)
        groups[find(static_cast<int>(a))].push_back(static_cast<int>(a));
    Partition out;
    for (auto& [root, atoms] : groups)
        out.blocks.push_back(std::move(atoms));
    out.normalize();
    return out;
}

Partition join_partition(const MarketModel& model, int t)
{
    const std::size_t num_atoms = model.num_atoms();
    std::vector<std::vector<int>> key(num_atoms);
    for (const AgentSpec& agent : model.agents)
    {
        const std::vector<int> lut = agent.filtration.levels[static_cast<std::size_t>(t)].lookup();
        for (std::size_t a = 0; a < num_atoms; ++a)
            key[a].push_back(lut[a]);
    }
    std::map<std::vector<int>, std::vector<int>> groups;
    for (std::size_t a = 0; a < num_atoms; ++a)
        groups[key[a]].push_back(static_cast<int>(a));
    Partition out;
    for (auto& [k, atoms] : groups)
        out.blocks.push_back(std::move(atoms));
    out.normalize();
    return out;
}

ExchangeSpace zero_sum_generators_from_partition(const MarketModel& model, int t)
{
    if (t < 0 || t > model.horizon)
        throw DimensionMismatch("zero_sum_generators_from_partition: time out of range");
    if (model.num_agents() == 0)
        throw NoCommonPartition("no agents, so no common partition");
    const Partition common = meet_partition(model, t);
    const std::size_t N = model.num_agents();
    ExchangeSpace space;
    for (const auto& block : common.blocks)
    {
        for (std::size_t i = 0; i + 1 < N; ++i)
        {
            RandomVector gen;
            gen.components.assign(N, RatVec(model.num_atoms(), Rational(0)));
            for (const int atom : block)
            {
                gen.components[i][static_cast<std::size_t>(atom)] = 1;
                gen.components[N - 1][static_cast<std::size_t>(atom)] = -1;
            }
            space.generators.push_back(std::move(gen));
        }
    }
    return space;
}

MarketModel restrict_horizon(const MarketModel& model, int s, int t)
{
    if (s < 0 || t > model.horizon || s >= t)
        throw DimensionMismatch("restrict_horizon: need 0 <= s < t <= " +
                                std::to_string(model.horizon));
    MarketModel out;
    out.space = model.space;
    out.horizon = t - s;
    out.assets.reserve(model.assets.size());
    for (const PriceProcess& asset : model.assets)
    {
        PriceProcess sliced;
        sliced.name = asset.name;
        sliced.prices.assign(asset.prices.begin() + s, asset.prices.begin() + t + 1);
        out.assets.push_back(std::move(sliced));
    }
    out.agents.reserve(model.agents.size());
    bool non_trivial = false;
    for (const AgentSpec& agent : model.agents)
    {
        AgentSpec sliced;
        sliced.name = agent.name;
        sliced.assets = agent.assets;
        sliced.filtration.levels.assign(agent.filtration.levels.begin() + s,
                                        agent.filtration.levels.begin() + t + 1);
        if (sliced.filtration.levels.front().blocks.size() > 1)
            non_trivial = true;
        out.agents.push_back(std::move(sliced));
    }
    out.non_trivial_initial = non_trivial;
    validate_model(out);
    return out;
}

}   // namespace colmkt
