#include "colmkt/market_json.hpp"

#include <fstream>

namespace colmkt
{

namespace
{

using nlohmann::json;

/** Atom-keyed map of rational strings; `require_all` demands full coverage. */
RatVec parse_atom_map(const SampleSpace& space, const json& obj, bool require_all,
                      const std::string& where)
{
    if (!obj.is_object())
        throw ParseError(where + ": expected an object keyed by atom labels");
    RatVec out(space.size(), Rational(0));
    std::vector<bool> seen(space.size(), false);
    for (const auto& [key, value] : obj.items())
    {
        const int idx = space.index_of(key);
        if (idx < 0)
            throw ParseError(where + ": unknown atom \"" + key + "\"");
        if (!value.is_string())
            throw ParseError(where + ": value for " + key + " must be a \"p/q\" string");
        out[static_cast<std::size_t>(idx)] = parse_rational(value.get<std::string>());
        seen[static_cast<std::size_t>(idx)] = true;
    }
    if (require_all)
        for (std::size_t a = 0; a < space.size(); ++a)
            if (!seen[a])
                throw ParseError(where + ": missing atom \"" + space.atoms[a] + "\"");
    return out;
}

Partition parse_partition(const SampleSpace& space, const json& level, const std::string& where)
{
    if (!level.is_array() || level.empty())
        throw ParseError(where + ": expected a non-empty array of blocks");
    Partition part;
    for (const auto& block : level)
    {
        if (!block.is_array() || block.empty())
            throw ParseError(where + ": each block must be a non-empty array of atom labels");
        std::vector<int> atoms;
        for (const auto& label : block)
        {
            if (!label.is_string())
                throw ParseError(where + ": atom labels must be strings");
            const int idx = space.index_of(label.get<std::string>());
            if (idx < 0)
                throw ParseError(where + ": unknown atom \"" + label.get<std::string>() + "\"");
            atoms.push_back(idx);
        }
        part.blocks.push_back(std::move(atoms));
    }
    part.normalize();
    return part;
}

RandomVector parse_component_array(const MarketModel& model, const json& arr,
                                   const std::string& where)
{
    if (!arr.is_array() || arr.size() != model.num_agents())
        throw ParseError(where + ": expected " + std::to_string(model.num_agents()) +
                         " component maps");
    RandomVector rv;
    for (std::size_t i = 0; i < model.num_agents(); ++i)
        rv.components.push_back(parse_atom_map(model.space, arr[i], false,
                                               where + ", component " + std::to_string(i + 1)));
    return rv;
}

}   // namespace

MarketModel parse_market(const json& doc)
{
    if (!doc.is_object())
        throw ParseError("market document must be a JSON object");
    MarketModel model;
    try
    {
        const json& omega = doc.at("omega");
        if (!omega.is_array() || omega.empty())
            throw ParseError("\"omega\" must be a non-empty array of labels");
        for (const auto& label : omega)
            model.space.atoms.push_back(label.get<std::string>());

        model.space.prob = parse_atom_map(model.space, doc.at("P"), true, "\"P\"");
        model.horizon = doc.at("T").get<int>();

        for (const auto& asset : doc.at("assets"))
        {
            PriceProcess proc;
            proc.name = asset.at("name").get<std::string>();
            const json& rows = asset.at("prices");
            if (!rows.is_array())
                throw ParseError("asset " + proc.name + ": \"prices\" must be an array");
            for (std::size_t t = 0; t < rows.size(); ++t)
                proc.prices.push_back(parse_atom_map(model.space, rows[t], true,
                                                     "asset " + proc.name + " at time " +
                                                         std::to_string(t)));
            model.assets.push_back(std::move(proc));
        }

        for (const auto& agent : doc.at("agents"))
        {
            AgentSpec spec;
            spec.name = agent.at("name").get<std::string>();
            for (const auto& j : agent.at("assets"))
            {
                const int one_based = j.get<int>();
                if (one_based < 1 || static_cast<std::size_t>(one_based) > model.assets.size())
                    throw UnknownAssetIndex("agent " + spec.name + " references asset index " +
                                            std::to_string(one_based) + " outside 1.." +
                                            std::to_string(model.assets.size()));
                spec.assets.push_back(one_based - 1);
            }
            const json& levels = agent.at("filtration");
            if (!levels.is_array())
                throw ParseError("agent " + spec.name + ": \"filtration\" must be an array");
            for (std::size_t t = 0; t < levels.size(); ++t)
                spec.filtration.levels.push_back(
                    parse_partition(model.space, levels[t],
                                    "agent " + spec.name + " filtration level " +
                                        std::to_string(t)));
            model.agents.push_back(std::move(spec));
        }
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string("malformed market document: ") + e.what());
    }
    validate_model(model);
    return model;
}

MarketModel load_market_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open market file: " + path);
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::exception& e)
    {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return parse_market(doc);
}

ExchangeSpace exchanges_from_json(const MarketModel& model, const json& doc)
{
    if (!doc.contains("exchanges"))
        return ExchangeSpace{};
    const json& ex = doc.at("exchanges");
    try
    {
        const std::string mode = ex.at("mode").get<std::string>();
        if (mode == "zero_sum_partition")
            return zero_sum_generators_from_partition(model, ex.at("time").get<int>());
        if (mode == "generators")
        {
            ExchangeSpace space;
            const json& gens = ex.at("generators");
            if (!gens.is_array())
                throw ParseError("\"exchanges.generators\" must be an array");
            for (std::size_t g = 0; g < gens.size(); ++g)
            {
                RandomVector rv = parse_component_array(model, gens[g],
                                                        "exchange generator " +
                                                            std::to_string(g + 1));
                validate_random_vector(model, rv, "exchange generator " + std::to_string(g + 1));
                space.generators.push_back(std::move(rv));
            }
            return space;
        }
        throw ParseError("unknown exchanges mode \"" + mode + "\"");
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string("malformed \"exchanges\" key: ") + e.what());
    }
}

RandomVector parse_claim(const MarketModel& model, const json& doc)
{
    try
    {
        RandomVector rv = parse_component_array(model, doc.at("components"), "claim");
        validate_random_vector(model, rv, "claim");
        return rv;
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string("malformed claim document: ") + e.what());
    }
}

RandomVector load_claim_file(const MarketModel& model, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open claim file: " + path);
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::exception& e)
    {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return parse_claim(model, doc);
}

nlohmann::ordered_json market_to_json(const MarketModel& model)
{
    nlohmann::ordered_json doc;
    doc["omega"] = model.space.atoms;
    nlohmann::ordered_json prob;
    for (std::size_t a = 0; a < model.space.size(); ++a)
        prob[model.space.atoms[a]] = to_string(model.space.prob[a]);
    doc["P"] = std::move(prob);
    doc["T"] = model.horizon;

    nlohmann::ordered_json assets = nlohmann::ordered_json::array();
    for (const PriceProcess& asset : model.assets)
    {
        nlohmann::ordered_json entry;
        entry["name"] = asset.name;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const RatVec& row : asset.prices)
        {
            nlohmann::ordered_json m;
            for (std::size_t a = 0; a < model.space.size(); ++a)
                m[model.space.atoms[a]] = to_string(row[a]);
            rows.push_back(std::move(m));
        }
        entry["prices"] = std::move(rows);
        assets.push_back(std::move(entry));
    }
    doc["assets"] = std::move(assets);

    nlohmann::ordered_json agents = nlohmann::ordered_json::array();
    for (const AgentSpec& agent : model.agents)
    {
        nlohmann::ordered_json entry;
        entry["name"] = agent.name;
        std::vector<int> one_based;
        for (const int j : agent.assets)
            one_based.push_back(j + 1);
        entry["assets"] = one_based;
        nlohmann::ordered_json levels = nlohmann::ordered_json::array();
        for (const Partition& level : agent.filtration.levels)
        {
            nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
            for (const auto& block : level.blocks)
            {
                nlohmann::ordered_json labels = nlohmann::ordered_json::array();
                for (const int atom : block)
                    labels.push_back(model.space.atoms[static_cast<std::size_t>(atom)]);
                blocks.push_back(std::move(labels));
            }
            levels.push_back(std::move(blocks));
        }
        entry["filtration"] = std::move(levels);
        agents.push_back(std::move(entry));
    }
    doc["agents"] = std::move(agents);
    return doc;
}

nlohmann::ordered_json random_vector_to_json(const MarketModel& model, const RandomVector& rv)
{
    nlohmann::ordered_json out;
    for (std::size_t i = 0; i < rv.components.size(); ++i)
    {
        nlohmann::ordered_json m;
        for (std::size_t a = 0; a < model.space.size(); ++a)
            m[model.space.atoms[a]] = to_string(rv.components[i][a]);
        out[model.agents[i].name] = std::move(m);
    }
    return out;
}

}   // namespace colmkt
