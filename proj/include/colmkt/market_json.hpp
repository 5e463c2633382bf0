#ifndef COLMKT_MARKET_JSON_HPP
#define COLMKT_MARKET_JSON_HPP

#include <nlohmann/json.hpp>

#include <string>

#include "market.hpp"

namespace colmkt
{

/**
 * Build and fully validate a model from its JSON description:
 *
 *   {
 *     "omega":  ["w1", ...],
 *     "P":      {"w1": "1/6", ...},                 // every atom, "p/q" strings
 *     "T":      2,
 *     "assets": [{"name": "X1", "prices": [{"w1": "8", ...}, ...]}],   // T+1 rows
 *     "agents": [{"name": "a1", "assets": [1],      // 1-based into "assets"
 *                 "filtration": [[["w1",...]], ..., [["w1"], ...]]}],  // T+1 levels
 *     "exchanges": ...                              // optional, see below
 *   }
 *
 * Throws the specific validation error (ZeroProbabilityAtom, MassNotOne,
 * UnknownAssetIndex, NonRefiningFiltration, NonAdaptedAsset) or ParseError
 * for structural problems.
 */
MarketModel parse_market(const nlohmann::json& doc);

MarketModel load_market_file(const std::string& path);

/**
 * Exchange space described by the document's optional "exchanges" key:
 *   {"mode": "zero_sum_partition", "time": 1}
 *   {"mode": "generators", "generators": [[{atom: "p/q"}, ... N maps], ...]}
 * Component maps may be sparse (missing atoms read as 0).  Explicit
 * generators are checked for terminal measurability but are NOT required to
 * be zero-sum.  An absent key yields the deterministic-transfers-only space.
 */
ExchangeSpace exchanges_from_json(const MarketModel& model, const nlohmann::json& doc);

/**
 * Claim file {"components": [{atom: "p/q"}, ... N maps]}, sparse maps
 * allowed; validated for terminal measurability per agent.
 */
RandomVector parse_claim(const MarketModel& model, const nlohmann::json& doc);

RandomVector load_claim_file(const MarketModel& model, const std::string& path);

/** Canonical JSON form of a model (atoms in sample-space order throughout). */
nlohmann::ordered_json market_to_json(const MarketModel& model);

/** {agent name: {atom: "p/q"}} rendering of a per-agent vector. */
nlohmann::ordered_json random_vector_to_json(const MarketModel& model, const RandomVector& rv);

}   // namespace colmkt

#endif   // COLMKT_MARKET_JSON_HPP
