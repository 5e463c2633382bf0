/**
 * Command-line front end for the collective-market engine.
 *
 * Exit codes: 0 = property holds / computation succeeded, 2 = property
 * violated (a witness is printed), 1 = input or usage error, 70 = internal
 * consistency failure (a bug, never bad input).
 */
#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <exception>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "colmkt/arbitrage.hpp"
#include "colmkt/errors.hpp"
#include "colmkt/gains.hpp"
#include "colmkt/hedging.hpp"
#include "colmkt/market.hpp"
#include "colmkt/market_json.hpp"
#include "colmkt/polytope.hpp"
#include "colmkt/random_market.hpp"
#include "colmkt/rational.hpp"

namespace
{

using json = nlohmann::ordered_json;
using namespace colmkt;

constexpr int kExitHolds = 0;
constexpr int kExitViolated = 2;
constexpr int kExitInputError = 1;
constexpr int kExitInternal = 70;

struct CommonOptions
{
    std::string market_path;
    std::string claim_path;
    std::string exchanges_spec;   // "", "rn0", "zero_sum_partition:t=N", or a file path
    std::string horizon_spec;     // "", or "s:t"
    bool json_out = false;
    int max_vertex_dim = 0;
    std::uint64_t seed = 1;
    int random_count = 0;
};

// ---------------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------------

json vec_to_json(const SampleSpace& space, const RatVec& values)
{
    json out = json::object();
    for (std::size_t a = 0; a < space.size(); ++a)
        out[space.atoms[a]] = to_string(values[a]);
    return out;
}

json components_to_json(const MarketModel& model, const RandomVector& rv)
{
    json out = json::array();
    for (const RatVec& comp : rv.components)
        out.push_back(vec_to_json(model.space, comp));
    return out;
}

std::vector<std::string> agent_names(const MarketModel& model)
{
    std::vector<std::string> names;
    for (const AgentSpec& agent : model.agents)
        names.push_back(agent.name);
    return names;
}

json measure_to_json(const std::vector<std::string>& names, const SampleSpace& space,
                     const MeasureVector& mv)
{
    json out = json::object();
    for (std::size_t i = 0; i < mv.per_agent.size(); ++i)
        out[names[i]] = vec_to_json(space, mv.per_agent[i]);
    return out;
}

json rvec_to_json(const RatVec& values)
{
    json out = json::array();
    for (const Rational& v : values)
        out.push_back(to_string(v));
    return out;
}

json strategy_to_json(const MarketModel& model, std::size_t agent, const AgentStrategy& s)
{
    json out = json::array();
    for (std::size_t t = 0; t < s.holdings.size(); ++t)
    {
        const Partition& level = model.agents[agent].filtration.levels[t];
        json row = json::object();
        for (std::size_t b = 0; b < s.holdings[t].size(); ++b)
        {
            json cell = json::array();
            for (const Rational& h : s.holdings[t][b])
                cell.push_back(to_string(h));
            row[model.space.block_label(level.blocks[b])] = std::move(cell);
        }
        out.push_back(std::move(row));
    }
    return out;
}

json certificate_to_json(const MarketModel& model, const HedgeCertificate& cert)
{
    json out;
    out["price"] = to_string(cert.price);
    out["transfer"] = rvec_to_json(cert.transfer);
    json strategies = json::object();
    for (std::size_t i = 0; i < cert.strategies.size(); ++i)
        strategies[model.agents[i].name] = strategy_to_json(model, i, cert.strategies[i]);
    out["strategies"] = std::move(strategies);
    out["generator_coefficients"] = rvec_to_json(cert.generator_coefficients);
    out["deterministic_transfer"] = rvec_to_json(cert.deterministic_transfer);
    out["slack"] = components_to_json(model, cert.slack);
    return out;
}

json witness_to_json(const MarketModel& model, const ArbitrageWitness& w)
{
    json out;
    json strategies = json::object();
    for (std::size_t i = 0; i < w.strategies.size(); ++i)
        strategies[model.agents[i].name] = strategy_to_json(model, i, w.strategies[i]);
    out["strategies"] = std::move(strategies);
    out["generator_coefficients"] = rvec_to_json(w.generator_coefficients);
    out["deterministic_transfer"] = rvec_to_json(w.deterministic_transfer);
    out["outcome"] = components_to_json(model, w.outcome);
    return out;
}

/**
 * `measure_names` may be shorter than the model's agent list: a one-agent
 * viability report carries that agent's measure only, while its witness is
 * always full-shape.
 */
json nca_report_to_json(const MarketModel& model, const NcaReport& report,
                        const std::vector<std::string>& measure_names)
{
    json out;
    out["holds"] = report.holds;
    out["polytope_empty"] = report.polytope_empty;
    if (report.max_t)
        out["max_t"] = to_string(*report.max_t);
    if (report.measure)
        out["measure"] = measure_to_json(measure_names, model.space, *report.measure);
    if (report.witness)
        out["witness"] = witness_to_json(model, *report.witness);
    return out;
}

std::string atom_line(const SampleSpace& space, const RatVec& values)
{
    std::ostringstream os;
    for (std::size_t a = 0; a < space.size(); ++a)
    {
        if (a)
            os << "  ";
        os << space.atoms[a] << "=" << to_string(values[a]);
    }
    return os.str();
}

void print_measure(std::ostream& os, const std::vector<std::string>& names,
                   const SampleSpace& space, const MeasureVector& mv,
                   const std::string& indent)
{
    for (std::size_t i = 0; i < mv.per_agent.size(); ++i)
        os << indent << names[i] << ": " << atom_line(space, mv.per_agent[i]) << "\n";
}

void print_components(std::ostream& os, const MarketModel& model, const RandomVector& rv,
                      const std::string& indent)
{
    for (std::size_t i = 0; i < rv.components.size(); ++i)
        os << indent << model.agents[i].name << ": " << atom_line(model.space, rv.components[i])
           << "\n";
}

std::string plain_list(const RatVec& values)
{
    std::string out = "(";
    for (std::size_t k = 0; k < values.size(); ++k)
    {
        if (k)
            out += ", ";
        out += to_string(values[k]);
    }
    return out + ")";
}

void print_nca_report(std::ostream& os, const MarketModel& model, const NcaReport& report,
                      const std::string& label, const std::vector<std::string>& measure_names)
{
    os << label << ": " << (report.holds ? "holds" : "violated") << "\n";
    if (report.max_t)
        os << "  max-t over measure polytope: " << to_string(*report.max_t) << "\n";
    else
        os << "  measure polytope: empty\n";
    if (report.measure)
    {
        os << "  full-support measure vector:\n";
        print_measure(os, measure_names, model.space, *report.measure, "    ");
    }
    if (report.witness)
    {
        os << "  witness outcome (nonnegative, not identically zero):\n";
        print_components(os, model, report.witness->outcome, "    ");
        os << "  realized via generator coefficients "
           << plain_list(report.witness->generator_coefficients)
           << " and deterministic transfer "
           << plain_list(report.witness->deterministic_transfer) << "\n";
    }
}

void print_certificate(std::ostream& os, const MarketModel& model, const HedgeCertificate& cert)
{
    os << "  transfer: " << plain_list(cert.transfer) << "\n";
    os << "  generator coefficients: " << plain_list(cert.generator_coefficients) << "\n";
    os << "  deterministic transfer: " << plain_list(cert.deterministic_transfer) << "\n";
    os << "  slack:\n";
    print_components(os, model, cert.slack, "    ");
}

void emit(const CommonOptions& opt, const json& doc, const std::string& text)
{
    if (opt.json_out)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << text;
}

// ---------------------------------------------------------------------------
// Input plumbing
// ---------------------------------------------------------------------------

struct LoadedMarket
{
    MarketModel model;
    ExchangeSpace exchanges;
    json source_doc;
};

std::pair<int, int> parse_span(const std::string& spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
        throw ParseError("--horizon expects s:t with integers s < t");
    try
    {
        return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
    }
    catch (const std::exception&)
    {
        throw ParseError("--horizon expects s:t with integers s < t");
    }
}

ExchangeSpace resolve_exchanges(const MarketModel& model, const std::string& spec,
                                const json& market_doc)
{
    if (spec.empty())
        return exchanges_from_json(model, market_doc);
    if (spec == "rn0")
        return ExchangeSpace{};
    const std::string prefix = "zero_sum_partition:t=";
    if (spec.rfind(prefix, 0) == 0)
    {
        int t = 0;
        try
        {
            t = std::stoi(spec.substr(prefix.size()));
        }
        catch (const std::exception&)
        {
            throw ParseError("--exchanges " + prefix + "N requires an integer N");
        }
        return zero_sum_generators_from_partition(model, t);
    }
    std::ifstream in(spec);
    if (!in)
        throw ParseError("cannot open exchange file " + spec);
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::exception& e)
    {
        throw ParseError("invalid JSON in " + spec + ": " + e.what());
    }
    if (!doc.contains("exchanges"))
    {
        json wrapped;
        wrapped["exchanges"] = std::move(doc);
        return exchanges_from_json(model, wrapped);
    }
    return exchanges_from_json(model, doc);
}

/**
 * Load, restrict, and resolve.  Exchange specs are interpreted on the
 * analyzed market: with --horizon s:t, time indices in the spec (and in the
 * market file's own "exchanges" key) refer to the restricted clock where the
 * old time s is 0.
 */
LoadedMarket load_inputs(const CommonOptions& opt)
{
    LoadedMarket loaded;
    std::ifstream in(opt.market_path);
    if (!in)
        throw ParseError("cannot open market file " + opt.market_path);
    try
    {
        loaded.source_doc = json::parse(in);
    }
    catch (const json::exception& e)
    {
        throw ParseError("invalid JSON in " + opt.market_path + ": " + e.what());
    }
    loaded.model = parse_market(loaded.source_doc);
    if (!opt.horizon_spec.empty())
    {
        const auto [s, t] = parse_span(opt.horizon_spec);
        loaded.model = restrict_horizon(loaded.model, s, t);
    }
    loaded.exchanges = resolve_exchanges(loaded.model, opt.exchanges_spec, loaded.source_doc);
    return loaded;
}

std::string market_summary(const CommonOptions& opt, const LoadedMarket& loaded)
{
    std::ostringstream os;
    os << "market: " << opt.market_path;
    if (!opt.horizon_spec.empty())
        os << " [horizon " << opt.horizon_spec << "]";
    os << " (" << loaded.model.num_atoms() << " atoms, " << loaded.model.num_agents()
       << " agents, " << loaded.model.num_assets() << " assets, horizon "
       << loaded.model.horizon << ")\n";
    os << "exchanges: " << loaded.exchanges.generators.size()
       << " generators + deterministic zero-sum transfers\n";
    return os.str();
}

json base_doc(const std::string& verb, const CommonOptions& opt, const LoadedMarket& loaded)
{
    json doc;
    doc["verb"] = verb;
    doc["market"] = opt.market_path;
    if (!opt.horizon_spec.empty())
        doc["horizon"] = opt.horizon_spec;
    doc["generators"] = loaded.exchanges.generators.size();
    return doc;
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

int run_validate(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    json doc = base_doc("validate", opt, loaded);
    doc["valid"] = true;
    doc["atoms"] = loaded.model.num_atoms();
    doc["agents"] = loaded.model.num_agents();
    doc["assets"] = loaded.model.num_assets();
    doc["T"] = loaded.model.horizon;
    emit(opt, doc, market_summary(opt, loaded) + "model: valid\n");
    return kExitHolds;
}

int run_na(const CommonOptions& opt, int agent_1based, bool global)
{
    const LoadedMarket loaded = load_inputs(opt);
    const MarketModel& model = loaded.model;
    json doc = base_doc("na", opt, loaded);
    std::ostringstream os;
    os << market_summary(opt, loaded);
    bool all_hold = true;

    if (global)
    {
        const GlobalNaReport global_report = check_na_global(model);
        all_hold = global_report.report.holds;
        doc["global"] = nca_report_to_json(global_report.joined_market, global_report.report,
                                           agent_names(global_report.joined_market));
        print_nca_report(os, global_report.joined_market, global_report.report,
                         "pooled-market viability", agent_names(global_report.joined_market));
    }
    else
    {
        json agents = json::object();
        for (std::size_t i = 0; i < model.num_agents(); ++i)
        {
            if (agent_1based > 0 && static_cast<std::size_t>(agent_1based - 1) != i)
                continue;
            const NcaReport report = check_na_agent(model, i);
            all_hold = all_hold && report.holds;
            const std::vector<std::string> solo_name{model.agents[i].name};
            agents[model.agents[i].name] = nca_report_to_json(model, report, solo_name);
            print_nca_report(os, model, report, "viability of " + model.agents[i].name,
                             solo_name);
        }
        doc["agents"] = std::move(agents);
    }
    doc["holds"] = all_hold;
    emit(opt, doc, os.str());
    return all_hold ? kExitHolds : kExitViolated;
}

int run_nca(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const NcaReport report = check_nca(loaded.model, loaded.exchanges);
    json doc = base_doc("nca", opt, loaded);
    doc.update(nca_report_to_json(loaded.model, report, agent_names(loaded.model)));
    std::ostringstream os;
    os << market_summary(opt, loaded);
    print_nca_report(os, loaded.model, report, "collective viability",
                     agent_names(loaded.model));
    emit(opt, doc, os.str());
    return report.holds ? kExitHolds : kExitViolated;
}

int run_measures(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const MarketModel& model = loaded.model;
    const NcaReport report = check_nca(model, loaded.exchanges);
    const Polytope poly = collective_mm_polytope(model, loaded.exchanges);

    json doc = base_doc("measures", opt, loaded);
    doc["holds"] = report.holds;
    doc["polytope_dim"] = poly.dim;
    doc["equalities"] = poly.eq_rhs.size();
    if (report.max_t)
        doc["max_t"] = to_string(*report.max_t);

    std::ostringstream os;
    os << market_summary(opt, loaded);
    os << "measure polytope: " << poly.dim << " coordinates, " << poly.eq_rhs.size()
       << " equalities\n";
    if (report.holds)
    {
        RatVec flat;
        for (const RatVec& q : report.measure->per_agent)
            flat.insert(flat.end(), q.begin(), q.end());
        const std::size_t dim = affine_dimension(poly, flat);
        const bool single = (dim == 0);
        doc["max_t"] = to_string(*report.max_t);
        doc["affine_dimension"] = dim;
        doc["singleton"] = single;
        doc["measure"] = measure_to_json(agent_names(model), model.space, *report.measure);
        os << "equivalent measure vectors: nonempty (max-t " << to_string(*report.max_t)
           << ")\n";
        os << "affine dimension: " << dim << (single ? " (unique measure vector)" : "") << "\n";
        os << "representative full-support measure vector:\n";
        print_measure(os, agent_names(model), model.space, *report.measure, "  ");
    }
    else
    {
        os << "equivalent measure vectors: none ("
           << (report.polytope_empty ? "polytope empty"
                                     : "polytope has no strictly positive point")
           << ")\n";
    }
    emit(opt, doc, os.str());
    return report.holds ? kExitHolds : kExitViolated;
}

int run_vertices(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const Polytope poly = collective_mm_polytope(loaded.model, loaded.exchanges);
    const std::vector<RatVec> verts = enumerate_vertices(poly, opt.max_vertex_dim);

    json doc = base_doc("vertices", opt, loaded);
    doc["polytope_dim"] = poly.dim;
    doc["count"] = verts.size();
    json arr = json::array();
    std::ostringstream os;
    os << market_summary(opt, loaded);
    os << "vertices of the measure polytope (" << verts.size() << "):\n";
    for (const RatVec& v : verts)
    {
        MeasureVector mv;
        const std::size_t K = loaded.model.num_atoms();
        for (std::size_t i = 0; i < loaded.model.num_agents(); ++i)
            mv.per_agent.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(i * K),
                                      v.begin() + static_cast<std::ptrdiff_t>((i + 1) * K));
        arr.push_back(measure_to_json(agent_names(loaded.model), loaded.model.space, mv));
        os << "  vertex:\n";
        print_measure(os, agent_names(loaded.model), loaded.model.space, mv, "    ");
    }
    doc["vertices"] = std::move(arr);
    emit(opt, doc, os.str());
    return kExitHolds;
}

int run_price(const CommonOptions& opt, bool super)
{
    const LoadedMarket loaded = load_inputs(opt);
    const RandomVector claim = load_claim_file(loaded.model, opt.claim_path);
    const PriceResult res = super ? super_price(loaded.model, loaded.exchanges, claim)
                                  : sub_price(loaded.model, loaded.exchanges, claim);
    const char* name = super ? "superhedge" : "subhedge";
    json doc = base_doc(name, opt, loaded);
    doc["claim"] = opt.claim_path;
    doc["price"] = to_string(res.price);
    doc["certificate"] = certificate_to_json(loaded.model, res.certificate);
    std::ostringstream os;
    os << market_summary(opt, loaded);
    os << name << " price: " << to_string(res.price) << "\n";
    print_certificate(os, loaded.model, res.certificate);
    emit(opt, doc, os.str());
    return kExitHolds;
}

int run_gap(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const RandomVector claim = load_claim_file(loaded.model, opt.claim_path);
    const PriceGap gap = price_gap(loaded.model, loaded.exchanges, claim);
    json doc = base_doc("gap", opt, loaded);
    doc["claim"] = opt.claim_path;
    doc["lower"] = to_string(gap.lower);
    doc["upper"] = to_string(gap.upper);
    doc["replicable"] = gap.replicable;
    std::ostringstream os;
    os << market_summary(opt, loaded);
    os << "price interval: [" << to_string(gap.lower) << ", " << to_string(gap.upper) << "]\n";
    os << "replicable: " << (gap.replicable ? "yes (gap is zero)" : "no (gap is positive)")
       << "\n";
    emit(opt, doc, os.str());
    return kExitHolds;
}

int run_replicate(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const RandomVector claim = load_claim_file(loaded.model, opt.claim_path);
    const ReplicationOutcome out = try_replicate(loaded.model, loaded.exchanges, claim);
    json doc = base_doc("replicate", opt, loaded);
    doc["claim"] = opt.claim_path;
    doc["replicable"] = out.certificate.has_value();
    std::ostringstream os;
    os << market_summary(opt, loaded);
    if (out.certificate)
    {
        doc["price"] = to_string(out.certificate->price);
        doc["certificate"] = certificate_to_json(loaded.model, *out.certificate);
        os << "replicable: yes, total transfer " << to_string(out.certificate->price) << "\n";
        print_certificate(os, loaded.model, *out.certificate);
        emit(opt, doc, os.str());
        return kExitHolds;
    }
    doc["left_kernel"] = rvec_to_json(out.left_kernel);
    os << "replicable: no\n";
    os << "separating functional over (agent, atom) rows: " << plain_list(out.left_kernel)
       << "\n";
    emit(opt, doc, os.str());
    return kExitViolated;
}

int run_complete(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const CompletenessReport report = completeness(loaded.model, loaded.exchanges);
    json doc = base_doc("complete", opt, loaded);
    doc["complete"] = report.complete;
    doc["singleton"] = report.singleton;
    doc["family_replicable"] = report.family_replicable;
    doc["family_prices_coincide"] = report.family_prices_coincide;
    doc["family_size"] = report.family_size;
    std::ostringstream os;
    os << market_summary(opt, loaded);
    os << "collectively complete: " << (report.complete ? "yes" : "no") << "\n";
    os << "  unique measure vector:          " << (report.singleton ? "yes" : "no") << "\n";
    os << "  spanning family replicable:     " << (report.family_replicable ? "yes" : "no")
       << "\n";
    os << "  sub = super on spanning family: " << (report.family_prices_coincide ? "yes" : "no")
       << "\n";
    os << "  (family of " << report.family_size
       << " claims: terminal-block indicators per agent, plus the generators)\n";
    emit(opt, doc, os.str());
    return report.complete ? kExitHolds : kExitViolated;
}

int run_priceset(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const RandomVector claim = load_claim_file(loaded.model, opt.claim_path);
    const PriceSetResult res =
        price_set(loaded.model, loaded.exchanges, claim, opt.max_vertex_dim);
    json doc = base_doc("priceset", opt, loaded);
    doc["claim"] = opt.claim_path;
    doc["sum_lower"] = to_string(res.sum_lower);
    doc["sum_upper"] = to_string(res.sum_upper);
    doc["replicable"] = res.replicable;
    doc["vertices_available"] = res.vertices_available;
    std::ostringstream os;
    os << market_summary(opt, loaded);
    os << "valuation sums range over [" << to_string(res.sum_lower) << ", "
       << to_string(res.sum_upper) << "]\n";
    os << "replicable: " << (res.replicable ? "yes (every measure gives the same sum)" : "no")
       << "\n";
    if (res.vertices_available)
    {
        json arr = json::array();
        os << "extreme valuation tuples (" << res.vertices.size() << "):\n";
        for (const RatVec& v : res.vertices)
        {
            arr.push_back(rvec_to_json(v));
            os << "  " << plain_list(v) << "\n";
        }
        doc["vertices"] = std::move(arr);
    }
    else
        os << "extreme valuation tuples: skipped (polytope dimension over the vertex limit)\n";
    emit(opt, doc, os.str());
    return kExitHolds;
}

int run_extend(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const RandomVector claim = load_claim_file(loaded.model, opt.claim_path);
    const NcaReport report = check_nca(loaded.model, loaded.exchanges);
    if (!report.holds)
    {
        json doc = base_doc("extend", opt, loaded);
        doc.update(nca_report_to_json(loaded.model, report, agent_names(loaded.model)));
        std::ostringstream os;
        os << market_summary(opt, loaded);
        print_nca_report(os, loaded.model, report, "collective viability",
                         agent_names(loaded.model));
        os << "cannot extend: no collective pricing measure exists\n";
        emit(opt, doc, os.str());
        return kExitViolated;
    }
    const MarketModel extended =
        extended_market(loaded.model, loaded.exchanges, claim, *report.measure);
    json doc = market_to_json(extended);
    if (!loaded.exchanges.generators.empty())
    {
        json gens = json::array();
        for (const RandomVector& gen : loaded.exchanges.generators)
            gens.push_back(components_to_json(loaded.model, gen));
        doc["exchanges"] = {{"mode", "generators"}, {"generators", std::move(gens)}};
    }
    // The extended market document is the deliverable in both modes.
    std::cout << doc.dump(2) << "\n";
    return kExitHolds;
}

int run_csf_roll(const CommonOptions& opt)
{
    const LoadedMarket loaded = load_inputs(opt);
    const MarketModel& model = loaded.model;
    const int trials = opt.random_count > 0 ? opt.random_count : 5;
    Rng rng(opt.seed);

    json doc = base_doc("csf-roll", opt, loaded);
    doc["seed"] = opt.seed;
    doc["trials"] = trials;
    std::ostringstream os;
    os << market_summary(opt, loaded);
    os << "rolling " << trials << " random collectively self-financing strategies (seed "
       << opt.seed << ")\n";

    json trials_json = json::array();
    for (int trial = 0; trial < trials; ++trial)
    {
        RatVec v0;
        for (std::size_t i = 0; i < model.num_agents(); ++i)
            v0.push_back(rng.next_rational(-4, 4, 2));
        const std::vector<AgentStrategy> risky = random_strategies(model, rng, -3, 3, 2);
        const ExchangeSchedule schedule = random_schedule(model, rng, -2, 2, 2);
        const CsfStrategy csf = lift_to_csf(model, v0, risky, schedule);
        const ValueProcess vp = value_process(model, csf, schedule);

        json entry;
        entry["initial_wealth"] = rvec_to_json(v0);
        json terminal = json::object();
        for (std::size_t i = 0; i < model.num_agents(); ++i)
            terminal[model.agents[i].name] =
                vec_to_json(model.space, vp.values[i][static_cast<std::size_t>(model.horizon)]);
        entry["terminal_value"] = std::move(terminal);
        trials_json.push_back(std::move(entry));

        os << "trial " << (trial + 1) << ": books balance at every date; v0 = "
           << plain_list(v0) << "\n";
        if (trial == 0)
            for (std::size_t i = 0; i < model.num_agents(); ++i)
                for (int t = 0; t <= model.horizon; ++t)
                    os << "  V[" << model.agents[i].name << "] t=" << t << ": "
                       << atom_line(model.space, vp.values[i][static_cast<std::size_t>(t)])
                       << "\n";
    }
    doc["trials_detail"] = std::move(trials_json);
    doc["all_balanced"] = true;
    emit(opt, doc, os.str());
    return kExitHolds;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

struct AuditCheck
{
    std::string name;
    bool pass = false;
    std::string detail;
};

AuditCheck run_check(const std::string& name, const std::function<std::string()>& body)
{
    AuditCheck check;
    check.name = name;
    try
    {
        check.detail = body();
        check.pass = true;
    }
    catch (const std::exception& e)
    {
        check.pass = false;
        check.detail = e.what();
    }
    return check;
}

/** Exchange space for the interval panel: zero-sum transfers measurable at
 *  the last trading decision date of the interval (time t-1, on the
 *  restricted clock).  For an interval starting at 0 with trivial initial
 *  information this is exactly the deterministic zero-sum space. */
ExchangeSpace panel_exchanges(const MarketModel& restricted)
{
    return zero_sum_generators_from_partition(restricted, restricted.horizon - 1);
}

std::vector<RandomVector> probe_claims(const MarketModel& model, const ExchangeSpace& exchanges)
{
    std::vector<RandomVector> family;
    for (std::size_t j = 0; j < model.num_agents(); ++j)
    {
        const Partition& terminal =
            model.agents[j].filtration.levels[static_cast<std::size_t>(model.horizon)];
        for (const auto& block : terminal.blocks)
            family.push_back(indicator_claim(model, j, block));
    }
    for (const RandomVector& gen : exchanges.generators)
        family.push_back(gen);
    return family;
}

std::vector<AuditCheck> audit_market(const MarketModel& model, const ExchangeSpace& exchanges)
{
    // The checks are independent; they run concurrently and the report is
    // assembled in a fixed order.
    std::vector<std::pair<std::string, std::function<std::string()>>> bodies;

    bodies.emplace_back("viability implications", [&]() -> std::string {
        const ImplicationsAudit audit = implications_audit(model, exchanges);
        std::ostringstream os;
        os << "pooled " << (audit.na_global ? "viable" : "not viable") << ", collective "
           << (audit.nca ? "viable" : "not viable");
        for (std::size_t i = 0; i < audit.na_agent.size(); ++i)
            os << ", " << model.agents[i].name << " "
               << (audit.na_agent[i] ? "viable" : "not viable");
        return os.str();
    });

    bodies.emplace_back("pricing duality on probe claims", [&]() -> std::string {
        if (!check_nca(model, exchanges).holds)
            return "skipped: collective viability fails";
        std::size_t count = 0;
        for (const RandomVector& claim : probe_claims(model, exchanges))
        {
            const Rational primal = super_price(model, exchanges, claim).price;
            const Rational dual = dual_super_price(model, exchanges, claim);
            if (primal != dual)
                throw InternalInconsistency("duality mismatch: " + to_string(primal) +
                                            " vs " + to_string(dual));
            ++count;
        }
        return "primal = dual on " + std::to_string(count) + " claims";
    });

    bodies.emplace_back("replication iff zero gap", [&]() -> std::string {
        if (!check_nca(model, exchanges).holds)
            return "skipped: collective viability fails";
        std::size_t replicable = 0, total = 0;
        for (const RandomVector& claim : probe_claims(model, exchanges))
        {
            const PriceGap gap = price_gap(model, exchanges, claim);
            ++total;
            if (gap.replicable)
                ++replicable;
        }
        return std::to_string(replicable) + "/" + std::to_string(total) +
               " probe claims replicable, dichotomy verified";
    });

    bodies.emplace_back("completeness equivalences", [&]() -> std::string {
        if (!check_nca(model, exchanges).holds)
            return "skipped: collective viability fails";
        const CompletenessReport report = completeness(model, exchanges);
        return std::string("three tests agree: ") +
               (report.complete ? "complete" : "incomplete");
    });

    bodies.emplace_back("self-financing round trip", [&]() -> std::string {
        Rng rng(99);
        for (int trial = 0; trial < 5; ++trial)
        {
            RatVec v0;
            for (std::size_t i = 0; i < model.num_agents(); ++i)
                v0.push_back(rng.next_rational(-4, 4, 2));
            const std::vector<AgentStrategy> risky = random_strategies(model, rng, -3, 3, 2);
            const ExchangeSchedule schedule = random_schedule(model, rng, -2, 2, 2);
            value_process(model, lift_to_csf(model, v0, risky, schedule), schedule);
        }
        return "5 random strategies balance at every date";
    });

    std::vector<std::future<AuditCheck>> futures;
    for (auto& [name, body] : bodies)
        futures.push_back(std::async(std::launch::async, run_check, name, body));
    std::vector<AuditCheck> checks;
    for (auto& f : futures)
        checks.push_back(f.get());

    // Interval panel, sequential (restrict_horizon per interval).
    if (model.horizon >= 2 && !model.non_trivial_initial)
        for (int s = 0; s < model.horizon; ++s)
            for (int t = s + 1; t <= model.horizon; ++t)
            {
                AuditCheck check;
                check.name = "interval (" + std::to_string(s) + "," + std::to_string(t) + ")";
                try
                {
                    const MarketModel restricted = restrict_horizon(model, s, t);
                    const NcaReport report =
                        check_nca(restricted, panel_exchanges(restricted));
                    check.pass = true;
                    check.detail = std::string("collective viability ") +
                                   (report.holds ? "holds" : "fails") +
                                   " (zero-sum exchanges at the last decision date)";
                }
                catch (const std::exception& e)
                {
                    check.pass = false;
                    check.detail = e.what();
                }
                checks.push_back(std::move(check));
            }
    return checks;
}

std::vector<AuditCheck> audit_random_suite(int count, std::uint64_t seed)
{
    std::vector<AuditCheck> checks;
    Rng rng(seed);
    RandomMarketOptions options;
    options.max_atoms = 8;
    options.max_horizon = 2;
    int viable = 0;
    AuditCheck suite;
    suite.name = "random suite (" + std::to_string(count) + " markets, seed " +
                 std::to_string(seed) + ")";
    try
    {
        for (int k = 0; k < count; ++k)
        {
            options.martingale_prices = (k % 4 != 3);
            const MarketModel model = random_market(rng, options);
            const ExchangeSpace exchanges = random_exchange_space(model, rng);
            implications_audit(model, exchanges);
            if (!check_nca(model, exchanges).holds)
                continue;
            ++viable;
            const RandomVector claim = random_claim(model, rng, -3, 6, 3);
            const Rational primal = super_price(model, exchanges, claim).price;
            const Rational dual = dual_super_price(model, exchanges, claim);
            if (primal != dual)
                throw InternalInconsistency("duality mismatch on market " +
                                            std::to_string(k));
            price_gap(model, exchanges, claim);
            decomposition_check(model, claim);
        }
        suite.pass = true;
        suite.detail = std::to_string(viable) + " collectively viable instances exercised";
    }
    catch (const std::exception& e)
    {
        suite.pass = false;
        suite.detail = e.what();
    }
    checks.push_back(std::move(suite));
    return checks;
}

int run_audit(const CommonOptions& opt)
{
    std::vector<AuditCheck> checks;
    json doc;
    doc["verb"] = "audit";
    std::ostringstream os;

    if (!opt.market_path.empty())
    {
        const LoadedMarket loaded = load_inputs(opt);
        doc["market"] = opt.market_path;
        doc["generators"] = loaded.exchanges.generators.size();
        os << market_summary(opt, loaded);
        const std::vector<AuditCheck> market_checks =
            audit_market(loaded.model, loaded.exchanges);
        checks.insert(checks.end(), market_checks.begin(), market_checks.end());
    }
    if (opt.random_count > 0)
    {
        const std::vector<AuditCheck> suite =
            audit_random_suite(opt.random_count, opt.seed);
        checks.insert(checks.end(), suite.begin(), suite.end());
    }
    if (checks.empty())
        throw ParseError("audit needs a market file, --random n=<count>, or both");

    bool all_pass = true;
    json arr = json::array();
    for (const AuditCheck& check : checks)
    {
        all_pass = all_pass && check.pass;
        json entry;
        entry["name"] = check.name;
        entry["pass"] = check.pass;
        entry["detail"] = check.detail;
        arr.push_back(std::move(entry));
        os << (check.pass ? "PASS" : "FAIL") << "  " << check.name << ": " << check.detail
           << "\n";
    }
    doc["checks"] = std::move(arr);
    doc["all_pass"] = all_pass;
    emit(opt, doc, os.str());
    return all_pass ? kExitHolds : kExitViolated;
}

}   // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact analysis of multi-agent segmented markets: viability, "
                 "martingale measure polytopes, hedging prices, replication and "
                 "completeness, all in rational arithmetic"};
    app.require_subcommand(1);

    CommonOptions opt;
    int agent_1based = 0;
    bool global_na = false;
    bool super = true;

    auto add_common = [&](CLI::App* sub, bool with_claim) {
        sub->add_option("market", opt.market_path, "market JSON file")->required();
        if (with_claim)
            sub->add_option("claim", opt.claim_path, "claim JSON file")->required();
        sub->add_option("--exchanges", opt.exchanges_spec,
                        "rn0 | zero_sum_partition:t=N | exchange JSON file "
                        "(default: the market file's own \"exchanges\" key)");
        sub->add_option("--horizon", opt.horizon_spec,
                        "s:t  analyze the sub-interval market (time re-based to s)");
        sub->add_flag("--json", opt.json_out, "machine-readable output");
        sub->add_option("--max-vertex-dim", opt.max_vertex_dim,
                        "vertex-enumeration dimension cap (0 = default/env)");
    };

    CLI::App* validate = app.add_subcommand("validate", "check every structural invariant");
    add_common(validate, false);

    CLI::App* na = app.add_subcommand("na", "single-agent (or pooled) viability");
    add_common(na, false);
    na->add_option("--agent", agent_1based, "check one agent (1-based index)");
    na->add_flag("--global", global_na,
                 "pool all assets under the joined filtration instead");

    CLI::App* nca = app.add_subcommand("nca", "collective viability for the exchange space");
    add_common(nca, false);

    CLI::App* measures =
        app.add_subcommand("measures", "collective martingale measure polytope");
    add_common(measures, false);

    CLI::App* vertices = app.add_subcommand("vertices", "enumerate the polytope's vertices");
    add_common(vertices, false);

    CLI::App* superhedge =
        app.add_subcommand("superhedge", "least collective endowment dominating the claim");
    add_common(superhedge, true);

    CLI::App* subhedge =
        app.add_subcommand("subhedge", "greatest collective endowment the claim dominates");
    add_common(subhedge, true);

    CLI::App* gap = app.add_subcommand("gap", "sub/super price interval and replicability");
    add_common(gap, true);

    CLI::App* replicate = app.add_subcommand("replicate", "exact replication certificate");
    add_common(replicate, true);

    CLI::App* complete =
        app.add_subcommand("complete", "collective completeness, three ways");
    add_common(complete, false);

    CLI::App* priceset =
        app.add_subcommand("priceset", "arbitrage-consistent valuation set of a claim");
    add_common(priceset, true);

    CLI::App* extend = app.add_subcommand(
        "extend", "append claim-paying assets priced by a collective measure");
    add_common(extend, true);

    CLI::App* csf = app.add_subcommand(
        "csf-roll", "random collectively self-financing round trips on the market");
    add_common(csf, false);
    csf->add_option("--seed", opt.seed, "generator seed (default 1)");
    csf->add_option("--trials", opt.random_count, "number of round trips (default 5)");

    CLI::App* audit =
        app.add_subcommand("audit", "run the full invariant suite and report pass/fail");
    audit->add_option("market", opt.market_path, "market JSON file (optional with --random)");
    audit->add_option("--exchanges", opt.exchanges_spec,
                      "rn0 | zero_sum_partition:t=N | exchange JSON file");
    audit->add_option("--horizon", opt.horizon_spec, "s:t sub-interval");
    audit->add_flag("--json", opt.json_out, "machine-readable output");
    audit->add_option("--random", [&opt](const std::vector<std::string>& vals) {
        const std::string& v = vals.back();
        const std::string prefix = "n=";
        const std::string body = v.rfind(prefix, 0) == 0 ? v.substr(prefix.size()) : v;
        try
        {
            opt.random_count = std::stoi(body);
        }
        catch (const std::exception&)
        {
            return false;
        }
        return opt.random_count > 0;
    }, "n=<count>  also audit a seeded random market suite");
    audit->add_option("--seed", opt.seed, "suite seed (default 1)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e);
    }

    try
    {
        if (validate->parsed())
            return run_validate(opt);
        if (na->parsed())
            return run_na(opt, agent_1based, global_na);
        if (nca->parsed())
            return run_nca(opt);
        if (measures->parsed())
            return run_measures(opt);
        if (vertices->parsed())
            return run_vertices(opt);
        if (superhedge->parsed())
            return run_price(opt, super);
        if (subhedge->parsed())
            return run_price(opt, !super);
        if (gap->parsed())
            return run_gap(opt);
        if (replicate->parsed())
            return run_replicate(opt);
        if (complete->parsed())
            return run_complete(opt);
        if (priceset->parsed())
            return run_priceset(opt);
        if (extend->parsed())
            return run_extend(opt);
        if (csf->parsed())
            return run_csf_roll(opt);
        if (audit->parsed())
            return run_audit(opt);
    }
    catch (const InternalInconsistency& e)
    {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kExitInternal;
    }
    catch (const NcaViolated& e)
    {
        std::cerr << "collective viability violated: " << e.what() << "\n";
        return kExitViolated;
    }
    catch (const NaViolated& e)
    {
        std::cerr << "agent viability violated: " << e.what() << "\n";
        return kExitViolated;
    }
    catch (const NotReplicable& e)
    {
        std::cerr << "not replicable: " << e.what() << "\n";
        return kExitViolated;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
