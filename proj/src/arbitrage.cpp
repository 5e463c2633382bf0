#include "colmkt/arbitrage.hpp"

#include "colmkt/lp.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace colmkt
{

bool full_support(const MeasureVector& mv)
{
    for (const RatVec& q : mv.per_agent)
        for (const Rational& x : q)
            if (x <= 0)
                return false;
    return !mv.per_agent.empty();
}

Polytope agent_mm_polytope(const MarketModel& model, std::size_t agent)
{
    if (agent >= model.num_agents())
        throw DimensionMismatch("agent_mm_polytope: agent index out of range");
    const AgentSpec& spec = model.agents[agent];
    const std::size_t K = model.num_atoms();
    Polytope poly(K);
    poly.nonneg.assign(K, true);

    RatVec mass(K, Rational(1));
    poly.add_eq(mass, Rational(1));

    for (int t = 1; t <= model.horizon; ++t)
    {
        const Partition& prev = spec.filtration.levels[static_cast<std::size_t>(t - 1)];
        for (const auto& block : prev.blocks)
        {
            for (const int j : spec.assets)
            {
                const PriceProcess& asset = model.assets[static_cast<std::size_t>(j)];
                RatVec row(K, Rational(0));
                bool nonzero = false;
                for (const int atom : block)
                {
                    const std::size_t a = static_cast<std::size_t>(atom);
                    row[a] = asset.prices[static_cast<std::size_t>(t)][a] -
                             asset.prices[static_cast<std::size_t>(t - 1)][a];
                    nonzero = nonzero || row[a] != 0;
                }
                if (nonzero)
                    poly.add_eq(row, Rational(0));
            }
        }
    }
    return poly;
}

Polytope collective_mm_polytope(const MarketModel& model, const ExchangeSpace& exchange)
{
    const std::size_t N = model.num_agents();
    const std::size_t K = model.num_atoms();
    Polytope poly(N * K);
    poly.nonneg.assign(N * K, true);

    for (std::size_t i = 0; i < N; ++i)
    {
        const Polytope agent_poly = agent_mm_polytope(model, i);
        for (std::size_t r = 0; r < agent_poly.eq_rhs.size(); ++r)
        {
            RatVec row(N * K, Rational(0));
            for (std::size_t a = 0; a < K; ++a)
                row[i * K + a] = agent_poly.eq_coeffs.at(r, a);
            poly.add_eq(row, agent_poly.eq_rhs[r]);
        }
    }
    for (std::size_t m = 0; m < exchange.generators.size(); ++m)
    {
        const RandomVector& gen = exchange.generators[m];
        if (gen.components.size() != N)
            throw DimensionMismatch("collective_mm_polytope: generator " + std::to_string(m + 1) +
                                    " has wrong component count");
        RatVec row(N * K, Rational(0));
        bool nonzero = false;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t a = 0; a < K; ++a)
            {
                row[i * K + a] = gen.components[i][a];
                nonzero = nonzero || row[i * K + a] != 0;
            }
        if (nonzero)
            poly.add_eq(row, Rational(0));
    }
    return poly;
}

MaxTResult max_t_interior(const Polytope& poly)
{
    const std::size_t n = poly.dim;
    bool any_flag = false;
    for (std::size_t k = 0; k < n; ++k)
        any_flag = any_flag || poly.nonneg[k];
    if (!any_flag)
        throw DimensionMismatch("max_t_interior: polytope has no nonnegative coordinates");

    LinearProgram lp(n + 1);
    lp.maximize = true;
    lp.objective[n] = 1;
    for (std::size_t k = 0; k < n; ++k)
        if (poly.nonneg[k])
            lp.lower_bounds[k] = Rational(0);
    for (std::size_t r = 0; r < poly.eq_rhs.size(); ++r)
    {
        RatVec row = poly.eq_coeffs.row(r);
        row.push_back(Rational(0));
        lp.add_eq(row, poly.eq_rhs[r]);
    }
    for (std::size_t r = 0; r < poly.ineq_rhs.size(); ++r)
    {
        RatVec row = poly.ineq_coeffs.row(r);
        row.push_back(Rational(0));
        lp.add_le(row, poly.ineq_rhs[r]);
    }
    for (std::size_t k = 0; k < n; ++k)
    {
        if (!poly.nonneg[k])
            continue;
        RatVec row(n + 1, Rational(0));
        row[k] = -1;
        row[n] = 1;
        lp.add_le(row, Rational(0));
    }

    const LPResult res = solve_lp(lp);
    MaxTResult out;
    if (res.status == LPStatus::Infeasible)
        return out;
    if (res.status != LPStatus::Optimal)
        throw InternalInconsistency("max_t_interior: LP unbounded on a bounded polytope");
    out.feasible = true;
    out.t_star = res.value;
    out.point.assign(res.primal.begin(), res.primal.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

namespace
{

/** Shared primal search: the best nonnegative outcome (componentwise capped
 *  at 1) reachable from gains plus, optionally, the exchange span.  An
 *  optimum of zero is an exact no-arbitrage certificate for the primal side. */
struct PrimalSearch
{
    Rational optimum;
    std::vector<RatVec> lambda;   // per participating agent
    RatVec beta;                  // explicit generator coefficients
    RatVec gamma;                 // N-vector deterministic zero-sum transfer
    std::vector<RatVec> outcome;  // per participating agent, per atom
};

PrimalSearch best_outcome(const MarketModel& model, const ExchangeSpace* exchange)
{
    const std::size_t N = model.num_agents();
    const std::size_t K = model.num_atoms();
    std::vector<GainsBasis> bases;
    bases.reserve(N);
    std::size_t num_lambda = 0;
    for (std::size_t i = 0; i < N; ++i)
    {
        bases.push_back(gains_basis(model, i));
        num_lambda += bases.back().generators.size();
    }
    const std::size_t R = exchange ? exchange->generators.size() : 0;
    const bool with_rn0 = exchange && exchange->include_deterministic && N > 1;
    const std::size_t num_gamma = with_rn0 ? N - 1 : 0;
    const std::size_t s_base = num_lambda + R + num_gamma;
    LinearProgram lp(s_base + N * K);
    lp.maximize = true;

    std::vector<std::size_t> lambda_base(N, 0);
    {
        std::size_t off = 0;
        for (std::size_t i = 0; i < N; ++i)
        {
            lambda_base[i] = off;
            off += bases[i].generators.size();
        }
    }

    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t a = 0; a < K; ++a)
        {
            const std::size_t s_col = s_base + i * K + a;
            lp.objective[s_col] = 1;
            lp.lower_bounds[s_col] = Rational(0);
            RatVec row(lp.num_vars, Rational(0));
            row[s_col] = 1;
            for (std::size_t g = 0; g < bases[i].generators.size(); ++g)
                row[lambda_base[i] + g] = -bases[i].generators[g].values[a];
            for (std::size_t m = 0; m < R; ++m)
                row[num_lambda + m] = -exchange->generators[m].components[i][a];
            if (with_rn0)
            {
                for (std::size_t d = 0; d + 1 < N; ++d)
                {
                    Rational c = 0;
                    if (i == d)
                        c = -1;
                    else if (i == N - 1)
                        c = 1;
                    row[num_lambda + R + d] = c;
                }
            }
            lp.add_eq(row, Rational(0));

            RatVec cap(lp.num_vars, Rational(0));
            cap[s_col] = 1;
            lp.add_le(cap, Rational(1));
        }

    const LPResult res = solve_lp(lp);
    if (res.status != LPStatus::Optimal)
        throw InternalInconsistency("best_outcome: primal search LP must be solvable");

    PrimalSearch out;
    out.optimum = res.value;
    out.lambda.resize(N);
    for (std::size_t i = 0; i < N; ++i)
        out.lambda[i].assign(
            res.primal.begin() + static_cast<std::ptrdiff_t>(lambda_base[i]),
            res.primal.begin() +
                static_cast<std::ptrdiff_t>(lambda_base[i] + bases[i].generators.size()));
    out.beta.assign(res.primal.begin() + static_cast<std::ptrdiff_t>(num_lambda),
                    res.primal.begin() + static_cast<std::ptrdiff_t>(num_lambda + R));
    out.gamma.assign(N, Rational(0));
    if (with_rn0)
    {
        Rational last = 0;
        for (std::size_t d = 0; d + 1 < N; ++d)
        {
            out.gamma[d] = res.primal[num_lambda + R + d];
            last -= out.gamma[d];
        }
        out.gamma[N - 1] = last;
    }
    out.outcome.resize(N);
    for (std::size_t i = 0; i < N; ++i)
        out.outcome[i].assign(
            res.primal.begin() + static_cast<std::ptrdiff_t>(s_base + i * K),
            res.primal.begin() + static_cast<std::ptrdiff_t>(s_base + (i + 1) * K));
    return out;
}

NcaReport assemble_report(const MarketModel& model, const Polytope& poly,
                          const ExchangeSpace* exchange, const std::string& what)
{
    const MaxTResult mt = max_t_interior(poly);
    const bool dual_holds = mt.feasible && mt.t_star > 0;

    const PrimalSearch primal = best_outcome(model, exchange);
    const bool primal_holds = primal.optimum == 0;

    if (dual_holds != primal_holds)
        throw InternalInconsistency(what + ": dual verdict (" +
                                    std::string(dual_holds ? "holds" : "violated") +
                                    ") disagrees with primal verdict (" +
                                    std::string(primal_holds ? "holds" : "violated") + ")");

    NcaReport report;
    report.holds = dual_holds;
    report.polytope_empty = !mt.feasible;
    if (mt.feasible)
        report.max_t = mt.t_star;
    const std::size_t N = model.num_agents();
    const std::size_t K = model.num_atoms();
    if (report.holds)
    {
        MeasureVector mv;
        for (std::size_t i = 0; i < N; ++i)
            mv.per_agent.emplace_back(
                mt.point.begin() + static_cast<std::ptrdiff_t>(i * K),
                mt.point.begin() + static_cast<std::ptrdiff_t>((i + 1) * K));
        report.measure = std::move(mv);
    }
    else
    {
        ArbitrageWitness witness;
        for (std::size_t i = 0; i < N; ++i)
            witness.strategies.push_back(strategy_from_coefficients(model, i, primal.lambda[i]));
        witness.generator_coefficients = primal.beta;
        witness.deterministic_transfer = primal.gamma;
        witness.outcome.components = primal.outcome;
        report.witness = std::move(witness);
    }
    return report;
}

}   // namespace

NcaReport check_na_agent(const MarketModel& model, std::size_t agent)
{
    if (agent >= model.num_agents())
        throw DimensionMismatch("check_na_agent: agent index out of range");
    // View the question through a one-agent copy of the model so the shared
    // dual/primal machinery applies verbatim.
    MarketModel solo;
    solo.space = model.space;
    solo.horizon = model.horizon;
    solo.assets = model.assets;
    solo.agents = {model.agents[agent]};
    solo.non_trivial_initial = model.non_trivial_initial;

    const Polytope poly = agent_mm_polytope(model, agent);
    NcaReport solo_report = assemble_report(solo, poly, nullptr,
                                            "check_na_agent(" + model.agents[agent].name + ")");

    // Re-embed the one-agent report into the full model's shape.
    NcaReport report;
    report.holds = solo_report.holds;
    report.polytope_empty = solo_report.polytope_empty;
    report.max_t = solo_report.max_t;
    report.measure = solo_report.measure;
    if (solo_report.witness)
    {
        ArbitrageWitness witness;
        witness.deterministic_transfer.assign(model.num_agents(), Rational(0));
        witness.outcome.components.assign(model.num_agents(),
                                          RatVec(model.num_atoms(), Rational(0)));
        for (std::size_t i = 0; i < model.num_agents(); ++i)
            witness.strategies.push_back(zero_strategy(model, i));
        witness.strategies[agent] = solo_report.witness->strategies[0];
        witness.outcome.components[agent] = solo_report.witness->outcome.components[0];
        report.witness = std::move(witness);
    }
    return report;
}

GlobalNaReport check_na_global(const MarketModel& model)
{
    GlobalNaReport out;
    MarketModel& joined = out.joined_market;
    joined.space = model.space;
    joined.horizon = model.horizon;
    joined.assets = model.assets;
    joined.non_trivial_initial = model.non_trivial_initial;

    AgentSpec pooled;
    pooled.name = "joined";
    std::set<int> access;
    for (const AgentSpec& agent : model.agents)
        access.insert(agent.assets.begin(), agent.assets.end());
    pooled.assets.assign(access.begin(), access.end());
    for (int t = 0; t <= model.horizon; ++t)
        pooled.filtration.levels.push_back(join_partition(model, t));
    joined.agents.push_back(std::move(pooled));
    validate_model(joined);

    out.report = check_na_agent(joined, 0);
    return out;
}

NcaReport check_nca(const MarketModel& model, const ExchangeSpace& exchange)
{
    for (std::size_t m = 0; m < exchange.generators.size(); ++m)
        validate_random_vector(model, exchange.generators[m],
                               "exchange generator " + std::to_string(m + 1));
    const Polytope poly = collective_mm_polytope(model, exchange);
    return assemble_report(model, poly, &exchange, "check_nca");
}

ImplicationsAudit implications_audit(const MarketModel& model, const ExchangeSpace& exchange)
{
    ImplicationsAudit audit;
    audit.na_global = check_na_global(model).report.holds;
    audit.nca = check_nca(model, exchange).holds;
    for (std::size_t i = 0; i < model.num_agents(); ++i)
        audit.na_agent.push_back(check_na_agent(model, i).holds);

    audit.generators_zero_sum = true;
    audit.deterministic_only = true;
    for (const RandomVector& gen : exchange.generators)
    {
        for (std::size_t a = 0; a < model.num_atoms(); ++a)
        {
            Rational s = 0;
            for (std::size_t i = 0; i < model.num_agents(); ++i)
                s += gen.components[i][a];
            if (s != 0)
                audit.generators_zero_sum = false;
        }
        for (std::size_t i = 0; i < model.num_agents(); ++i)
            for (std::size_t a = 1; a < model.num_atoms(); ++a)
                if (gen.components[i][a] != gen.components[i][0])
                    audit.deterministic_only = false;
    }
    audit.deterministic_only = audit.deterministic_only && audit.generators_zero_sum;

    if (audit.generators_zero_sum && audit.na_global && !audit.nca)
        throw ImplicationViolated("pooled viability holds but collective viability fails "
                                  "with zero-sum exchanges");
    bool all_agents = true;
    for (std::size_t i = 0; i < audit.na_agent.size(); ++i)
    {
        if (audit.nca && !audit.na_agent[i])
            throw ImplicationViolated("collective viability holds but agent " +
                                      model.agents[i].name + " has a classical arbitrage");
        all_agents = all_agents && audit.na_agent[i];
    }
    if (audit.deterministic_only && audit.nca != all_agents)
        throw ImplicationViolated("with deterministic transfers only, collective viability "
                                  "must equal the conjunction of agent viabilities");
    return audit;
}

bool is_singleton(const Polytope& poly, const RatVec& interior_point)
{
    return affine_dimension(poly, interior_point) == 0;
}

MarketModel extended_market(const MarketModel& model, const ExchangeSpace& exchange,
                            const RandomVector& claim, const MeasureVector& measure)
{
    validate_random_vector(model, claim, "claim");
    const std::size_t N = model.num_agents();
    const std::size_t K = model.num_atoms();
    if (measure.per_agent.size() != N)
        throw MeasureNotCollectiveMartingale("measure vector must have one measure per agent");
    for (std::size_t i = 0; i < N; ++i)
    {
        if (measure.per_agent[i].size() != K)
            throw MeasureNotCollectiveMartingale("measure for agent " + model.agents[i].name +
                                                 " has wrong width");
        Rational mass = 0;
        for (const Rational& q : measure.per_agent[i])
        {
            if (q <= 0)
                throw MeasureNotCollectiveMartingale("measure for agent " + model.agents[i].name +
                                                     " is not full-support");
            mass += q;
        }
        if (mass != 1)
            throw MeasureNotCollectiveMartingale("measure for agent " + model.agents[i].name +
                                                 " has mass " + to_string(mass));
    }
    // Martingale property per agent, checked blockwise and exactly.
    for (std::size_t i = 0; i < N; ++i)
    {
        const Polytope poly = agent_mm_polytope(model, i);
        for (std::size_t r = 0; r < poly.eq_rhs.size(); ++r)
            if (dot(poly.eq_coeffs.row(r), measure.per_agent[i]) != poly.eq_rhs[r])
                throw MeasureNotCollectiveMartingale("measure for agent " + model.agents[i].name +
                                                     " fails a martingale constraint");
    }
    for (std::size_t m = 0; m < exchange.generators.size(); ++m)
    {
        Rational polar = 0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t a = 0; a < K; ++a)
                polar += measure.per_agent[i][a] * exchange.generators[m].components[i][a];
        if (polar != 0)
            throw MeasureNotCollectiveMartingale("measure violates the polar constraint of "
                                                 "generator " + std::to_string(m + 1));
    }

    MarketModel out = model;
    for (std::size_t i = 0; i < N; ++i)
    {
        std::string name = "f[" + model.agents[i].name + "]";
        auto taken = [&](const std::string& candidate)
        {
            for (const PriceProcess& asset : out.assets)
                if (asset.name == candidate)
                    return true;
            return false;
        };
        while (taken(name))
            name += "'";

        PriceProcess proc;
        proc.name = name;
        proc.prices.assign(static_cast<std::size_t>(model.horizon) + 1,
                           RatVec(K, Rational(0)));
        for (int t = 0; t <= model.horizon; ++t)
        {
            const Partition& level = model.agents[i].filtration.levels[static_cast<std::size_t>(t)];
            for (const auto& block : level.blocks)
            {
                Rational mass = 0;
                Rational value = 0;
                for (const int atom : block)
                {
                    const std::size_t a = static_cast<std::size_t>(atom);
                    mass += measure.per_agent[i][a];
                    value += measure.per_agent[i][a] * claim.components[i][a];
                }
                const Rational price = value / mass;
                for (const int atom : block)
                    proc.prices[static_cast<std::size_t>(t)][static_cast<std::size_t>(atom)] =
                        price;
            }
        }
        out.agents[i].assets.push_back(static_cast<int>(out.assets.size()));
        out.assets.push_back(std::move(proc));
    }
    validate_model(out);
    return out;
}

}   // namespace colmkt
