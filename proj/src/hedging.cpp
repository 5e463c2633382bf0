#include "colmkt/hedging.hpp"

#include "colmkt/lp.hpp"

#include <algorithm>
#include <string>

namespace colmkt
{

namespace
{

void guard_nca(const MarketModel& model, const ExchangeSpace& exchange, const std::string& op)
{
    if (!check_nca(model, exchange).holds)
        throw NcaViolated(op + ": the market admits a collective arbitrage for this "
                          "exchange space");
}

/** Flatten a random vector agent-major, matching collective polytope order. */
RatVec flatten(const RandomVector& rv)
{
    RatVec out;
    for (const RatVec& comp : rv.components)
        out.insert(out.end(), comp.begin(), comp.end());
    return out;
}

struct HedgeColumns
{
    std::vector<GainsBasis> bases;
    std::vector<std::size_t> lambda_base;   // per agent, relative to lambda block start
    std::size_t num_lambda = 0;
};

HedgeColumns gains_columns(const MarketModel& model)
{
    HedgeColumns cols;
    for (std::size_t i = 0; i < model.num_agents(); ++i)
    {
        cols.lambda_base.push_back(cols.num_lambda);
        cols.bases.push_back(gains_basis(model, i));
        cols.num_lambda += cols.bases.back().generators.size();
    }
    return cols;
}

/**
 * Core superhedging LP in the normalized form: variables
 * [a | lambda blocks | kept generator coefficients | gamma (N-1)], one >=
 * row per (agent, atom).  Returns price N*a and the exact certificate.
 */
PriceResult super_price_impl(const MarketModel& model, const ExchangeSpace& exchange,
                             const RandomVector& claim)
{
    const std::size_t N = model.num_agents();
    const std::size_t K = model.num_atoms();
    const ExchangeSpace reduced = reduce_exchange_space(model, exchange);

    // Track which original generators were kept so the reported coefficients
    // line up with the caller's generator list.
    std::vector<std::size_t> kept;
    {
        std::size_t cursor = 0;
        for (std::size_t m = 0; m < exchange.generators.size(); ++m)
        {
            if (cursor < reduced.generators.size() &&
                reduced.generators[cursor].components == exchange.generators[m].components)
            {
                kept.push_back(m);
                ++cursor;
            }
        }
    }

    const HedgeColumns cols = gains_columns(model);
    const std::size_t R = reduced.generators.size();
    const std::size_t num_gamma = N > 1 ? N - 1 : 0;
    LinearProgram lp(1 + cols.num_lambda + R + num_gamma);
    lp.objective[0] = 1;   // price = N * a

    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t a = 0; a < K; ++a)
        {
            RatVec row(lp.num_vars, Rational(0));
            row[0] = -1;
            for (std::size_t g = 0; g < cols.bases[i].generators.size(); ++g)
                row[1 + cols.lambda_base[i] + g] = -cols.bases[i].generators[g].values[a];
            for (std::size_t m = 0; m < R; ++m)
                row[1 + cols.num_lambda + m] = -reduced.generators[m].components[i][a];
            for (std::size_t d = 0; d < num_gamma; ++d)
            {
                if (i == d)
                    row[1 + cols.num_lambda + R + d] = -1;
                else if (i == N - 1)
                    row[1 + cols.num_lambda + R + d] = 1;
            }
            lp.add_le(row, -claim.components[i][a]);
        }

    const LPResult res = solve_lp(lp);
    if (res.status != LPStatus::Optimal)
        throw InternalInconsistency("super_price: pricing LP must be solvable under "
                                    "collective viability");

    PriceResult out;
    const Rational a_star = res.primal[0];
    out.price = Rational(static_cast<long>(N)) * a_star;
    HedgeCertificate& cert = out.certificate;
    cert.price = out.price;
    cert.transfer.assign(N, a_star);
    for (std::size_t i = 0; i < N; ++i)
    {
        RatVec lambda(res.primal.begin() +
                          static_cast<std::ptrdiff_t>(1 + cols.lambda_base[i]),
                      res.primal.begin() +
                          static_cast<std::ptrdiff_t>(1 + cols.lambda_base[i] +
                                                      cols.bases[i].generators.size()));
        cert.strategies.push_back(strategy_from_coefficients(model, i, lambda));
    }
    cert.generator_coefficients.assign(exchange.generators.size(), Rational(0));
    for (std::size_t m = 0; m < R; ++m)
        cert.generator_coefficients[kept[m]] = res.primal[1 + cols.num_lambda + m];
    cert.deterministic_transfer.assign(N, Rational(0));
    for (std::size_t d = 0; d < num_gamma; ++d)
    {
        cert.deterministic_transfer[d] = res.primal[1 + cols.num_lambda + R + d];
        cert.deterministic_transfer[N - 1] -= cert.deterministic_transfer[d];
    }

    cert.slack.components.assign(N, RatVec(K, Rational(0)));
    for (std::size_t i = 0; i < N; ++i)
    {
        const RatVec gains = gain_of_strategy(model, i, cert.strategies[i]);
        for (std::size_t a = 0; a < K; ++a)
        {
            Rational v = a_star + gains[a] + cert.deterministic_transfer[i] -
                         claim.components[i][a];
            for (std::size_t m = 0; m < exchange.generators.size(); ++m)
                if (cert.generator_coefficients[m] != 0)
                    v += cert.generator_coefficients[m] * exchange.generators[m].components[i][a];
            if (v < 0)
                throw InternalInconsistency("super_price: certificate slack is negative");
            cert.slack.components[i][a] = v;
        }
    }
    return out;
}

RandomVector negate(const RandomVector& rv)
{
    RandomVector out = rv;
    for (RatVec& comp : out.components)
        for (Rational& x : comp)
            x = -x;
    return out;
}

PriceResult sub_price_impl(const MarketModel& model, const ExchangeSpace& exchange,
                           const RandomVector& claim)
{
    PriceResult res = super_price_impl(model, exchange, negate(claim));
    res.price = -res.price;
    HedgeCertificate& cert = res.certificate;
    cert.price = res.price;
    for (Rational& m : cert.transfer)
        m = -m;
    for (std::size_t i = 0; i < cert.strategies.size(); ++i)
    {
        RatVec coeffs = strategy_to_coefficients(model, i, cert.strategies[i]);
        for (Rational& c : coeffs)
            c = -c;
        cert.strategies[i] = strategy_from_coefficients(model, i, coeffs);
    }
    for (Rational& c : cert.generator_coefficients)
        c = -c;
    for (Rational& c : cert.deterministic_transfer)
        c = -c;
    // slack (== mirrored hedge inequality's surplus) is unchanged by design
    return res;
}

ClassicalPriceResult classical_super_price_impl(const MarketModel& model, std::size_t agent,
                                                const RatVec& payoff)
{
    const GainsBasis basis = gains_basis(model, agent);
    const std::size_t K = model.num_atoms();
    LinearProgram lp(1 + basis.generators.size());
    lp.objective[0] = 1;
    for (std::size_t a = 0; a < K; ++a)
    {
        RatVec row(lp.num_vars, Rational(0));
        row[0] = -1;
        for (std::size_t g = 0; g < basis.generators.size(); ++g)
            row[1 + g] = -basis.generators[g].values[a];
        lp.add_le(row, -payoff[a]);
    }
    const LPResult res = solve_lp(lp);
    if (res.status != LPStatus::Optimal)
        throw InternalInconsistency("classical_super_price: LP must be solvable under "
                                    "the agent's viability");
    ClassicalPriceResult out;
    out.price = res.primal[0];
    out.strategy = strategy_from_coefficients(
        model, agent,
        RatVec(res.primal.begin() + 1, res.primal.end()));
    const RatVec gains = gain_of_strategy(model, agent, out.strategy);
    out.slack.assign(K, Rational(0));
    for (std::size_t a = 0; a < K; ++a)
    {
        out.slack[a] = out.price + gains[a] - payoff[a];
        if (out.slack[a] < 0)
            throw InternalInconsistency("classical_super_price: negative slack");
    }
    return out;
}

ReplicationOutcome try_replicate_impl(const MarketModel& model, const ExchangeSpace& exchange,
                                      const RandomVector& claim)
{
    const std::size_t N = model.num_agents();
    const std::size_t K = model.num_atoms();
    const HedgeColumns cols = gains_columns(model);
    const std::size_t R = exchange.generators.size();

    // Columns: N transfer entries, the agents' strategy coefficients, the
    // generator coefficients.  (Free deterministic transfers subsume the
    // zero-sum ones, so no separate block.)
    RatMat sys(N * K, N + cols.num_lambda + R);
    RatVec rhs;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t a = 0; a < K; ++a)
        {
            const std::size_t r = i * K + a;
            sys.at(r, i) = 1;
            for (std::size_t g = 0; g < cols.bases[i].generators.size(); ++g)
                sys.at(r, N + cols.lambda_base[i] + g) = cols.bases[i].generators[g].values[a];
            for (std::size_t m = 0; m < R; ++m)
                sys.at(r, N + cols.num_lambda + m) = exchange.generators[m].components[i][a];
            rhs.push_back(claim.components[i][a]);
        }

    const LinearSolveResult sol = solve_linear_system(sys, rhs);
    ReplicationOutcome out;
    if (!sol.feasible)
    {
        out.left_kernel = sol.left_kernel;
        return out;
    }
    HedgeCertificate cert;
    cert.transfer.assign(sol.particular.begin(),
                         sol.particular.begin() + static_cast<std::ptrdiff_t>(N));
    cert.price = vec_sum(cert.transfer);
    for (std::size_t i = 0; i < N; ++i)
        cert.strategies.push_back(strategy_from_coefficients(
            model, i,
            RatVec(sol.particular.begin() +
                       static_cast<std::ptrdiff_t>(N + cols.lambda_base[i]),
                   sol.particular.begin() +
                       static_cast<std::ptrdiff_t>(N + cols.lambda_base[i] +
                                                   cols.bases[i].generators.size()))));
    cert.generator_coefficients.assign(
        sol.particular.begin() + static_cast<std::ptrdiff_t>(N + cols.num_lambda),
        sol.particular.end());
    cert.deterministic_transfer.assign(N, Rational(0));
    cert.slack.components.assign(N, RatVec(K, Rational(0)));

    // The books must close exactly.
    for (std::size_t i = 0; i < N; ++i)
    {
        const RatVec gains = gain_of_strategy(model, i, cert.strategies[i]);
        for (std::size_t a = 0; a < K; ++a)
        {
            Rational v = cert.transfer[i] + gains[a] - claim.components[i][a];
            for (std::size_t m = 0; m < R; ++m)
                if (cert.generator_coefficients[m] != 0)
                    v += cert.generator_coefficients[m] * exchange.generators[m].components[i][a];
            if (v != 0)
                throw InternalInconsistency("try_replicate: certificate does not close");
        }
    }
    out.certificate = std::move(cert);
    return out;
}

}   // namespace

ExchangeSpace reduce_exchange_space(const MarketModel& model, const ExchangeSpace& exchange)
{
    const std::size_t N = model.num_agents();
    const std::size_t K = model.num_atoms();
    const HedgeColumns cols = gains_columns(model);
    const std::size_t num_gamma = N > 1 ? N - 1 : 0;

    ExchangeSpace reduced;
    reduced.include_deterministic = exchange.include_deterministic;
    for (const RandomVector& gen : exchange.generators)
    {
        RatMat sys(N * K, cols.num_lambda + num_gamma + reduced.generators.size());
        RatVec rhs;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t a = 0; a < K; ++a)
            {
                const std::size_t r = i * K + a;
                for (std::size_t g = 0; g < cols.bases[i].generators.size(); ++g)
                    sys.at(r, cols.lambda_base[i] + g) = cols.bases[i].generators[g].values[a];
                for (std::size_t d = 0; d < num_gamma; ++d)
                {
                    if (i == d)
                        sys.at(r, cols.num_lambda + d) = 1;
                    else if (i == N - 1)
                        sys.at(r, cols.num_lambda + d) = -1;
                }
                for (std::size_t m = 0; m < reduced.generators.size(); ++m)
                    sys.at(r, cols.num_lambda + num_gamma + m) =
                        reduced.generators[m].components[i][a];
                rhs.push_back(gen.components[i][a]);
            }
        if (!solve_linear_system(sys, rhs).feasible)
            reduced.generators.push_back(gen);
    }
    return reduced;
}

PriceResult super_price(const MarketModel& model, const ExchangeSpace& exchange,
                        const RandomVector& claim)
{
    validate_random_vector(model, claim, "claim");
    guard_nca(model, exchange, "super_price");
    return super_price_impl(model, exchange, claim);
}

PriceResult sub_price(const MarketModel& model, const ExchangeSpace& exchange,
                      const RandomVector& claim)
{
    validate_random_vector(model, claim, "claim");
    guard_nca(model, exchange, "sub_price");
    return sub_price_impl(model, exchange, claim);
}

Rational dual_super_price(const MarketModel& model, const ExchangeSpace& exchange,
                          const RandomVector& claim)
{
    validate_random_vector(model, claim, "claim");
    guard_nca(model, exchange, "dual_super_price");
    const Polytope poly = collective_mm_polytope(model, exchange);
    LinearProgram lp(poly.dim);
    lp.maximize = true;
    lp.objective = flatten(claim);
    for (std::size_t k = 0; k < poly.dim; ++k)
        lp.lower_bounds[k] = Rational(0);
    for (std::size_t r = 0; r < poly.eq_rhs.size(); ++r)
        lp.add_eq(poly.eq_coeffs.row(r), poly.eq_rhs[r]);
    const LPResult res = solve_lp(lp);
    if (res.status != LPStatus::Optimal)
        throw InternalInconsistency("dual_super_price: LP over a nonempty compact polytope "
                                    "must be solvable");
    return res.value;
}

ClassicalPriceResult classical_super_price(const MarketModel& model, std::size_t agent,
                                           const RatVec& payoff)
{
    if (agent >= model.num_agents())
        throw DimensionMismatch("classical_super_price: agent index out of range");
    if (payoff.size() != model.num_atoms())
        throw DimensionMismatch("classical_super_price: payoff width mismatch");
    if (!model.agents[agent]
             .filtration.levels[static_cast<std::size_t>(model.horizon)]
             .measures_values(payoff))
        throw EventNotMeasurable("classical_super_price: payoff is not measurable for agent " +
                                 model.agents[agent].name + " at the terminal time");
    if (!check_na_agent(model, agent).holds)
        throw NaViolated(static_cast<int>(agent),
                         "classical_super_price: agent " + model.agents[agent].name +
                             " has a classical arbitrage");
    return classical_super_price_impl(model, agent, payoff);
}

DecompositionReport decomposition_check(const MarketModel& model, const RandomVector& claim)
{
    validate_random_vector(model, claim, "claim");
    const ExchangeSpace deterministic_only;   // zero-sum constants only
    guard_nca(model, deterministic_only, "decomposition_check");

    DecompositionReport report;
    report.collective = super_price_impl(model, deterministic_only, claim).price;
    Rational total = 0;
    for (std::size_t i = 0; i < model.num_agents(); ++i)
    {
        report.per_agent.push_back(
            classical_super_price_impl(model, i, claim.components[i]).price);
        total += report.per_agent.back();
    }
    if (total != report.collective)
        throw DecompositionViolated("deterministic-transfer price " + to_string(report.collective) +
                                    " differs from the sum of classical prices " +
                                    to_string(total));
    return report;
}

ReplicationOutcome try_replicate(const MarketModel& model, const ExchangeSpace& exchange,
                                 const RandomVector& claim)
{
    validate_random_vector(model, claim, "claim");
    guard_nca(model, exchange, "try_replicate");
    return try_replicate_impl(model, exchange, claim);
}

HedgeCertificate replicate(const MarketModel& model, const ExchangeSpace& exchange,
                           const RandomVector& claim)
{
    ReplicationOutcome out = try_replicate(model, exchange, claim);
    if (!out.certificate)
    {
        std::string kernel = "[";
        for (std::size_t k = 0; k < out.left_kernel.size(); ++k)
        {
            if (k)
                kernel += ", ";
            kernel += to_string(out.left_kernel[k]);
        }
        kernel += "]";
        throw NotReplicable("claim lies outside transfers + gains + exchanges; "
                            "separating left-kernel functional " + kernel);
    }
    return std::move(*out.certificate);
}

PriceGap price_gap(const MarketModel& model, const ExchangeSpace& exchange,
                   const RandomVector& claim)
{
    validate_random_vector(model, claim, "claim");
    guard_nca(model, exchange, "price_gap");
    PriceGap gap;
    gap.upper = super_price_impl(model, exchange, claim).price;
    gap.lower = sub_price_impl(model, exchange, claim).price;
    gap.replicable = try_replicate_impl(model, exchange, claim).certificate.has_value();
    if (gap.replicable != (gap.lower == gap.upper))
        throw IffViolated("replicability must coincide with a zero price gap: gap [" +
                          to_string(gap.lower) + ", " + to_string(gap.upper) +
                          "], replicable=" + (gap.replicable ? "true" : "false"));
    return gap;
}

CompletenessReport completeness(const MarketModel& model, const ExchangeSpace& exchange)
{
    const NcaReport nca = check_nca(model, exchange);
    if (!nca.holds)
        throw NcaViolated("completeness: the market admits a collective arbitrage for this "
                          "exchange space");

    CompletenessReport report;
    {
        const Polytope poly = collective_mm_polytope(model, exchange);
        RatVec point;
        for (const RatVec& q : nca.measure->per_agent)
            point.insert(point.end(), q.begin(), q.end());
        report.singleton = is_singleton(poly, point);
    }

    std::vector<RandomVector> family;
    for (std::size_t j = 0; j < model.num_agents(); ++j)
    {
        const Partition& terminal =
            model.agents[j].filtration.levels[static_cast<std::size_t>(model.horizon)];
        for (const auto& block : terminal.blocks)
            family.push_back(indicator_claim(model, j, block));
    }
    for (const RandomVector& gen : exchange.generators)
        family.push_back(gen);
    report.family_size = family.size();

    report.family_replicable = true;
    report.family_prices_coincide = true;
    for (const RandomVector& claim : family)
    {
        if (!try_replicate_impl(model, exchange, claim).certificate.has_value())
            report.family_replicable = false;
        if (super_price_impl(model, exchange, claim).price !=
            sub_price_impl(model, exchange, claim).price)
            report.family_prices_coincide = false;
    }

    if (report.singleton != report.family_replicable ||
        report.singleton != report.family_prices_coincide)
        throw EquivalenceViolated(
            "completeness tests disagree: singleton=" +
            std::string(report.singleton ? "true" : "false") +
            ", family replicable=" + std::string(report.family_replicable ? "true" : "false") +
            ", prices coincide=" + std::string(report.family_prices_coincide ? "true" : "false"));
    report.complete = report.singleton;
    return report;
}

PriceSetResult price_set(const MarketModel& model, const ExchangeSpace& exchange,
                         const RandomVector& claim, int dim_limit)
{
    validate_random_vector(model, claim, "claim");
    guard_nca(model, exchange, "price_set");
    const Polytope poly = collective_mm_polytope(model, exchange);
    const RatVec objective = flatten(claim);

    auto bound = [&](bool maximize)
    {
        LinearProgram lp(poly.dim);
        lp.maximize = maximize;
        lp.objective = objective;
        for (std::size_t k = 0; k < poly.dim; ++k)
            lp.lower_bounds[k] = Rational(0);
        for (std::size_t r = 0; r < poly.eq_rhs.size(); ++r)
            lp.add_eq(poly.eq_coeffs.row(r), poly.eq_rhs[r]);
        const LPResult res = solve_lp(lp);
        if (res.status != LPStatus::Optimal)
            throw InternalInconsistency("price_set: bound LP must be solvable");
        return res.value;
    };

    PriceSetResult out;
    out.sum_upper = bound(true);
    out.sum_lower = bound(false);
    out.replicable = try_replicate_impl(model, exchange, claim).certificate.has_value();

    try
    {
        const std::vector<RatVec> polytope_vertices = enumerate_vertices(poly, dim_limit);
        const std::size_t N = model.num_agents();
        const std::size_t K = model.num_atoms();
        std::vector<RatVec> images;
        for (const RatVec& q : polytope_vertices)
        {
            RatVec tuple(N, Rational(0));
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t a = 0; a < K; ++a)
                    tuple[i] += q[i * K + a] * claim.components[i][a];
            images.push_back(std::move(tuple));
        }
        std::sort(images.begin(), images.end());
        images.erase(std::unique(images.begin(), images.end()), images.end());

        // Keep only the extreme points of the image set.
        for (std::size_t c = 0; c < images.size(); ++c)
        {
            LinearProgram lp(images.size() - 1);
            for (std::size_t k = 0; k < lp.num_vars; ++k)
                lp.lower_bounds[k] = Rational(0);
            for (std::size_t coord = 0; coord < N; ++coord)
            {
                RatVec row;
                for (std::size_t j = 0; j < images.size(); ++j)
                    if (j != c)
                        row.push_back(images[j][coord]);
                lp.add_eq(row, images[c][coord]);
            }
            lp.add_eq(RatVec(lp.num_vars, Rational(1)), Rational(1));
            if (solve_lp(lp).status == LPStatus::Infeasible)
                out.vertices.push_back(images[c]);
        }
        out.vertices_available = true;
    }
    catch (const DimensionLimitExceeded&)
    {
        out.vertices_available = false;
    }
    return out;
}

}   // namespace colmkt
