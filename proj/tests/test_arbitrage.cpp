#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "colmkt/arbitrage.hpp"
#include "colmkt/errors.hpp"
#include "colmkt/gains.hpp"
#include "colmkt/market.hpp"
#include "colmkt/market_json.hpp"
#include "colmkt/polytope.hpp"
#include "colmkt/rational.hpp"
#include "test_support.hpp"

using namespace colmkt;
using colmkt::test::rat;
using colmkt::test::rvec;

namespace
{

ExchangeSpace deterministic_only()
{
    return ExchangeSpace{};
}

ExchangeSpace embedded_exchanges(const MarketModel& m)
{
    return zero_sum_generators_from_partition(m, 1);
}

/** Recompute a witness outcome from its parts: gains plus realized exchange. */
RandomVector recombine_witness(const MarketModel& m, const ExchangeSpace& exchange,
                               const ArbitrageWitness& w)
{
    RandomVector out;
    out.components.resize(m.num_agents());
    for (std::size_t i = 0; i < m.num_agents(); ++i)
    {
        out.components[i] = gain_of_strategy(m, i, w.strategies[i]);
        for (std::size_t g = 0; g < exchange.generators.size(); ++g)
            for (std::size_t a = 0; a < m.num_atoms(); ++a)
                out.components[i][a] +=
                    w.generator_coefficients[g] * exchange.generators[g].components[i][a];
        for (std::size_t a = 0; a < m.num_atoms(); ++a)
            out.components[i][a] += w.deterministic_transfer[i];
    }
    return out;
}

bool nonneg_nonzero(const RandomVector& rv)
{
    bool some_positive = false;
    for (const RatVec& comp : rv.components)
        for (const Rational& v : comp)
        {
            if (v < 0)
                return false;
            if (v > 0)
                some_positive = true;
        }
    return some_positive;
}

}   // namespace

// ============================================================================
// Single-agent martingale measure polytopes
// ============================================================================

TEST_CASE("the recombining tree has a unique martingale measure")
{
    const MarketModel m = colmkt::test::binomial_two_period();
    const Polytope poly = agent_mm_polytope(m, 0);

    const std::vector<RatVec> verts = enumerate_vertices(poly);
    REQUIRE(verts.size() == 1);
    CHECK(verts[0] == rvec({"1/9", "2/9", "2/9", "4/9"}));

    const MaxTResult mt = max_t_interior(poly);
    REQUIRE(mt.feasible);
    CHECK(mt.t_star == rat("1/9"));
    CHECK(mt.point == verts[0]);
    CHECK(is_singleton(poly, mt.point));
}

TEST_CASE("agent polytopes of the branching market are segments with known endpoints")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();

    const std::vector<RatVec> left = enumerate_vertices(agent_mm_polytope(m, 0));
    REQUIRE(left.size() == 2);
    CHECK(left[0] == rvec({"0", "0", "1/4", "1/4", "1/6", "1/3"}));
    CHECK(left[1] == rvec({"1/4", "1/4", "0", "0", "1/6", "1/3"}));

    const std::vector<RatVec> right = enumerate_vertices(agent_mm_polytope(m, 1));
    REQUIRE(right.size() == 2);
    CHECK(right[0] == rvec({"1/8", "1/8", "0", "0", "1/2", "1/4"}));
    CHECK(right[1] == rvec({"1/8", "1/8", "3/8", "3/8", "0", "0"}));
}

TEST_CASE("the agents' measure polytopes can be disjoint while each is roomy")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();

    Polytope both = agent_mm_polytope(m, 0);
    const Polytope other = agent_mm_polytope(m, 1);
    for (std::size_t r = 0; r < other.eq_coeffs.rows; ++r)
        both.add_eq(other.eq_coeffs.row(r), other.eq_rhs[r]);

    const MaxTResult mt = max_t_interior(both);
    CHECK_FALSE(mt.feasible);

    for (std::size_t agent = 0; agent < 2; ++agent)
    {
        const NcaReport solo = check_na_agent(m, agent);
        CHECK(solo.holds);
        REQUIRE(solo.max_t.has_value());
        CHECK(*solo.max_t == rat("1/8"));
        REQUIRE(solo.measure.has_value());
        CHECK(full_support(*solo.measure));
        CHECK(contains(agent_mm_polytope(m, agent), solo.measure->per_agent[0]));
    }
}

TEST_CASE("a sure win is flagged with a verified trading witness")
{
    const MarketModel m = colmkt::test::sure_win_market();
    const NcaReport report = check_na_agent(m, 0);

    CHECK_FALSE(report.holds);
    CHECK(report.polytope_empty);
    CHECK_FALSE(report.measure.has_value());
    REQUIRE(report.witness.has_value());
    CHECK(nonneg_nonzero(report.witness->outcome));
    CHECK(report.witness->outcome.components[0] ==
          gain_of_strategy(m, 0, report.witness->strategies[0]));
}

// ============================================================================
// Collective viability
// ============================================================================

TEST_CASE("block exchanges restore viability in the branching market")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();
    const NcaReport report = check_nca(m, embedded_exchanges(m));

    CHECK(report.holds);
    CHECK_FALSE(report.polytope_empty);
    REQUIRE(report.max_t.has_value());
    CHECK(*report.max_t == rat("1/8"));

    REQUIRE(report.measure.has_value());
    CHECK(report.measure->per_agent[0] ==
          rvec({"1/8", "1/8", "1/8", "1/8", "1/6", "1/3"}));
    CHECK(report.measure->per_agent[1] ==
          rvec({"1/8", "1/8", "1/8", "1/8", "1/3", "1/6"}));

    const Polytope collective = collective_mm_polytope(m, embedded_exchanges(m));
    RatVec point = report.measure->per_agent[0];
    point.insert(point.end(), report.measure->per_agent[1].begin(),
                 report.measure->per_agent[1].end());
    CHECK(is_singleton(collective, point));
}

TEST_CASE("the pooled market keeps its arbitrage even though each agent is viable")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();
    const GlobalNaReport global = check_na_global(m);

    CHECK_FALSE(global.report.holds);
    CHECK(global.report.polytope_empty);
    REQUIRE(global.report.witness.has_value());
    CHECK(nonneg_nonzero(global.report.witness->outcome));
    CHECK(global.joined_market.num_agents() == 1);
    CHECK(global.joined_market.agents[0].assets.size() == 2);
    CHECK(global.report.witness->outcome.components[0] ==
          gain_of_strategy(global.joined_market, 0,
                           global.report.witness->strategies[0]));
}

TEST_CASE("the crossing market admits a collective arbitrage through exchanges")
{
    const MarketModel m = colmkt::test::load_two_agent_crossing();
    const ExchangeSpace ex = embedded_exchanges(m);
    const NcaReport report = check_nca(m, ex);

    CHECK_FALSE(report.holds);
    CHECK_FALSE(report.polytope_empty);   // closure is nonempty, interior is not
    REQUIRE(report.max_t.has_value());
    CHECK(*report.max_t == Rational(0));
    CHECK_FALSE(report.measure.has_value());

    REQUIRE(report.witness.has_value());
    const ArbitrageWitness& w = *report.witness;
    CHECK(nonneg_nonzero(w.outcome));
    CHECK(recombine_witness(m, ex, w).components == w.outcome.components);

    // Both agents collect the same payoff, concentrated on the first branch.
    REQUIRE(w.outcome.components.size() == 2);
    CHECK(w.outcome.components[0] == w.outcome.components[1]);
    CHECK(w.outcome.components[0][0] == w.outcome.components[0][1]);
    CHECK(w.outcome.components[0][0] > 0);
    for (std::size_t a = 2; a < 6; ++a)
        CHECK(w.outcome.components[0][a] == Rational(0));

    // Without the exchanges the same market is collectively fine.
    const NcaReport plain = check_nca(m, deterministic_only());
    CHECK(plain.holds);
    REQUIRE(plain.measure.has_value());
    CHECK(full_support(*plain.measure));
}

TEST_CASE("sub-interval views localize the crossing arbitrage to the full window")
{
    const MarketModel m = colmkt::test::load_two_agent_crossing();

    const MarketModel first = restrict_horizon(m, 0, 1);
    const NcaReport early = check_nca(first, zero_sum_generators_from_partition(first, 0));
    CHECK(early.holds);
    CHECK(*early.max_t == rat("1/8"));

    const MarketModel second = restrict_horizon(m, 1, 2);
    const NcaReport late = check_nca(second, zero_sum_generators_from_partition(second, 0));
    CHECK(late.holds);
    CHECK(*late.max_t == rat("1/6"));
    REQUIRE(late.measure.has_value());
    CHECK(late.measure->per_agent[0] == RatVec(6, rat("1/6")));
    CHECK(late.measure->per_agent[1] == RatVec(6, rat("1/6")));
}

TEST_CASE("viability relations hold and are audited")
{
    const MarketModel branch = colmkt::test::load_two_agent_three_branch();
    const ImplicationsAudit a1 = implications_audit(branch, embedded_exchanges(branch));
    CHECK_FALSE(a1.na_global);
    CHECK(a1.nca);
    CHECK(a1.na_agent == std::vector<bool>{true, true});
    CHECK(a1.generators_zero_sum);
    CHECK_FALSE(a1.deterministic_only);

    const MarketModel cross = colmkt::test::load_two_agent_crossing();
    const ImplicationsAudit a2 = implications_audit(cross, embedded_exchanges(cross));
    CHECK_FALSE(a2.na_global);
    CHECK_FALSE(a2.nca);
    CHECK(a2.na_agent == std::vector<bool>{true, true});

    const ImplicationsAudit a3 = implications_audit(cross, deterministic_only());
    CHECK(a3.deterministic_only);
    CHECK(a3.nca);   // equivalence leg: both agents are viable on their own
}

// ============================================================================
// Valuation sets
// ============================================================================

TEST_CASE("replicable claims have a one-point valuation set")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();
    const RandomVector f = indicator_claim(m, 0, {0, 1});

    const PriceSetResult ps = price_set(m, embedded_exchanges(m), f);
    CHECK(ps.replicable);
    CHECK(ps.sum_lower == rat("1/4"));
    CHECK(ps.sum_upper == rat("1/4"));
    REQUIRE(ps.vertices_available);
    REQUIRE(ps.vertices.size() == 1);
    CHECK(ps.vertices[0] == rvec({"1/4", "0"}));
}

TEST_CASE("restricting to deterministic transfers opens a genuine valuation interval")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();
    const RandomVector f = indicator_claim(m, 0, {0, 1});

    const PriceSetResult ps = price_set(m, deterministic_only(), f);
    CHECK_FALSE(ps.replicable);
    CHECK(ps.sum_lower == Rational(0));
    CHECK(ps.sum_upper == rat("1/2"));
    REQUIRE(ps.vertices_available);
    REQUIRE(ps.vertices.size() == 2);
    CHECK(ps.vertices[0] == rvec({"0", "0"}));
    CHECK(ps.vertices[1] == rvec({"1/2", "0"}));
}

TEST_CASE("valuation queries refuse non-viable inputs")
{
    const MarketModel m = colmkt::test::load_two_agent_crossing();
    const RandomVector f = indicator_claim(m, 0, {0, 1});
    CHECK_THROWS_AS(price_set(m, embedded_exchanges(m), f), NcaViolated);
}

// ============================================================================
// Market extension by priced claims
// ============================================================================

TEST_CASE("extending by a claim adds owner-only assets at conditional expectations")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();
    const ExchangeSpace ex = embedded_exchanges(m);
    const RandomVector f = indicator_claim(m, 0, {0, 1});

    const NcaReport report = check_nca(m, ex);
    REQUIRE(report.measure.has_value());

    const MarketModel bigger = extended_market(m, ex, f, *report.measure);
    CHECK_NOTHROW(validate_model(bigger));
    REQUIRE(bigger.num_assets() == 4);
    CHECK(bigger.agents[0].assets == std::vector<int>{0, 2});
    CHECK(bigger.agents[1].assets == std::vector<int>{1, 3});

    CHECK(bigger.assets[2].prices[0] == RatVec(6, rat("1/4")));
    CHECK(bigger.assets[2].prices[1] == rvec({"1", "1", "0", "0", "0", "0"}));
    CHECK(bigger.assets[2].prices[2] == f.components[0]);
    CHECK(bigger.assets[3].prices[2] == RatVec(6, Rational(0)));

    const NcaReport after = check_nca(bigger, ex);
    CHECK(after.holds);
    REQUIRE(after.measure.has_value());
    CHECK(after.measure->per_agent == report.measure->per_agent);

    MeasureVector uniform;
    uniform.per_agent = {RatVec(6, rat("1/6")), RatVec(6, rat("1/6"))};
    CHECK_THROWS_AS(extended_market(m, ex, f, uniform), MeasureNotCollectiveMartingale);
}
