#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "colmkt/errors.hpp"
#include "colmkt/market.hpp"
#include "colmkt/market_json.hpp"
#include "test_support.hpp"

using namespace colmkt;
using colmkt::test::rat;
using colmkt::test::rvec;

namespace
{

/** Four atoms, two agents with transversal one-period information. */
MarketModel transversal_pair()
{
    MarketModel m;
    m.space.atoms = {"a", "b", "c", "d"};
    m.space.prob = rvec({"1/4", "1/4", "1/4", "1/4"});
    m.horizon = 1;

    PriceProcess x1;
    x1.name = "X1";
    x1.prices = {rvec({"1", "1", "1", "1"}), rvec({"2", "2", "0", "0"})};
    PriceProcess x2;
    x2.name = "X2";
    x2.prices = {rvec({"1", "1", "1", "1"}), rvec({"2", "0", "2", "0"})};
    m.assets = {x1, x2};

    AgentSpec a1;
    a1.name = "left";
    a1.assets = {0};
    a1.filtration.levels.resize(2);
    a1.filtration.levels[0].blocks = {{0, 1, 2, 3}};
    a1.filtration.levels[1].blocks = {{0, 1}, {2, 3}};

    AgentSpec a2;
    a2.name = "right";
    a2.assets = {1};
    a2.filtration.levels.resize(2);
    a2.filtration.levels[0].blocks = {{0, 1, 2, 3}};
    a2.filtration.levels[1].blocks = {{0, 2}, {1, 3}};

    m.agents = {a1, a2};
    return m;
}

}   // namespace

// ============================================================================
// Partitions
// ============================================================================

TEST_CASE("partitions normalize to canonical block order")
{
    Partition p;
    p.blocks = {{3, 1}, {2, 0}};
    p.normalize();
    REQUIRE(p.blocks.size() == 2);
    CHECK(p.blocks[0] == std::vector<int>{0, 2});
    CHECK(p.blocks[1] == std::vector<int>{1, 3});
    CHECK(p.num_atoms() == 4);
    CHECK(p.lookup() == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("refinement and measurability behave on hand partitions")
{
    Partition coarse;
    coarse.blocks = {{0, 1}, {2, 3}};
    Partition fine;
    fine.blocks = {{0}, {1}, {2, 3}};
    Partition cross;
    cross.blocks = {{0, 2}, {1, 3}};

    CHECK(fine.refines(coarse));
    CHECK_FALSE(coarse.refines(fine));
    CHECK_FALSE(cross.refines(coarse));
    CHECK(coarse.refines(coarse));

    CHECK(coarse.measures_event({0, 1}));
    CHECK(coarse.measures_event({0, 1, 2, 3}));
    CHECK_FALSE(coarse.measures_event({0, 2}));
    CHECK_FALSE(coarse.measures_event({1}));

    CHECK(coarse.measures_values(rvec({"5", "5", "-1", "-1"})));
    CHECK_FALSE(coarse.measures_values(rvec({"5", "4", "-1", "-1"})));
}

// ============================================================================
// Model validation
// ============================================================================

TEST_CASE("structural invariants are each enforced")
{
    const MarketModel good = transversal_pair();
    CHECK_NOTHROW(validate_model(good));

    SUBCASE("probability must sum to one")
    {
        MarketModel m = good;
        m.space.prob[0] = rat("1/2");
        CHECK_THROWS_AS(validate_model(m), MassNotOne);
    }
    SUBCASE("every atom needs positive mass")
    {
        MarketModel m = good;
        m.space.prob = rvec({"1/2", "1/2", "0", "0"});
        CHECK_THROWS_AS(validate_model(m), ZeroProbabilityAtom);
    }
    SUBCASE("filtrations must refine as time advances")
    {
        MarketModel m = good;
        m.agents[0].filtration.levels[1].blocks = {{0, 1, 2, 3}};
        m.agents[0].filtration.levels[0].blocks = {{0, 1}, {2, 3}};
        CHECK_THROWS_AS(validate_model(m), NonRefiningFiltration);
    }
    SUBCASE("the initial partition must be trivial unless the model is a sub-interval view")
    {
        MarketModel m = good;
        m.agents[0].filtration.levels[0].blocks = {{0, 1}, {2, 3}};
        CHECK_THROWS_AS(validate_model(m), NonRefiningFiltration);
        m.non_trivial_initial = true;
        CHECK_NOTHROW(validate_model(m));
    }
    SUBCASE("accessible assets must be adapted to the owner's information")
    {
        MarketModel m = good;
        // "right"'s terminal blocks {a,c},{b,d} cannot price asset X1.
        m.agents[1].assets = {0};
        CHECK_THROWS_AS(validate_model(m), NonAdaptedAsset);
    }
    SUBCASE("asset access indices must be in range")
    {
        MarketModel m = good;
        m.agents[0].assets = {5};
        CHECK_THROWS_AS(validate_model(m), UnknownAssetIndex);
    }
}

TEST_CASE("random vectors are checked component-wise for measurability")
{
    const MarketModel m = transversal_pair();
    RandomVector rv;
    rv.components = {rvec({"1", "1", "0", "0"}), rvec({"2", "0", "2", "0"})};
    CHECK_NOTHROW(validate_random_vector(m, rv, "payoff"));

    rv.components[1] = rvec({"2", "0", "0", "0"});
    CHECK_THROWS_AS(validate_random_vector(m, rv, "payoff"), EventNotMeasurable);
}

TEST_CASE("indicator claims land in the right slot and stay measurable")
{
    const MarketModel m = transversal_pair();
    const RandomVector f = indicator_claim(m, 1, {0, 2});
    CHECK(f.components[0] == rvec({"0", "0", "0", "0"}));
    CHECK(f.components[1] == rvec({"1", "0", "1", "0"}));
    CHECK_THROWS_AS(indicator_claim(m, 1, {0}), EventNotMeasurable);
}

// ============================================================================
// Common information: meet, join, zero-sum transfer spans
// ============================================================================

TEST_CASE("meet and join bracket the agents' information")
{
    const MarketModel m = transversal_pair();

    const Partition meet = meet_partition(m, 1);
    REQUIRE(meet.blocks.size() == 1);
    CHECK(meet.blocks[0] == std::vector<int>{0, 1, 2, 3});

    const Partition join = join_partition(m, 1);
    REQUIRE(join.blocks.size() == 4);

    const Partition meet0 = meet_partition(m, 0);
    CHECK(meet0.blocks.size() == 1);
}

TEST_CASE("zero-sum generators span the common-partition transfers")
{
    const MarketModel pair = transversal_pair();
    const ExchangeSpace trivial_span = zero_sum_generators_from_partition(pair, 1);
    REQUIRE(trivial_span.generators.size() == 1);   // one common block, two agents
    CHECK(trivial_span.generators[0].components[0] == rvec({"1", "1", "1", "1"}));
    CHECK(trivial_span.generators[0].components[1] == rvec({"-1", "-1", "-1", "-1"}));

    const MarketModel branch = colmkt::test::load_two_agent_three_branch();
    const ExchangeSpace span = zero_sum_generators_from_partition(branch, 1);
    REQUIRE(span.generators.size() == 3);   // three common blocks, two agents
    for (const RandomVector& y : span.generators)
    {
        REQUIRE(y.components.size() == 2);
        for (std::size_t a = 0; a < branch.num_atoms(); ++a)
            CHECK(y.components[0][a] + y.components[1][a] == Rational(0));
        const Partition& level = branch.agents[0].filtration.levels[1];
        CHECK(level.measures_values(y.components[0]));
    }
}

// ============================================================================
// JSON input and output
// ============================================================================

TEST_CASE("the bundled market files load with the documented shape")
{
    const MarketModel m = colmkt::test::load_two_agent_three_branch();
    CHECK(m.num_atoms() == 6);
    CHECK(m.horizon == 2);
    CHECK(m.num_assets() == 2);
    REQUIRE(m.num_agents() == 2);
    CHECK(m.agents[0].assets == std::vector<int>{0});
    CHECK(m.agents[1].assets == std::vector<int>{1});
    CHECK(m.assets[0].prices[0] == rvec({"8", "8", "8", "8", "8", "8"}));
    CHECK(m.assets[1].prices[2] == rvec({"20", "12", "12", "4", "6", "12"}));
    CHECK(vec_sum(m.space.prob) == Rational(1));
}

TEST_CASE("serialization round trips byte-identically")
{
    const MarketModel m = colmkt::test::load_two_agent_crossing();
    const nlohmann::ordered_json doc = market_to_json(m);
    const MarketModel back = parse_market(doc);
    CHECK(market_to_json(back) == doc);
}

TEST_CASE("malformed documents are rejected with parse errors")
{
    const MarketModel m = transversal_pair();
    nlohmann::ordered_json doc = market_to_json(m);

    SUBCASE("unknown atom in a probability map")
    {
        doc["P"]["zz"] = "1/4";
        CHECK_THROWS_AS(parse_market(doc), ParseError);
    }
    SUBCASE("missing atom in a probability map")
    {
        doc["P"].erase("a");
        CHECK_THROWS_AS(parse_market(doc), ParseError);
    }
    SUBCASE("decimal numbers are not rationals")
    {
        doc["P"]["a"] = "0.25";
        CHECK_THROWS_AS(parse_market(doc), ParseError);
    }
    SUBCASE("asset access beyond the asset list")
    {
        doc["agents"][0]["assets"] = {7};
        CHECK_THROWS_AS(parse_market(doc), UnknownAssetIndex);
    }
    SUBCASE("missing top-level key")
    {
        doc.erase("T");
        CHECK_THROWS_AS(parse_market(doc), ParseError);
    }
}

TEST_CASE("exchange specifications parse in every mode")
{
    const MarketModel branch = colmkt::test::load_two_agent_three_branch();

    SUBCASE("absent key means deterministic transfers only")
    {
        const ExchangeSpace ex = exchanges_from_json(branch, nlohmann::json::object());
        CHECK(ex.generators.empty());
        CHECK(ex.include_deterministic);
    }
    SUBCASE("partition mode reproduces the common-block span")
    {
        nlohmann::json doc;
        doc["exchanges"] = {{"mode", "zero_sum_partition"}, {"time", 1}};
        const ExchangeSpace ex = exchanges_from_json(branch, doc);
        CHECK(ex.generators.size() == 3);
    }
    SUBCASE("explicit generators are validated for measurability")
    {
        nlohmann::json paid, owed;
        for (int a = 0; a < 6; ++a)
        {
            const std::string atom = "w" + std::to_string(a + 1);
            paid[atom] = (a < 2) ? "1" : "0";
            owed[atom] = (a < 2) ? "-1" : "0";
        }
        nlohmann::json doc;
        doc["exchanges"]["mode"] = "generators";
        doc["exchanges"]["generators"] =
            nlohmann::json::array({nlohmann::json::array({paid, owed})});
        const ExchangeSpace ex = exchanges_from_json(branch, doc);
        REQUIRE(ex.generators.size() == 1);
        CHECK(ex.generators[0].components[0] == rvec({"1", "1", "0", "0", "0", "0"}));
    }
    SUBCASE("unknown mode is a parse error")
    {
        nlohmann::json doc;
        doc["exchanges"] = {{"mode", "swap_everything"}};
        CHECK_THROWS_AS(exchanges_from_json(branch, doc), ParseError);
    }
}

TEST_CASE("claims parse from component maps")
{
    const MarketModel m = transversal_pair();
    nlohmann::json left, right;
    for (const char* atom : {"a", "b", "c", "d"})
    {
        left[atom] = (atom[0] <= 'b') ? "1" : "0";
        right[atom] = "0";
    }
    nlohmann::json doc;
    doc["components"] = nlohmann::json::array({left, right});
    const RandomVector f = parse_claim(m, doc);
    CHECK(f.components[0] == rvec({"1", "1", "0", "0"}));

    doc["components"] = nlohmann::json::array({left});
    CHECK_THROWS_AS(parse_claim(m, doc), ParseError);
}

// ============================================================================
// Sub-interval views
// ============================================================================

TEST_CASE("restricting the horizon slices prices and re-bases time")
{
    const MarketModel m = colmkt::test::load_two_agent_crossing();

    const MarketModel first = restrict_horizon(m, 0, 1);
    CHECK(first.horizon == 1);
    CHECK_FALSE(first.non_trivial_initial);
    CHECK(first.assets[0].prices[0] == m.assets[0].prices[0]);
    CHECK(first.assets[0].prices[1] == m.assets[0].prices[1]);
    CHECK(first.agents[0].filtration.levels[1].blocks ==
          m.agents[0].filtration.levels[1].blocks);
    CHECK_NOTHROW(validate_model(first));

    const MarketModel second = restrict_horizon(m, 1, 2);
    CHECK(second.horizon == 1);
    CHECK(second.non_trivial_initial);
    REQUIRE(second.agents[0].filtration.levels[0].blocks.size() == 3);
    CHECK(second.assets[0].prices[0] == m.assets[0].prices[1]);
    CHECK(second.assets[0].prices[1] == m.assets[0].prices[2]);
    CHECK_NOTHROW(validate_model(second));

    CHECK_THROWS_AS(restrict_horizon(m, 1, 1), DimensionMismatch);
    CHECK_THROWS_AS(restrict_horizon(m, 2, 1), DimensionMismatch);
    CHECK_THROWS_AS(restrict_horizon(m, 0, 9), DimensionMismatch);
}
