#ifndef COLMKT_TEST_SUPPORT_HPP
#define COLMKT_TEST_SUPPORT_HPP

#include <initializer_list>
#include <string>
#include <vector>

#include "colmkt/market.hpp"
#include "colmkt/market_json.hpp"
#include "colmkt/rational.hpp"

#ifndef COLMKT_DATA_DIR
#define COLMKT_DATA_DIR "data"
#endif

namespace colmkt::test
{

inline Rational rat(const std::string& text)
{
    return parse_rational(text);
}

inline RatVec rvec(std::initializer_list<std::string> entries)
{
    RatVec out;
    out.reserve(entries.size());
    for (const std::string& e : entries)
        out.push_back(parse_rational(e));
    return out;
}

inline std::string data_path(const std::string& name)
{
    return std::string(COLMKT_DATA_DIR) + "/" + name;
}

inline MarketModel load_two_agent_three_branch()
{
    return load_market_file(data_path("fig1.json"));
}

inline MarketModel load_two_agent_crossing()
{
    return load_market_file(data_path("fig2.json"));
}

/**
 * Two-period recombining single-agent market: one asset from 4, doubling or
 * halving each period on the binary tree {uu, ud, du, dd}.  The unique
 * martingale weights are 1/3 up, 2/3 down at every node.
 */
inline MarketModel binomial_two_period()
{
    MarketModel m;
    m.space.atoms = {"uu", "ud", "du", "dd"};
    m.space.prob = rvec({"1/4", "1/4", "1/4", "1/4"});
    m.horizon = 2;

    PriceProcess x;
    x.name = "S";
    x.prices = {rvec({"4", "4", "4", "4"}), rvec({"8", "8", "2", "2"}),
                rvec({"16", "4", "4", "1"})};
    m.assets.push_back(x);

    AgentSpec a;
    a.name = "solo";
    a.assets = {0};
    a.filtration.levels.resize(3);
    a.filtration.levels[0].blocks = {{0, 1, 2, 3}};
    a.filtration.levels[1].blocks = {{0, 1}, {2, 3}};
    a.filtration.levels[2].blocks = {{0}, {1}, {2}, {3}};
    m.agents.push_back(a);
    return m;
}

/** One-period, one-asset market with a sure win: price rises on every atom. */
inline MarketModel sure_win_market()
{
    MarketModel m;
    m.space.atoms = {"u", "d"};
    m.space.prob = rvec({"1/2", "1/2"});
    m.horizon = 1;

    PriceProcess x;
    x.name = "S";
    x.prices = {rvec({"1", "1"}), rvec({"2", "3"})};
    m.assets.push_back(x);

    AgentSpec a;
    a.name = "solo";
    a.assets = {0};
    a.filtration.levels.resize(2);
    a.filtration.levels[0].blocks = {{0, 1}};
    a.filtration.levels[1].blocks = {{0}, {1}};
    m.agents.push_back(a);
    return m;
}

}   // namespace colmkt::test

#endif   // COLMKT_TEST_SUPPORT_HPP
