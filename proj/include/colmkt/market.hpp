#ifndef COLMKT_MARKET_HPP
#define COLMKT_MARKET_HPP

#include <string>
#include <vector>

#include "rational.hpp"

namespace colmkt
{

/**
 * Partition of the atom set {0, ..., K-1} in canonical form: each block holds
 * ascending atom indices and blocks are ordered by their smallest atom.
 */
struct Partition
{
    std::vector<std::vector<int>> blocks;

    std::size_t num_atoms() const;
    /** atom index -> block index lookup. */
    std::vector<int> lookup() const;
    /** True when every block of this partition lies inside one block of `coarser`. */
    bool refines(const Partition& coarser) const;
    /** True when `event` (ascending atom list) is a union of blocks. */
    bool measures_event(const std::vector<int>& event) const;
    /** True when `values` (one per atom) is constant on every block. */
    bool measures_values(const RatVec& values) const;

    void normalize();
};

/** One partition per time 0..T, refining as time advances. */
struct Filtration
{
    std::vector<Partition> levels;
};

/** Finite atom set with a strictly positive reference probability. */
struct SampleSpace
{
    std::vector<std::string> atoms;
    RatVec prob;

    std::size_t size() const { return atoms.size(); }
    /** Index of a label, -1 when absent. */
    int index_of(const std::string& label) const;
    std::string block_label(const std::vector<int>& block) const;
};

/** An agent: the asset indices (0-based) it may trade, and its information flow. */
struct AgentSpec
{
    std::string name;
    std::vector<int> assets;
    Filtration filtration;
};

struct PriceProcess
{
    std::string name;
    std::vector<RatVec> prices;   // [time][atom], time 0..T
};

/**
 * A segmented market in finite discrete time: one shared sample space and
 * horizon, price processes for all assets, and per-agent access/filtrations.
 * `non_trivial_initial` marks sub-interval views produced by
 * `restrict_horizon`, the only construction allowed a non-trivial time-0
 * partition.
 */
struct MarketModel
{
    SampleSpace space;
    int horizon = 0;
    std::vector<PriceProcess> assets;
    std::vector<AgentSpec> agents;
    bool non_trivial_initial = false;

    std::size_t num_atoms() const { return space.size(); }
    std::size_t num_agents() const { return agents.size(); }
    std::size_t num_assets() const { return assets.size(); }
};

/**
 * One value per (agent, atom); the payoff/transfer objects the engine prices.
 * Component i is required to be measurable w.r.t. agent i's terminal
 * partition wherever the engine consumes one of these.
 */
struct RandomVector
{
    std::vector<RatVec> components;   // [agent][atom]
};

/**
 * Linear space of admissible exchanges, spanned by `generators` together with
 * (always) the deterministic zero-sum transfers.
 */
struct ExchangeSpace
{
    std::vector<RandomVector> generators;
    bool include_deterministic = true;
};

/** Exchange vectors attached to times 1..T (index t-1), Y_t measurable at t. */
struct ExchangeSchedule
{
    std::vector<RandomVector> per_time;
};

// ---------------------------------------------------------------------------
// Construction and validation
// ---------------------------------------------------------------------------

/**
 * Check every structural invariant: positive mass-one probability
 * (ZeroProbabilityAtom / MassNotOne), asset access in range
 * (UnknownAssetIndex), refining filtrations with trivial start
 * (NonRefiningFiltration), and per-agent adaptedness of accessible assets
 * (NonAdaptedAsset).
 */
void validate_model(const MarketModel& model);

/** Component-wise measurability of a random vector at each agent's terminal
 *  partition; throws `EventNotMeasurable` naming the agent on failure. */
void validate_random_vector(const MarketModel& model, const RandomVector& rv,
                            const std::string& what);

/** Same check against time-t partitions, for schedule entries. */
void validate_schedule(const MarketModel& model, const ExchangeSchedule& schedule);

/**
 * Claim paying 1 on event A (ascending atom indices) in agent `agent`'s slot
 * and 0 elsewhere.  A must be measurable w.r.t. that agent's terminal
 * partition (EventNotMeasurable).
 */
RandomVector indicator_claim(const MarketModel& model, std::size_t agent,
                             const std::vector<int>& event);

/**
 * Finest partition of the atoms whose events every agent can verify at time
 * t (connected components of shared block membership).  Always exists; the
 * trivial partition is the worst case.
 */
Partition meet_partition(const MarketModel& model, int t);

/** Coarsest common refinement of all agents' time-t partitions. */
Partition join_partition(const MarketModel& model, int t);

/**
 * Exchange space spanned by the zero-sum transfers measurable on the time-t
 * common partition {A_1..A_M}: for each block A_n and each agent i < N, the
 * generator pays 1_{A_n} to agent i and -1_{A_n} to agent N.  M*(N-1)
 * generators; with the trivial partition these span exactly the
 * deterministic zero-sum transfers.  Throws `NoCommonPartition` when no
 * common partition exists (unreachable for well-formed models, kept for API
 * completeness).
 */
ExchangeSpace zero_sum_generators_from_partition(const MarketModel& model, int t);

/**
 * Sub-interval view on [s, t]: prices and filtrations sliced, time re-based
 * so F_s becomes the (possibly non-trivial) initial partition, probability
 * kept global.  Conditional per-block statements are recovered by
 * normalizing within initial blocks.
 */
MarketModel restrict_horizon(const MarketModel& model, int s, int t);

}   // namespace colmkt

#endif   // COLMKT_MARKET_HPP
