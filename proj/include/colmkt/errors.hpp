#ifndef COLMKT_ERRORS_HPP
#define COLMKT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace colmkt
{

/**
 * Base class for every error the engine raises on bad input or violated
 * preconditions.  Internal-consistency failures derive from `std::logic_error`
 * instead (see `InternalInconsistency`): they indicate a bug, not bad input.
 */
class Error : public std::runtime_error
{
    public:
        explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Model-construction errors
// ---------------------------------------------------------------------------

class NonRefiningFiltration : public Error
{
    public:
        explicit NonRefiningFiltration(const std::string& msg) : Error(msg) {}
};

class NonAdaptedAsset : public Error
{
    public:
        NonAdaptedAsset(const std::string& agent, const std::string& asset,
                        int time, const std::string& block)
            : Error("asset " + asset + " is not adapted for agent " + agent +
                    ": non-constant on block " + block + " at time " +
                    std::to_string(time)),
              agent_name(agent), asset_name(asset), at_time(time), block_atoms(block)
        {
        }
        std::string agent_name;
        std::string asset_name;
        int at_time;
        std::string block_atoms;
};

class ZeroProbabilityAtom : public Error
{
    public:
        explicit ZeroProbabilityAtom(const std::string& msg) : Error(msg) {}
};

class MassNotOne : public Error
{
    public:
        explicit MassNotOne(const std::string& msg) : Error(msg) {}
};

class UnknownAssetIndex : public Error
{
    public:
        explicit UnknownAssetIndex(const std::string& msg) : Error(msg) {}
};

class EventNotMeasurable : public Error
{
    public:
        explicit EventNotMeasurable(const std::string& msg) : Error(msg) {}
};

class NoCommonPartition : public Error
{
    public:
        explicit NoCommonPartition(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error
{
    public:
        explicit ParseError(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Linear-algebra / LP / polytope errors
// ---------------------------------------------------------------------------

class DimensionMismatch : public Error
{
    public:
        explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class NotSquare : public Error
{
    public:
        explicit NotSquare(const std::string& msg) : Error(msg) {}
};

class DimensionLimitExceeded : public Error
{
    public:
        DimensionLimitExceeded(int dim, int limit)
            : Error("vertex enumeration refused: dimension " + std::to_string(dim) +
                    " exceeds configured limit " + std::to_string(limit)),
              dimension(dim), configured_limit(limit)
        {
        }
        int dimension;
        int configured_limit;
};

class PointNotStrictlyInterior : public Error
{
    public:
        explicit PointNotStrictlyInterior(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Strategy / bookkeeping errors
// ---------------------------------------------------------------------------

class BlockKeyMismatch : public Error
{
    public:
        explicit BlockKeyMismatch(const std::string& msg) : Error(msg) {}
};

class CsfViolation : public Error
{
    public:
        explicit CsfViolation(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Analysis preconditions
// ---------------------------------------------------------------------------

/** Raised when a pricing/extension call requires collective viability but the
 *  market admits a collective arbitrage. */
class NcaViolated : public Error
{
    public:
        explicit NcaViolated(const std::string& msg) : Error(msg) {}
};

/** Raised when a single-agent pricing call requires that agent's viability. */
class NaViolated : public Error
{
    public:
        NaViolated(int agent, const std::string& msg) : Error(msg), agent_index(agent) {}
        int agent_index;
};

class MeasureNotCollectiveMartingale : public Error
{
    public:
        explicit MeasureNotCollectiveMartingale(const std::string& msg) : Error(msg) {}
};

class NotReplicable : public Error
{
    public:
        explicit NotReplicable(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Cross-check failures: these indicate an engine bug, never bad input.
// ---------------------------------------------------------------------------

class InternalInconsistency : public std::logic_error
{
    public:
        explicit InternalInconsistency(const std::string& msg) : std::logic_error(msg) {}
};

class ImplicationViolated : public InternalInconsistency
{
    public:
        explicit ImplicationViolated(const std::string& msg) : InternalInconsistency(msg) {}
};

class DecompositionViolated : public InternalInconsistency
{
    public:
        explicit DecompositionViolated(const std::string& msg) : InternalInconsistency(msg) {}
};

class IffViolated : public InternalInconsistency
{
    public:
        explicit IffViolated(const std::string& msg) : InternalInconsistency(msg) {}
};

class EquivalenceViolated : public InternalInconsistency
{
    public:
        explicit EquivalenceViolated(const std::string& msg) : InternalInconsistency(msg) {}
};

}   // namespace colmkt

#endif   // COLMKT_ERRORS_HPP
