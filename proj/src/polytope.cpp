#include "colmkt/polytope.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace colmkt
{

void Polytope::add_eq(const RatVec& row, const Rational& rhs)
{
    if (row.size() != dim)
        throw DimensionMismatch("Polytope::add_eq: row width " + std::to_string(row.size()) +
                                " != dim " + std::to_string(dim));
    eq_coeffs.append_row(row);
    eq_rhs.push_back(rhs);
}

void Polytope::add_ineq(const RatVec& row, const Rational& rhs)
{
    if (row.size() != dim)
        throw DimensionMismatch("Polytope::add_ineq: row width " + std::to_string(row.size()) +
                                " != dim " + std::to_string(dim));
    ineq_coeffs.append_row(row);
    ineq_rhs.push_back(rhs);
}

bool contains(const Polytope& p, const RatVec& x)
{
    if (x.size() != p.dim)
        return false;
    for (std::size_t r = 0; r < p.eq_rhs.size(); ++r)
        if (dot(p.eq_coeffs.row(r), x) != p.eq_rhs[r])
            return false;
    for (std::size_t k = 0; k < p.dim; ++k)
        if (p.nonneg[k] && x[k] < 0)
            return false;
    for (std::size_t r = 0; r < p.ineq_rhs.size(); ++r)
        if (dot(p.ineq_coeffs.row(r), x) > p.ineq_rhs[r])
            return false;
    return true;
}

int default_vertex_dimension_limit()
{
    if (const char* env = std::getenv("COLMKT_MAX_VERTEX_DIM"))
    {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return 24;
}

namespace
{

/** Incremental independence filter: rows reduced against the stored echelon
 *  set; a row that reduces to zero is dependent.  Backtracking truncates. */
struct EchelonStack
{
    std::vector<RatVec> rows;
    std::vector<std::size_t> pivots;

    bool reduce(RatVec& v) const
    {
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            if (v[pivots[i]] == 0)
                continue;
            const Rational f = v[pivots[i]] / rows[i][pivots[i]];
            for (std::size_t j = 0; j < v.size(); ++j)
                if (rows[i][j] != 0)
                    v[j] -= f * rows[i][j];
        }
        for (const Rational& x : v)
            if (x != 0)
                return true;
        return false;
    }

    bool try_push(RatVec v)
    {
        if (!reduce(v))
            return false;
        std::size_t piv = 0;
        while (v[piv] == 0)
            ++piv;
        rows.push_back(std::move(v));
        pivots.push_back(piv);
        return true;
    }

    void pop()
    {
        rows.pop_back();
        pivots.pop_back();
    }
};

}   // namespace

std::vector<RatVec> enumerate_vertices(const Polytope& p, int dim_limit)
{
    const int limit = dim_limit > 0 ? dim_limit : default_vertex_dimension_limit();
    if (static_cast<int>(p.dim) > limit)
        throw DimensionLimitExceeded(static_cast<int>(p.dim), limit);

    // Candidate tight rows beyond the equalities: every nonneg bound, then
    // every extra inequality, in fixed order.
    std::vector<RatVec> opt_rows;
    RatVec opt_rhs;
    for (std::size_t k = 0; k < p.dim; ++k)
    {
        if (!p.nonneg[k])
            continue;
        RatVec row(p.dim, Rational(0));
        row[k] = 1;
        opt_rows.push_back(std::move(row));
        opt_rhs.push_back(Rational(0));
    }
    for (std::size_t r = 0; r < p.ineq_rhs.size(); ++r)
    {
        opt_rows.push_back(p.ineq_coeffs.row(r));
        opt_rhs.push_back(p.ineq_rhs[r]);
    }

    EchelonStack echelon;
    std::size_t base_rank = 0;
    for (std::size_t r = 0; r < p.eq_rhs.size(); ++r)
        if (echelon.try_push(p.eq_coeffs.row(r)))
            ++base_rank;

    std::vector<RatVec> found;
    std::vector<std::size_t> chosen;

    auto solve_candidate = [&]()
    {
        RatMat sys;
        RatVec rhs;
        for (std::size_t r = 0; r < p.eq_rhs.size(); ++r)
        {
            sys.append_row(p.eq_coeffs.row(r));
            rhs.push_back(p.eq_rhs[r]);
        }
        for (const std::size_t idx : chosen)
        {
            sys.append_row(opt_rows[idx]);
            rhs.push_back(opt_rhs[idx]);
        }
        const LinearSolveResult sol = solve_linear_system(sys, rhs);
        if (sol.feasible && sol.rank == p.dim && contains(p, sol.particular))
            found.push_back(sol.particular);
    };

    auto recurse = [&](auto&& self, std::size_t next, std::size_t rank) -> void
    {
        if (rank == p.dim)
        {
            solve_candidate();
            return;
        }
        // Not enough rows left to complete the rank: prune.
        if (opt_rows.size() - next < p.dim - rank)
            return;
        for (std::size_t i = next; i < opt_rows.size(); ++i)
        {
            if (!echelon.try_push(opt_rows[i]))
                continue;
            chosen.push_back(i);
            self(self, i + 1, rank + 1);
            chosen.pop_back();
            echelon.pop();
        }
    };
    recurse(recurse, 0, base_rank);

    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

std::size_t affine_dimension(const Polytope& p, const RatVec& interior_point)
{
    if (interior_point.size() != p.dim)
        throw DimensionMismatch("affine_dimension: point width " +
                                std::to_string(interior_point.size()) + " != dim " +
                                std::to_string(p.dim));
    for (std::size_t r = 0; r < p.eq_rhs.size(); ++r)
        if (dot(p.eq_coeffs.row(r), interior_point) != p.eq_rhs[r])
            throw PointNotStrictlyInterior("affine_dimension: equality row " + std::to_string(r) +
                                           " not satisfied by the certifying point");
    for (std::size_t k = 0; k < p.dim; ++k)
        if (p.nonneg[k] && interior_point[k] <= 0)
            throw PointNotStrictlyInterior("affine_dimension: coordinate " + std::to_string(k) +
                                           " not strictly positive");
    for (std::size_t r = 0; r < p.ineq_rhs.size(); ++r)
        if (dot(p.ineq_coeffs.row(r), interior_point) >= p.ineq_rhs[r])
            throw PointNotStrictlyInterior("affine_dimension: inequality row " + std::to_string(r) +
                                           " not strict at the certifying point");
    return p.dim - rank(p.eq_coeffs);
}

}   // namespace colmkt
