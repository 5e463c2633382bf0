#include "colmkt/lp.hpp"

#include <cassert>
#include <cstddef>
#include <limits>

namespace colmkt
{

void LinearProgram::add_eq(const RatVec& row, const Rational& rhs)
{
    if (row.size() != num_vars)
        throw DimensionMismatch("add_eq: row width " + std::to_string(row.size()) +
                                " != num_vars " + std::to_string(num_vars));
    eq_coeffs.append_row(row);
    eq_rhs.push_back(rhs);
}

void LinearProgram::add_le(const RatVec& row, const Rational& rhs)
{
    if (row.size() != num_vars)
        throw DimensionMismatch("add_le: row width " + std::to_string(row.size()) +
                                " != num_vars " + std::to_string(num_vars));
    le_coeffs.append_row(row);
    le_rhs.push_back(rhs);
}

bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert)
{
    const std::size_t me = lp.eq_rhs.size();
    const std::size_t mi = lp.le_rhs.size();
    if (cert.eq_multipliers.size() != me || cert.le_multipliers.size() != mi ||
        cert.bound_multipliers.size() != lp.num_vars)
        return false;
    for (const Rational& v : cert.le_multipliers)
        if (v < 0)
            return false;
    Rational rhs_combo = 0;
    for (std::size_t i = 0; i < me; ++i)
        rhs_combo += cert.eq_multipliers[i] * lp.eq_rhs[i];
    for (std::size_t i = 0; i < mi; ++i)
        rhs_combo += cert.le_multipliers[i] * lp.le_rhs[i];
    for (std::size_t k = 0; k < lp.num_vars; ++k)
    {
        const Rational& w = cert.bound_multipliers[k];
        if (w < 0)
            return false;
        if (!lp.lower_bounds[k].has_value())
        {
            if (w != 0)
                return false;
        }
        else
        {
            rhs_combo -= w * *lp.lower_bounds[k];
        }
        Rational combo = 0;
        for (std::size_t i = 0; i < me; ++i)
            combo += cert.eq_multipliers[i] * lp.eq_coeffs.at(i, k);
        for (std::size_t i = 0; i < mi; ++i)
            combo += cert.le_multipliers[i] * lp.le_coeffs.at(i, k);
        if (combo - w != 0)
            return false;
    }
    return rhs_combo < 0;
}

namespace
{

/**
 * Dense simplex tableau for  min cᵀz  s.t.  A z = b, z >= 0, b >= 0,
 * with one artificial column per row forming the initial basis.
 */
struct Tableau
{
    std::size_t m = 0;            // rows
    std::size_t n_struct = 0;     // structural columns
    std::vector<RatVec> rows;     // m rows of n_struct + m + 1 entries (rhs last)
    RatVec redcost;               // n_struct + m entries
    Rational objective = 0;       // current objective value (negated convention-free)
    std::vector<std::size_t> basis;
    std::vector<bool> allowed;    // columns eligible to enter

    std::size_t width() const { return n_struct + m; }

    void pivot(std::size_t prow, std::size_t pcol)
    {
        RatVec& pr = rows[prow];
        const Rational pv = pr[pcol];
        for (Rational& x : pr)
            x /= pv;
        for (std::size_t i = 0; i < m; ++i)
        {
            if (i == prow || rows[i][pcol] == 0)
                continue;
            const Rational f = rows[i][pcol];
            for (std::size_t j = 0; j <= width(); ++j)
                if (pr[j] != 0)
                    rows[i][j] -= f * pr[j];
        }
        if (redcost[pcol] != 0)
        {
            const Rational f = redcost[pcol];
            for (std::size_t j = 0; j < width(); ++j)
                if (pr[j] != 0)
                    redcost[j] -= f * pr[j];
            objective += f * pr[width()];   // entering at level θ moves the value by redcost·θ
        }
        basis[prow] = pcol;
    }

    /** Returns true on reaching optimality, false when unbounded (improving
     *  column with no blocking row); the offending column is reported. */
    bool run_bland(std::size_t& unbounded_col)
    {
        for (;;)
        {
            std::size_t enter = width();
            for (std::size_t j = 0; j < width(); ++j)
            {
                if (allowed[j] && redcost[j] < 0)
                {
                    enter = j;
                    break;
                }
            }
            if (enter == width())
                return true;

            std::size_t leave = m;
            Rational best_ratio = 0;
            for (std::size_t i = 0; i < m; ++i)
            {
                if (rows[i][enter] <= 0)
                    continue;
                const Rational ratio = rows[i][width()] / rows[i][enter];
                if (leave == m || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave]))
                {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m)
            {
                unbounded_col = enter;
                return false;
            }
            pivot(leave, enter);
        }
    }

    void set_costs(const RatVec& cost)   // length width(); rebuilds reduced costs
    {
        redcost = cost;
        objective = 0;
        for (std::size_t i = 0; i < m; ++i)
        {
            const Rational cb = cost[basis[i]];
            if (cb == 0)
                continue;
            for (std::size_t j = 0; j < width(); ++j)
                if (rows[i][j] != 0)
                    redcost[j] -= cb * rows[i][j];
            objective += cb * rows[i][width()];
        }
    }
};

/** Column layout of the standard form: per original variable either one
 *  shifted column (lower bound) or a +/- pair (free), then slack columns. */
struct StandardForm
{
    std::size_t n_std = 0;
    std::vector<std::size_t> var_col;     // first column of variable k
    std::vector<bool> var_free;
    std::vector<std::size_t> slack_col;   // per <= row
};

}   // namespace

LPResult solve_lp(const LinearProgram& lp)
{
    const std::size_t me = lp.eq_rhs.size();
    const std::size_t mi = lp.le_rhs.size();
    const std::size_t m = me + mi;
    if (lp.objective.size() != lp.num_vars || lp.lower_bounds.size() != lp.num_vars)
        throw DimensionMismatch("solve_lp: objective/bounds width mismatch");

    StandardForm sf;
    sf.var_col.resize(lp.num_vars);
    sf.var_free.resize(lp.num_vars);
    for (std::size_t k = 0; k < lp.num_vars; ++k)
    {
        sf.var_col[k] = sf.n_std;
        sf.var_free[k] = !lp.lower_bounds[k].has_value();
        sf.n_std += sf.var_free[k] ? 2 : 1;
    }
    sf.slack_col.resize(mi);
    for (std::size_t i = 0; i < mi; ++i)
    {
        sf.slack_col[i] = sf.n_std;
        ++sf.n_std;
    }

    // Assemble rows (equalities first, then <= rows with slack), shifting
    // bounded variables to zero and flipping rows to make the rhs nonnegative.
    Tableau tab;
    tab.m = m;
    tab.n_struct = sf.n_std;
    tab.rows.assign(m, RatVec(sf.n_std + m + 1, Rational(0)));
    tab.basis.resize(m);
    tab.allowed.assign(sf.n_std + m, true);
    std::vector<int> flip(m, 1);

    auto fill_row = [&](std::size_t row, const RatMat& coeffs, std::size_t src,
                        const Rational& rhs)
    {
        Rational shifted = rhs;
        for (std::size_t k = 0; k < lp.num_vars; ++k)
        {
            const Rational& c = coeffs.at(src, k);
            if (c == 0)
                continue;
            tab.rows[row][sf.var_col[k]] += c;
            if (sf.var_free[k])
                tab.rows[row][sf.var_col[k] + 1] -= c;
            else
                shifted -= c * *lp.lower_bounds[k];
        }
        tab.rows[row][sf.n_std + m] = shifted;
    };

    for (std::size_t i = 0; i < me; ++i)
        fill_row(i, lp.eq_coeffs, i, lp.eq_rhs[i]);
    for (std::size_t i = 0; i < mi; ++i)
    {
        fill_row(me + i, lp.le_coeffs, i, lp.le_rhs[i]);
        tab.rows[me + i][sf.slack_col[i]] = 1;
    }
    for (std::size_t i = 0; i < m; ++i)
    {
        if (tab.rows[i][sf.n_std + m] < 0)
        {
            flip[i] = -1;
            for (Rational& x : tab.rows[i])
                x = -x;
        }
        tab.rows[i][sf.n_std + i] = 1;   // artificial
        tab.basis[i] = sf.n_std + i;
    }

    // Phase 1: drive the artificials to zero.
    RatVec phase1_cost(sf.n_std + m, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        phase1_cost[sf.n_std + i] = 1;
    tab.set_costs(phase1_cost);
    {
        std::size_t dummy = 0;
        const bool ok = tab.run_bland(dummy);
        assert(ok);   // phase-1 objective is bounded below by zero
        (void)ok;
    }

    LPResult result;
    if (tab.objective > 0)
    {
        // Infeasible.  The phase-1 dual prices y_i = 1 - redcost(artificial_i)
        // fold back (through the row flips) into an exact Farkas certificate.
        FarkasCertificate cert;
        cert.eq_multipliers.assign(me, Rational(0));
        cert.le_multipliers.assign(mi, Rational(0));
        cert.bound_multipliers.assign(lp.num_vars, Rational(0));
        RatVec y(m);
        for (std::size_t i = 0; i < m; ++i)
            y[i] = (Rational(1) - tab.redcost[sf.n_std + i]) * flip[i];
        for (std::size_t i = 0; i < me; ++i)
            cert.eq_multipliers[i] = -y[i];
        for (std::size_t i = 0; i < mi; ++i)
            cert.le_multipliers[i] = -y[me + i];
        for (std::size_t k = 0; k < lp.num_vars; ++k)
        {
            if (sf.var_free[k])
                continue;
            Rational combo = 0;
            for (std::size_t i = 0; i < me; ++i)
                combo += cert.eq_multipliers[i] * lp.eq_coeffs.at(i, k);
            for (std::size_t i = 0; i < mi; ++i)
                combo += cert.le_multipliers[i] * lp.le_coeffs.at(i, k);
            cert.bound_multipliers[k] = combo;
        }
        if (!verify_farkas(lp, cert))
            throw InternalInconsistency("solve_lp: phase-1 Farkas certificate failed verification");
        result.status = LPStatus::Infeasible;
        result.farkas = std::move(cert);
        return result;
    }

    // Pivot any degenerate artificial out of the basis; a row where no
    // structural column can enter is redundant and is blanked instead.
    for (std::size_t i = 0; i < m; ++i)
    {
        if (tab.basis[i] < sf.n_std)
            continue;
        std::size_t pcol = sf.n_std;
        for (std::size_t j = 0; j < sf.n_std; ++j)
        {
            if (tab.rows[i][j] != 0)
            {
                pcol = j;
                break;
            }
        }
        if (pcol < sf.n_std)
            tab.pivot(i, pcol);
        else
            for (std::size_t j = 0; j <= tab.width(); ++j)
                tab.rows[i][j] = 0;   // redundant constraint, keep basis slot inert
    }
    for (std::size_t i = 0; i < m; ++i)
        tab.allowed[sf.n_std + i] = false;

    // Phase 2 with the real costs mapped onto the standard-form columns.
    RatVec phase2_cost(sf.n_std + m, Rational(0));
    for (std::size_t k = 0; k < lp.num_vars; ++k)
    {
        const Rational c = lp.maximize ? -lp.objective[k] : lp.objective[k];
        if (c == 0)
            continue;
        phase2_cost[sf.var_col[k]] += c;
        if (sf.var_free[k])
            phase2_cost[sf.var_col[k] + 1] -= c;
    }
    tab.set_costs(phase2_cost);

    std::size_t unbounded_col = 0;
    if (!tab.run_bland(unbounded_col))
    {
        // Improving ray: +1 on the entering column, minus the updated column
        // on the basic variables, zero elsewhere.
        RatVec zray(tab.width(), Rational(0));
        zray[unbounded_col] = 1;
        for (std::size_t i = 0; i < m; ++i)
            if (tab.basis[i] < sf.n_std)
                zray[tab.basis[i]] = -tab.rows[i][unbounded_col];
        result.status = LPStatus::Unbounded;
        result.ray.assign(lp.num_vars, Rational(0));
        for (std::size_t k = 0; k < lp.num_vars; ++k)
        {
            result.ray[k] = zray[sf.var_col[k]];
            if (sf.var_free[k])
                result.ray[k] -= zray[sf.var_col[k] + 1];
        }
        return result;
    }

    RatVec z(tab.width(), Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < tab.width())
            z[tab.basis[i]] = tab.rows[i][tab.width()];
    result.status = LPStatus::Optimal;
    result.primal.assign(lp.num_vars, Rational(0));
    for (std::size_t k = 0; k < lp.num_vars; ++k)
    {
        result.primal[k] = z[sf.var_col[k]];
        if (sf.var_free[k])
            result.primal[k] -= z[sf.var_col[k] + 1];
        else
            result.primal[k] += *lp.lower_bounds[k];
    }
    result.value = dot(lp.objective, result.primal);
    return result;
}

}   // namespace colmkt
