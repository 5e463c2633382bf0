#include "colmkt/linalg.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cassert>
#include <utility>

namespace colmkt
{

void RatMat::append_row(const RatVec& row)
{
    if (rows == 0 && cols == 0)
        cols = row.size();
    if (row.size() != cols)
        throw DimensionMismatch("append_row: expected " + std::to_string(cols) +
                                " columns, got " + std::to_string(row.size()));
    data.insert(data.end(), row.begin(), row.end());
    ++rows;
}

RatVec RatMat::row(std::size_t r) const
{
    return RatVec(data.begin() + static_cast<std::ptrdiff_t>(r * cols),
                  data.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
}

RatVec RatMat::apply(const RatVec& x) const
{
    if (x.size() != cols)
        throw DimensionMismatch("apply: matrix has " + std::to_string(cols) +
                                " columns, vector has " + std::to_string(x.size()));
    RatVec out(rows, Rational(0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (at(r, c) != 0)
                out[r] += at(r, c) * x[c];
    return out;
}

namespace
{

Integer exact_div(const Integer& a, const Integer& b)
{
    assert(b != 0 && a % b == 0);
    return a / b;
}

/**
 * Fraction-free (Bareiss) echelon state over the row-scaled integer image of
 * a rational matrix.  `w` holds the working rows (optionally augmented with a
 * right-hand side as the last column); `transform` tracks the row operations
 * applied, as integer combinations of the *scaled* original rows, so that
 * infeasibility certificates can be mapped back exactly.
 */
struct Echelon
{
    std::size_t m = 0;                 // rows
    std::size_t n = 0;                 // pivot-eligible columns (excludes rhs)
    bool augmented = false;
    std::vector<std::vector<Integer>> w;
    std::vector<std::vector<Integer>> transform;   // empty unless tracked
    std::vector<Integer> scale;                    // per original row, > 0
    std::vector<std::size_t> origin;               // working row -> original row
    std::vector<std::pair<std::size_t, std::size_t>> pivots;   // (row, col)
    int sign = 1;                                  // row-swap parity
    Integer last_pivot = 1;
};

Echelon eliminate(const RatMat& mat, const RatVec* rhs, bool track_transform)
{
    Echelon e;
    e.m = mat.rows;
    e.n = mat.cols;
    e.augmented = (rhs != nullptr);
    e.w.assign(e.m, std::vector<Integer>(e.n + (e.augmented ? 1 : 0), Integer(0)));
    e.scale.assign(e.m, Integer(1));
    e.origin.resize(e.m);
    for (std::size_t r = 0; r < e.m; ++r)
    {
        e.origin[r] = r;
        Integer lcm = 1;
        for (std::size_t c = 0; c < e.n; ++c)
            lcm = boost::multiprecision::lcm(lcm, Integer(denominator(mat.at(r, c))));
        if (e.augmented)
            lcm = boost::multiprecision::lcm(lcm, Integer(denominator((*rhs)[r])));
        e.scale[r] = lcm;
        for (std::size_t c = 0; c < e.n; ++c)
        {
            const Rational v = mat.at(r, c) * lcm;
            e.w[r][c] = Integer(numerator(v));
        }
        if (e.augmented)
        {
            const Rational v = (*rhs)[r] * lcm;
            e.w[r][e.n] = Integer(numerator(v));
        }
    }
    if (track_transform)
    {
        e.transform.assign(e.m, std::vector<Integer>(e.m, Integer(0)));
        for (std::size_t r = 0; r < e.m; ++r)
            e.transform[r][r] = 1;
    }

    Integer prev = 1;
    std::size_t next_row = 0;
    const std::size_t width = e.n + (e.augmented ? 1 : 0);
    for (std::size_t col = 0; col < e.n && next_row < e.m; ++col)
    {
        std::size_t piv = next_row;
        while (piv < e.m && e.w[piv][col] == 0)
            ++piv;
        if (piv == e.m)
            continue;
        if (piv != next_row)
        {
            std::swap(e.w[piv], e.w[next_row]);
            std::swap(e.origin[piv], e.origin[next_row]);
            if (track_transform)
                std::swap(e.transform[piv], e.transform[next_row]);
            e.sign = -e.sign;
        }
        const Integer pivot_val = e.w[next_row][col];
        for (std::size_t i = next_row + 1; i < e.m; ++i)
        {
            const Integer factor = e.w[i][col];
            for (std::size_t j = 0; j < width; ++j)
                e.w[i][j] = exact_div(pivot_val * e.w[i][j] - factor * e.w[next_row][j], prev);
            if (track_transform)
                for (std::size_t j = 0; j < e.m; ++j)
                    e.transform[i][j] =
                        exact_div(pivot_val * e.transform[i][j] - factor * e.transform[next_row][j], prev);
        }
        prev = pivot_val;
        e.pivots.emplace_back(next_row, col);
        ++next_row;
    }
    e.last_pivot = prev;
    return e;
}

}   // namespace

Rational determinant(const RatMat& m)
{
    if (m.rows != m.cols)
        throw NotSquare("determinant: matrix is " + std::to_string(m.rows) + "x" +
                        std::to_string(m.cols));
    if (m.rows == 0)
        return Rational(1);
    const Echelon e = eliminate(m, nullptr, false);
    if (e.pivots.size() < m.rows)
        return Rational(0);
    Rational det(e.last_pivot);
    for (std::size_t r = 0; r < m.rows; ++r)
        det /= Rational(e.scale[r]);
    return e.sign < 0 ? -det : det;
}

std::size_t rank(const RatMat& m)
{
    if (m.rows == 0 || m.cols == 0)
        return 0;
    return eliminate(m, nullptr, false).pivots.size();
}

LinearSolveResult solve_linear_system(const RatMat& m, const RatVec& rhs)
{
    if (rhs.size() != m.rows)
        throw DimensionMismatch("solve_linear_system: matrix has " + std::to_string(m.rows) +
                                " rows, rhs has " + std::to_string(rhs.size()));
    LinearSolveResult out;
    if (m.rows == 0)
    {
        out.feasible = true;
        out.rank = 0;
        out.particular.assign(m.cols, Rational(0));
        out.nullspace.reserve(m.cols);
        for (std::size_t c = 0; c < m.cols; ++c)
        {
            RatVec v(m.cols, Rational(0));
            v[c] = 1;
            out.nullspace.push_back(std::move(v));
        }
        return out;
    }

    const Echelon e = eliminate(m, &rhs, true);
    out.rank = e.pivots.size();

    // A row below the final rank has a zero coefficient part; a nonzero
    // right-hand side there is an exact proof of infeasibility, and the
    // tracked transform row recovers the combining multipliers.
    for (std::size_t r = out.rank; r < e.m; ++r)
    {
        if (e.w[r][e.n] == 0)
            continue;
        out.feasible = false;
        std::vector<Integer> kernel(e.m, Integer(0));
        Integer common = 0;
        for (std::size_t j = 0; j < e.m; ++j)
        {
            kernel[j] = e.transform[r][j] * e.scale[j];
            common = boost::multiprecision::gcd(common, kernel[j]);
        }
        out.left_kernel.assign(e.m, Rational(0));
        for (std::size_t j = 0; j < e.m; ++j)
            out.left_kernel[j] = Rational(kernel[j] / common);
        return out;
    }

    out.feasible = true;
    std::vector<bool> is_pivot_col(m.cols, false);
    for (const auto& [pr, pc] : e.pivots)
        is_pivot_col[pc] = true;

    auto back_substitute = [&](RatVec& x, const bool with_rhs)
    {
        for (std::size_t k = e.pivots.size(); k-- > 0;)
        {
            const auto [pr, pc] = e.pivots[k];
            Rational acc = with_rhs ? Rational(e.w[pr][e.n]) : Rational(0);
            for (std::size_t c = pc + 1; c < e.n; ++c)
                if (e.w[pr][c] != 0)
                    acc -= Rational(e.w[pr][c]) * x[c];
            x[pc] = acc / Rational(e.w[pr][pc]);
        }
    };

    out.particular.assign(m.cols, Rational(0));
    back_substitute(out.particular, true);

    for (std::size_t f = 0; f < m.cols; ++f)
    {
        if (is_pivot_col[f])
            continue;
        RatVec v(m.cols, Rational(0));
        v[f] = 1;
        back_substitute(v, false);
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

}   // namespace colmkt
