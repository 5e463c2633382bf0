#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "colmkt/errors.hpp"
#include "colmkt/linalg.hpp"
#include "colmkt/lp.hpp"
#include "colmkt/polytope.hpp"
#include "colmkt/random_market.hpp"
#include "colmkt/rational.hpp"
#include "test_support.hpp"

using namespace colmkt;
using colmkt::test::rat;
using colmkt::test::rvec;

namespace
{

constexpr int kMatrixRounds = 25;
constexpr int kSystemRounds = 30;
constexpr int kLpRounds = 40;

RatMat random_matrix(Rng& rng, std::size_t rows, std::size_t cols)
{
    RatMat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.at(r, c) = rng.next_rational(-5, 5, 4);
    return m;
}

RatMat matmul(const RatMat& a, const RatMat& b)
{
    RatMat out(a.rows, b.cols);
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t c = 0; c < b.cols; ++c)
            for (std::size_t k = 0; k < a.cols; ++k)
                out.at(r, c) += a.at(r, k) * b.at(k, c);
    return out;
}

RatMat transpose(const RatMat& m)
{
    RatMat out(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            out.at(c, r) = m.at(r, c);
    return out;
}

bool satisfies(const LinearProgram& lp, const RatVec& x)
{
    for (std::size_t r = 0; r < lp.eq_coeffs.rows; ++r)
        if (dot(lp.eq_coeffs.row(r), x) != lp.eq_rhs[r])
            return false;
    for (std::size_t r = 0; r < lp.le_coeffs.rows; ++r)
        if (dot(lp.le_coeffs.row(r), x) > lp.le_rhs[r])
            return false;
    for (std::size_t k = 0; k < lp.num_vars; ++k)
        if (lp.lower_bounds[k] && x[k] < *lp.lower_bounds[k])
            return false;
    return true;
}

}   // namespace

// ============================================================================
// Rational parsing and formatting
// ============================================================================

TEST_CASE("rational text round trips through the canonical form")
{
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-6/8") == Rational(-3, 4));
    CHECK(parse_rational("2/4") == Rational(1, 2));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("+5/10") == Rational(1, 2));
    CHECK(to_string(Rational(-3, 4)) == "-3/4");
    CHECK(to_string(Rational(5)) == "5");
    CHECK(parse_rational(to_string(Rational(22, 7))) == Rational(22, 7));
}

TEST_CASE("rational parsing rejects malformed input")
{
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("a/b"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/"), ParseError);
    CHECK_THROWS_AS(parse_rational("/2"), ParseError);
    CHECK_THROWS_AS(parse_rational("1 / 2"), ParseError);
}

TEST_CASE("vector helpers are exact")
{
    const RatVec v = rvec({"1/3", "1/3", "1/3"});
    CHECK(vec_sum(v) == Rational(1));
    CHECK(dot(v, rvec({"3", "3", "3"})) == Rational(3));
    CHECK_THROWS_AS(dot(v, rvec({"1", "2"})), DimensionMismatch);
}

// ============================================================================
// Exact linear algebra
// ============================================================================

TEST_CASE("determinant matches hand computations")
{
    RatMat m2(2, 2);
    m2.at(0, 0) = rat("1/2");
    m2.at(0, 1) = rat("3");
    m2.at(1, 0) = rat("-2");
    m2.at(1, 1) = rat("4");
    CHECK(determinant(m2) == Rational(8));   // 1/2*4 - 3*(-2)

    RatMat m3(3, 3);
    const int vals[3][3] = {{2, 0, 1}, {1, 3, -1}, {0, 2, 4}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            m3.at(r, c) = Rational(vals[r][c]);
    CHECK(determinant(m3) == Rational(30));

    RatMat singular(2, 2);
    singular.at(0, 0) = Rational(1);
    singular.at(0, 1) = Rational(2);
    singular.at(1, 0) = Rational(2);
    singular.at(1, 1) = Rational(4);
    CHECK(determinant(singular) == Rational(0));

    CHECK_THROWS_AS(determinant(RatMat(2, 3)), NotSquare);
}

TEST_CASE("determinant is multiplicative on random matrices")
{
    Rng rng(0x5eedu);
    for (int round = 0; round < kMatrixRounds; ++round)
    {
        const RatMat a = random_matrix(rng, 4, 4);
        const RatMat b = random_matrix(rng, 4, 4);
        CHECK(determinant(matmul(a, b)) == determinant(a) * determinant(b));
    }
}

TEST_CASE("rank agrees with transposition and known deficiencies")
{
    RatMat m(3, 4);
    // row2 = row0 + row1, so rank 2
    const int vals[2][4] = {{1, 2, 0, -1}, {0, 1, 1, 1}};
    for (std::size_t c = 0; c < 4; ++c)
    {
        m.at(0, c) = Rational(vals[0][c]);
        m.at(1, c) = Rational(vals[1][c]);
        m.at(2, c) = m.at(0, c) + m.at(1, c);
    }
    CHECK(rank(m) == 2);
    CHECK(rank(transpose(m)) == 2);

    Rng rng(0xabcdu);
    for (int round = 0; round < kMatrixRounds; ++round)
    {
        const RatMat a = random_matrix(rng, 3, 5);
        CHECK(rank(a) == rank(transpose(a)));
    }
}

TEST_CASE("linear systems return verified solutions and nullspaces")
{
    //  x + y + z = 3,  y - z = 0  ->  one free column
    RatMat m(2, 3);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    m.at(0, 2) = 1;
    m.at(1, 1) = 1;
    m.at(1, 2) = -1;
    const RatVec rhs = rvec({"3", "0"});

    const LinearSolveResult res = solve_linear_system(m, rhs);
    REQUIRE(res.feasible);
    CHECK(res.rank == 2);
    CHECK(m.apply(res.particular) == rhs);
    REQUIRE(res.nullspace.size() == 1);
    const RatVec zero(2, Rational(0));
    CHECK(m.apply(res.nullspace[0]) == zero);
}

TEST_CASE("infeasible systems carry a coprime integer left kernel")
{
    // x + y = 1 and 2x + 2y = 3 cannot both hold
    RatMat m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    m.at(1, 0) = 2;
    m.at(1, 1) = 2;
    const RatVec rhs = rvec({"1", "3"});

    const LinearSolveResult res = solve_linear_system(m, rhs);
    REQUIRE_FALSE(res.feasible);
    REQUIRE(res.left_kernel.size() == 2);

    Rational against_rhs = 0;
    for (std::size_t c = 0; c < m.cols; ++c)
    {
        Rational along_col = 0;
        for (std::size_t r = 0; r < m.rows; ++r)
            along_col += res.left_kernel[r] * m.at(r, c);
        CHECK(along_col == Rational(0));
    }
    for (std::size_t r = 0; r < m.rows; ++r)
        against_rhs += res.left_kernel[r] * rhs[r];
    CHECK(against_rhs != Rational(0));

    Integer common = 0;
    for (const Rational& e : res.left_kernel)
    {
        CHECK(denominator(e) == 1);
        common = boost::multiprecision::gcd(common, Integer(numerator(e)));
    }
    CHECK(common == 1);
}

TEST_CASE("random systems are solved or refuted with exact certificates")
{
    Rng rng(0x11u);
    for (int round = 0; round < kSystemRounds; ++round)
    {
        const RatMat m = random_matrix(rng, 4, 6);

        // Consistent by construction: rhs in the column span.
        RatVec x(6);
        for (std::size_t c = 0; c < 6; ++c)
            x[c] = rng.next_rational(-3, 3, 3);
        const RatVec rhs = m.apply(x);
        const LinearSolveResult res = solve_linear_system(m, rhs);
        REQUIRE(res.feasible);
        CHECK(m.apply(res.particular) == rhs);
        const RatVec zero(4, Rational(0));
        for (const RatVec& n : res.nullspace)
            CHECK(m.apply(n) == zero);
        CHECK(res.nullspace.size() == 6 - res.rank);

        // Arbitrary rhs: accept either verdict, demand its certificate.
        RatVec free_rhs(4);
        for (std::size_t r = 0; r < 4; ++r)
            free_rhs[r] = rng.next_rational(-4, 4, 3);
        const LinearSolveResult res2 = solve_linear_system(m, free_rhs);
        if (res2.feasible)
        {
            CHECK(m.apply(res2.particular) == free_rhs);
        }
        else
        {
            Rational against = 0;
            for (std::size_t c = 0; c < m.cols; ++c)
            {
                Rational along = 0;
                for (std::size_t r = 0; r < m.rows; ++r)
                    along += res2.left_kernel[r] * m.at(r, c);
                CHECK(along == Rational(0));
            }
            for (std::size_t r = 0; r < m.rows; ++r)
                against += res2.left_kernel[r] * free_rhs[r];
            CHECK(against != Rational(0));
        }
    }
}

// ============================================================================
// Exact linear programming
// ============================================================================

TEST_CASE("simplex solves small programs exactly")
{
    LinearProgram lp(2);
    lp.maximize = true;
    lp.objective = rvec({"1", "1"});
    lp.lower_bounds[0] = Rational(0);
    lp.lower_bounds[1] = Rational(0);
    lp.add_le(rvec({"1", "1"}), Rational(1));

    const LPResult res = solve_lp(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.value == Rational(1));
    CHECK(satisfies(lp, res.primal));
    CHECK(dot(lp.objective, res.primal) == res.value);
}

TEST_CASE("simplex handles equality rows and fractional data")
{
    // min 2x + 3y  s.t.  x + y = 1,  x >= 1/4,  y >= 0
    LinearProgram lp(2);
    lp.objective = rvec({"2", "3"});
    lp.lower_bounds[0] = rat("1/4");
    lp.lower_bounds[1] = Rational(0);
    lp.add_eq(rvec({"1", "1"}), Rational(1));

    const LPResult res = solve_lp(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.value == Rational(2));   // all mass on x
    CHECK(res.primal == rvec({"1", "0"}));
}

TEST_CASE("infeasible programs come with a verified farkas certificate")
{
    LinearProgram lp(1);
    lp.lower_bounds[0] = Rational(0);
    lp.add_le(rvec({"1"}), Rational(-1));

    const LPResult res = solve_lp(lp);
    REQUIRE(res.status == LPStatus::Infeasible);
    REQUIRE(res.farkas.has_value());
    CHECK(verify_farkas(lp, *res.farkas));
}

TEST_CASE("unbounded programs come with an improving ray")
{
    LinearProgram lp(2);
    lp.maximize = true;
    lp.objective = rvec({"1", "0"});
    lp.lower_bounds[0] = Rational(0);
    lp.lower_bounds[1] = Rational(0);
    lp.add_le(rvec({"0", "1"}), Rational(5));

    const LPResult res = solve_lp(lp);
    REQUIRE(res.status == LPStatus::Unbounded);
    REQUIRE(res.ray.size() == 2);
    for (std::size_t r = 0; r < lp.le_coeffs.rows; ++r)
        CHECK(dot(lp.le_coeffs.row(r), res.ray) <= Rational(0));
    CHECK(res.ray[0] >= 0);
    CHECK(res.ray[1] >= 0);
    CHECK(dot(lp.objective, res.ray) > Rational(0));
}

TEST_CASE("degenerate vertices do not cycle")
{
    // Three redundant rows all tight at the optimum (0, 0, 1).
    LinearProgram lp(3);
    lp.maximize = true;
    lp.objective = rvec({"0", "0", "1"});
    for (std::size_t k = 0; k < 3; ++k)
        lp.lower_bounds[k] = Rational(0);
    lp.add_le(rvec({"1", "1", "1"}), Rational(1));
    lp.add_le(rvec({"1", "2", "1"}), Rational(1));
    lp.add_le(rvec({"2", "1", "1"}), Rational(1));

    const LPResult res = solve_lp(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.value == Rational(1));
    CHECK(res.primal == rvec({"0", "0", "1"}));
}

TEST_CASE("random bounded programs solve deterministically and exactly")
{
    Rng rng(0x90u);
    for (int round = 0; round < kLpRounds; ++round)
    {
        LinearProgram lp(3);
        lp.maximize = (rng.next_int(0, 1) == 1);
        for (std::size_t k = 0; k < 3; ++k)
        {
            lp.objective[k] = rng.next_rational(-4, 4, 3);
            lp.lower_bounds[k] = Rational(0);
            RatVec box(3, Rational(0));
            box[k] = Rational(1);
            lp.add_le(box, Rational(3));
        }
        for (int extra = rng.next_int(0, 2); extra > 0; --extra)
        {
            RatVec row(3);
            for (std::size_t k = 0; k < 3; ++k)
                row[k] = rng.next_rational(-2, 3, 2);
            // Right-hand side chosen so the origin stays feasible.
            lp.add_le(row, Rational(rng.next_int(0, 4)));
        }

        const LPResult res = solve_lp(lp);
        REQUIRE(res.status == LPStatus::Optimal);
        CHECK(satisfies(lp, res.primal));
        CHECK(dot(lp.objective, res.primal) == res.value);

        const LPResult again = solve_lp(lp);
        REQUIRE(again.status == LPStatus::Optimal);
        CHECK(again.value == res.value);
        CHECK(again.primal == res.primal);
    }
}

// ============================================================================
// Polytopes: membership, vertices, dimension
// ============================================================================

TEST_CASE("unit simplex enumerates its three vertices in order")
{
    Polytope p(3);
    p.nonneg.assign(3, true);
    p.add_eq(rvec({"1", "1", "1"}), Rational(1));

    const std::vector<RatVec> verts = enumerate_vertices(p);
    REQUIRE(verts.size() == 3);
    CHECK(verts[0] == rvec({"0", "0", "1"}));
    CHECK(verts[1] == rvec({"0", "1", "0"}));
    CHECK(verts[2] == rvec({"1", "0", "0"}));
    for (const RatVec& v : verts)
        CHECK(contains(p, v));

    CHECK(affine_dimension(p, rvec({"1/3", "1/3", "1/3"})) == 2);
    CHECK_THROWS_AS(affine_dimension(p, rvec({"1", "0", "0"})),
                    PointNotStrictlyInterior);
}

TEST_CASE("a cut square gains the two corner vertices")
{
    Polytope p(2);
    p.nonneg.assign(2, true);
    p.add_ineq(rvec({"1", "0"}), Rational(1));
    p.add_ineq(rvec({"0", "1"}), Rational(1));
    p.add_ineq(rvec({"1", "1"}), rat("3/2"));

    const std::vector<RatVec> verts = enumerate_vertices(p);
    REQUIRE(verts.size() == 5);
    CHECK(verts[0] == rvec({"0", "0"}));
    CHECK(verts[1] == rvec({"0", "1"}));
    CHECK(verts[2] == rvec({"1/2", "1"}));
    CHECK(verts[3] == rvec({"1", "0"}));
    CHECK(verts[4] == rvec({"1", "1/2"}));

    CHECK(contains(p, rvec({"1/2", "1/2"})));
    CHECK_FALSE(contains(p, rvec({"1", "1"})));
}

TEST_CASE("vertex enumeration refuses oversized dimensions")
{
    Polytope p(30);
    CHECK_THROWS_AS(enumerate_vertices(p), DimensionLimitExceeded);
}
