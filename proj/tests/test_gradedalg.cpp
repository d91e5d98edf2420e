#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cohring;
using testing_support::catalog_of;
using testing_support::parse;
using testing_support::shipped;

namespace {

// Power series coefficients of prod_i 1/(1 - t^{d_i}) through degree n.
std::vector<long long> free_series(const std::vector<int>& degrees, int n)
{
    std::vector<long long> c(n + 1, 0);
    c[0] = 1;
    for (int d : degrees)
        for (int k = d; k <= n; ++k)
            c[k] += c[k - d];
    return c;
}

Element random_element(const Algebra& a, int n, std::mt19937& rng)
{
    Element e;
    const std::size_t dim = a.dim(n);
    for (std::size_t k = 0; k < dim; ++k)
        add_term(e, a.standard_monomial(n, k).terms.begin()->first, rng() % a.prime(), a.prime());
    return e;
}

} // namespace

TEST(GradedAlgebra, PolynomialSeries)
{
    auto cat = catalog_of({"algebra P\nfield 2\ngen u2 deg 2\ngen v3 deg 3\ngen w3 deg 3\n"});
    auto a = cat.algebra("P");
    auto expect = free_series({2, 3, 3}, 20);
    auto got = a->poincare_series(20);
    for (int n = 0; n <= 20; ++n)
        EXPECT_EQ(static_cast<long long>(got[n]), expect[n]) << "degree " << n;
}

TEST(GradedAlgebra, D2SeriesIsLinear)
{
    auto dims = shipped().algebra("D2.mod2")->poincare_series(24);
    for (int n = 0; n <= 24; ++n)
        EXPECT_EQ(dims[n], static_cast<std::size_t>(n + 1));
}

TEST(GradedAlgebra, A4SeriesMatchesClosedForm)
{
    // (1 - t^6) / ((1 - t^2)(1 - t^3)^2): one relation in degree 6, regular sequence
    auto f = free_series({2, 3, 3}, 24);
    auto dims = shipped().algebra("A4.mod2")->poincare_series(24);
    for (int n = 0; n <= 24; ++n)
        EXPECT_EQ(static_cast<long long>(dims[n]), f[n] - (n >= 6 ? f[n - 6] : 0)) << "degree " << n;
}

TEST(GradedAlgebra, ExteriorGeneratorAtTwoSquaresToZero)
{
    auto cat = catalog_of({"algebra E\nfield 2\ngen x1 deg 1 ext\ngen y1 deg 1\n"});
    auto a = cat.algebra("E");
    EXPECT_TRUE(a->multiply(parse(*a, "x1"), parse(*a, "x1")).is_zero());
    auto dims = a->poincare_series(6);
    for (int n = 1; n <= 6; ++n)
        EXPECT_EQ(dims[n], 2u);
}

TEST(GradedAlgebra, OddDegreeClassesAnticommuteAtOddPrime)
{
    auto cat = catalog_of({"algebra E\nfield 3\ngen a1 deg 1 ext\ngen b1 deg 1 ext\ngen c2 deg 2\n"});
    auto a = cat.algebra("E");
    const Element x = parse(*a, "a1"), y = parse(*a, "b1"), z = parse(*a, "c2");
    EXPECT_EQ(a->multiply(y, x), negate(a->multiply(x, y), 3));
    EXPECT_EQ(a->multiply(z, x), a->multiply(x, z));
    EXPECT_TRUE(a->multiply(x, x).is_zero());
    EXPECT_EQ(a->format(a->multiply(y, x)), "2*a1*b1");
}

TEST(GradedAlgebra, RelationReducesToStandardForm)
{
    auto a = shipped().algebra("A4.mod2");
    const Element lhs = a->power(parse(*a, "u2"), 3);
    const Element rhs = parse(*a, "v3^2 + w3^2 + v3*w3");
    EXPECT_TRUE(a->equal_mod_relations(lhs, rhs));
    EXPECT_FALSE(a->equal_mod_relations(lhs, parse(*a, "v3^2")));
}

TEST(GradedAlgebra, NormalFormIsIdempotentAndLinear)
{
    std::mt19937 rng(17);
    auto a = shipped().algebra("AfZtDt.mod2");
    for (int n = 0; n <= 12; ++n) {
        for (const auto& m : a->monomials_of_degree(n)) {
            Element e;
            add_term(e, m, 1, 2);
            const Element nf = a->normal_form(e);
            EXPECT_EQ(a->normal_form(nf), nf);
            EXPECT_EQ(a->from_coordinates(n, a->coordinates(e, n)), nf);
        }
    }
}

TEST(GradedAlgebra, MultiplicationIsAssociativeAndGradedCommutative)
{
    std::mt19937 rng(23);
    for (const char* id : {"A4.mod2", "AfZtDt.mod2", "AfZtAf.mod2", "S3.mod3", "Gamma6.mod2"}) {
        auto a = shipped().algebra(id);
        const std::uint32_t p = a->prime();
        for (int t = 0; t < 25; ++t) {
            const int i = 1 + static_cast<int>(rng() % 5), j = 1 + static_cast<int>(rng() % 5),
                      k = 1 + static_cast<int>(rng() % 5);
            const Element x = random_element(*a, i, rng), y = random_element(*a, j, rng),
                          z = random_element(*a, k, rng);
            EXPECT_EQ(a->multiply(a->multiply(x, y), z), a->multiply(x, a->multiply(y, z))) << id;
            const Element yx = a->multiply(y, x);
            EXPECT_EQ(a->multiply(x, y), (i * j) % 2 ? negate(yx, p) : yx) << id;
            EXPECT_EQ(a->multiply(x, add(y, z, p)), add(a->multiply(x, y), a->multiply(x, z), p)) << id;
        }
    }
}

TEST(GradedAlgebra, ReducedDirectSum)
{
    auto cat = catalog_of({
        "algebra A\nfield 2\ngen x1 deg 1\n",
        "algebra B\nfield 2\ngen y2 deg 2\n",
        "algebra S\nfield 2\nrsum A B\n",
    });
    auto s = cat.algebra("S");
    auto da = cat.algebra("A")->poincare_series(10), db = cat.algebra("B")->poincare_series(10);
    auto ds = s->poincare_series(10);
    EXPECT_EQ(ds[0], 1u);
    for (int n = 1; n <= 10; ++n)
        EXPECT_EQ(ds[n], da[n] + db[n]);
    EXPECT_TRUE(s->multiply(parse(*s, "x1"), parse(*s, "y2")).is_zero());
    EXPECT_FALSE(s->multiply(parse(*s, "y2"), parse(*s, "y2")).is_zero());
}

TEST(GradedAlgebra, SuffixedSummandsKeepGeneratorsApart)
{
    auto cat = catalog_of({
        "algebra A\nfield 2\ngen x1 deg 1\n",
        "algebra S\nfield 2\nrsum A:a A:b\n",
    });
    auto s = cat.algebra("S");
    EXPECT_TRUE(s->presentation().index_of("x1a").has_value());
    EXPECT_TRUE(s->presentation().index_of("x1b").has_value());
    EXPECT_EQ(s->dim(3), 2u);
    EXPECT_TRUE(s->multiply(parse(*s, "x1a"), parse(*s, "x1b")).is_zero());
}

TEST(GradedAlgebra, IsolatedGeneratorOnlyAppearsAlone)
{
    auto cat = catalog_of({"algebra I\nfield 2\ngen x1 deg 1\nisolated s2 deg 2\n"});
    auto a = cat.algebra("I");
    auto dims = a->poincare_series(6);
    EXPECT_EQ(dims[2], 2u);
    EXPECT_EQ(dims[4], 1u);
    EXPECT_TRUE(a->multiply(parse(*a, "s2"), parse(*a, "x1")).is_zero());
    EXPECT_TRUE(a->multiply(parse(*a, "s2"), parse(*a, "s2")).is_zero());
    EXPECT_EQ(a->implicit_zero_products().size(), 2u);
}

TEST(GradedAlgebra, ElementFormatting)
{
    auto a = shipped().algebra("D2.mod2");
    EXPECT_EQ(a->format(parse(*a, "y1^2*x1 + x1^2*y1")), "x1^2*y1 + x1*y1^2");
    EXPECT_EQ(a->format(Element{}), "0");
    EXPECT_EQ(a->format(a->one()), "1");
}

TEST(GradedAlgebra, MixedPrimeSumIsRejected)
{
    auto cat = catalog_of({
        "algebra A\nfield 2\ngen x1 deg 1\n",
        "algebra B\nfield 3\ngen y2 deg 2\n",
        "algebra S\nfield 2\nrsum A B\n",
    });
    EXPECT_THROW(cat.algebra("S"), Error);
}
