#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cohring;
using testing_support::catalog_of;
using testing_support::parse;
using testing_support::shipped;

namespace {

Element random_element(const Algebra& a, int n, std::mt19937& rng)
{
    Element e;
    for (std::size_t k = 0; k < a.dim(n); ++k)
        e = add(e, scale(a.standard_monomial(n, k), rng() % a.prime(), a.prime()), a.prime());
    return e;
}

} // namespace

TEST(GradedHom, ShippedHomsPreserveRelations)
{
    for (const auto& id : shipped().ids(EntryKind::hom)) {
        auto rep = shipped().hom(id)->check();
        EXPECT_TRUE(rep.ok()) << id << ": " << (rep.ok() ? "" : rep.violations.front());
    }
}

TEST(GradedHom, IsMultiplicative)
{
    std::mt19937 rng(31);
    for (const char* id : {"res.A4.Z2.mod2", "res.S3.Z3.mod3", "res.D2.Z2.mod2"}) {
        auto h = shipped().hom(id);
        const Algebra& s = h->source();
        for (int t = 0; t < 20; ++t) {
            const Element x = random_element(s, 1 + static_cast<int>(rng() % 6), rng);
            const Element y = random_element(s, 1 + static_cast<int>(rng() % 6), rng);
            EXPECT_EQ(h->apply(s.multiply(x, y)), h->target().multiply(h->apply(x), h->apply(y))) << id;
        }
    }
}

TEST(GradedHom, RankNullity)
{
    auto h = shipped().hom("res.A4.Z2.mod2");
    auto rows = h->kernel_image_dims(16);
    for (int n = 0; n <= 16; ++n)
        EXPECT_EQ(rows[n].kernel + rows[n].image, h->source().dim(n));
    // A4 -> Z/2 is onto in even degrees: u2^k restricts to x^{2k}
    EXPECT_EQ(rows[4].image, 1u);
}

TEST(GradedHom, BrokenRelationIsReported)
{
    auto a4 = shipped().algebra("A4.mod2");
    auto z2 = shipped().algebra("Z2.mod2");
    // u2 -> x^2 but v3, w3 -> 0 sends u2^3 + ... to x^6
    GradedHom h(a4, z2, {parse(*z2, "x1^2"), Element{}, Element{}}, "bad");
    auto rep = h.check();
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations.front().find("relation not preserved"), std::string::npos);
}

TEST(GradedHom, DegreeMismatchIsReported)
{
    auto d2 = shipped().algebra("D2.mod2");
    GradedHom h(d2, d2, {parse(*d2, "x1^2"), parse(*d2, "y1")}, "bad");
    EXPECT_FALSE(h.check().ok());
}

TEST(GradedHom, ImplicitZeroProductsMustSurvive)
{
    auto cat = catalog_of({
        "algebra I\nfield 2\ngen x1 deg 1\nisolated s1 deg 1\n",
        "algebra P\nfield 2\ngen t1 deg 1\n",
    });
    auto i = cat.algebra("I");
    auto p = cat.algebra("P");
    GradedHom bad(i, p, {parse(*p, "t1"), parse(*p, "t1")}, "bad");
    EXPECT_FALSE(bad.check().ok());
    GradedHom good(i, p, {parse(*p, "t1"), Element{}}, "good");
    EXPECT_TRUE(good.check().ok());
}

TEST(GradedHom, CompositionAgreesWithSequentialApplication)
{
    auto d2 = shipped().algebra("D2.mod2");
    auto swap = GradedHom(d2, d2, {parse(*d2, "y1"), parse(*d2, "x1")}, "swap");
    auto res = shipped().hom("res.D2.Z2.mod2");
    auto both = res->compose_after(swap);
    const Element e = parse(*d2, "x1^2*y1 + y1^3");
    EXPECT_EQ(both.apply(e), res->apply(swap.apply(e)));
}

TEST(Derivation, SatisfiesLeibnizRule)
{
    std::mt19937 rng(41);
    for (const char* id : {"A4.sq1", "AfZtDt.sq1", "AfZtAf.sq1", "S3.beta.mod3", "Gamma6.sq1"}) {
        auto d = shipped().derivation(id);
        const Algebra& a = d->algebra();
        const std::uint32_t p = a.prime();
        for (int t = 0; t < 20; ++t) {
            const int i = 1 + static_cast<int>(rng() % 6), j = 1 + static_cast<int>(rng() % 6);
            const Element x = random_element(a, i, rng), y = random_element(a, j, rng);
            const Element lhs = d->extend(a.multiply(x, y));
            Element second = a.multiply(x, d->extend(y));
            if (i % 2)
                second = negate(second, p);
            EXPECT_EQ(lhs, add(a.multiply(d->extend(x), y), second, p)) << id;
        }
    }
}

TEST(Derivation, ShippedDerivationsAreSound)
{
    for (const auto& id : shipped().ids(EntryKind::derivation)) {
        auto d = shipped().derivation(id);
        EXPECT_TRUE(d->check().ok()) << id;
        EXPECT_TRUE(d->square_nonzero_degrees(24).empty()) << id;
    }
}

TEST(Derivation, IllDefinedOnRelationIsReported)
{
    auto a4 = shipped().algebra("A4.mod2");
    // w3 -> v3 sends the relation to v3^2, which is not in the ideal
    Derivation d(a4, {Element{}, Element{}, parse(*a4, "v3")}, "bad");
    EXPECT_FALSE(d.check().ok());
}

TEST(Derivation, NonzeroSquareIsReported)
{
    auto cat = catalog_of({"algebra P\nfield 2\ngen x1 deg 1\ngen y2 deg 2\n"});
    auto a = cat.algebra("P");
    Derivation d(a, {parse(*a, "y2"), parse(*a, "x1^3")}, "bad");
    EXPECT_TRUE(d.check().ok());
    auto bad = d.square_nonzero_degrees(6);
    ASSERT_FALSE(bad.empty());
    EXPECT_EQ(bad.front(), 1);
}

TEST(Derivation, IsolatedProductsConstrainTheDerivation)
{
    auto cat = catalog_of({"algebra I\nfield 2\ngen x1 deg 1\nisolated s1 deg 1\n"});
    auto a = cat.algebra("I");
    Derivation bad(a, {Element{}, parse(*a, "x1^2")}, "bad");
    auto rep = bad.check();
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations.front().find("derivation ill-defined"), std::string::npos);
    Derivation good(a, {parse(*a, "x1^2"), Element{}}, "good");
    EXPECT_TRUE(good.check().ok());
}

TEST(Derivation, DegreeMustRiseByOne)
{
    auto d2 = shipped().algebra("D2.mod2");
    Derivation d(d2, {parse(*d2, "x1^3"), Element{}}, "bad");
    EXPECT_FALSE(d.check().ok());
}
