#include "oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cohring;
using testing_support::shipped;

namespace {

constexpr int top = 16;

class OracleEquivalence : public ::testing::TestWithParam<const char*> {};

} // namespace

TEST_P(OracleEquivalence, DimensionsAgree)
{
    auto a = shipped().algebra(GetParam());
    auto gb = oracle::complete_presentation(a->presentation(), top);
    for (int n = 0; n <= top; ++n)
        EXPECT_EQ(a->dim(n), gb.standard_count(n)) << GetParam() << " degree " << n;
}

// Random combinations of monomials: the library's normal form must differ
// from the input by an element of the ideal, and vanish exactly when the
// oracle remainder does.
TEST_P(OracleEquivalence, NormalFormsAgree)
{
    auto a = shipped().algebra(GetParam());
    auto gb = oracle::complete_presentation(a->presentation(), top);
    std::mt19937 rng(101);
    for (int n = 1; n <= top; ++n) {
        const auto monos = a->monomials_of_degree(n);
        for (int t = 0; t < 12 && !monos.empty(); ++t) {
            Element e;
            for (const auto& m : monos)
                if (rng() % 3 == 0)
                    add_term(e, m, 1, 2);
            const Element nf = a->normal_form(e);
            const auto diff = oracle::from_element(gb.order(), subtract(nf, e, 2));
            EXPECT_TRUE(gb.reduce(diff).empty()) << GetParam() << " degree " << n;
            EXPECT_EQ(nf.is_zero(), gb.reduce(oracle::from_element(gb.order(), e)).empty())
                << GetParam() << " degree " << n;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Mod2Rings, OracleEquivalence,
                         ::testing::Values("D2.mod2", "A4.mod2", "DtZtDt.mod2", "AfZtDt.mod2", "AfZtAf.mod2"),
                         [](const auto& info) {
                             std::string s = info.param;
                             return s.substr(0, s.find('.'));
                         });

TEST(Oracle, DetectsAWrongRelation)
{
    // The oracle is not vacuous: dropping a relation changes its count.
    AlgebraPresentation pres = shipped().algebra("A4.mod2")->presentation();
    pres.relations.clear();
    auto gb = oracle::complete_presentation(pres, top);
    EXPECT_NE(gb.standard_count(6), shipped().algebra("A4.mod2")->dim(6));
}
