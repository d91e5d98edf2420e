#include "support.hpp"

#include <gtest/gtest.h>

using namespace cohring;
using testing_support::parse;
using testing_support::shipped;

namespace {

constexpr int N = 20;

const TowerResult& integral_run(const std::string& id)
{
    static std::map<std::string, TowerResult> cache;
    auto it = cache.find(id);
    if (it == cache.end())
        it = cache.emplace(id, tower(shipped().tower(id), Coefficients::integral, N)).first;
    return it->second;
}

FgGroup cyclic_group(const std::vector<long long>& orders)
{
    std::vector<IntVec> rels;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        IntVec r(orders.size(), 0);
        r[i] = orders[i];
        rels.push_back(r);
    }
    return quotient(orders.size(), rels);
}

} // namespace

TEST(Extensions, TwoByOneHasTwoTypes)
{
    auto cands = detail::extension_candidates(cyclic_group({2}), cyclic_group({2, 2}), 2, false);
    std::set<std::string> types;
    for (const auto& c : cands)
        types.insert(c.type.to_string());
    EXPECT_EQ(types, (std::set<std::string>{"(Z/2)^3", "Z/2 + Z/4"}));
    auto split = detail::extension_candidates(cyclic_group({2}), cyclic_group({2, 2}), 2, true);
    for (const auto& c : split)
        EXPECT_EQ(c.type.to_string(), "(Z/2)^3");
}

TEST(Extensions, FreeQuotientSplits)
{
    auto cands = detail::extension_candidates(cyclic_group({2}), cyclic_group({0}), 2, false);
    ASSERT_FALSE(cands.empty());
    for (const auto& c : cands)
        EXPECT_EQ(c.type.to_string(), "Z + Z/2");
}

class TowerAgainstClaim : public ::testing::TestWithParam<std::string> {};

TEST_P(TowerAgainstClaim, GroupsAndFieldDimensionsMatch)
{
    for (const auto& c : tower_claim_checks(shipped(), GetParam(), N))
        EXPECT_TRUE(c.pass) << format_check(c);
}

INSTANTIATE_TEST_SUITE_P(
    Shipped, TowerAgainstClaim,
    ::testing::ValuesIn([] {
        std::vector<std::string> out;
        for (const auto& id : shipped().ids(EntryKind::tower))
            if (shipped().tower(id).out_of_scope.empty())
                out.push_back(id);
        return out;
    }()),
    [](const auto& info) {
        std::string s = info.param;
        std::replace(s.begin(), s.end(), '.', '_');
        return s;
    });

TEST(Les, Gamma7FieldDimensionsMatchClaimedRing)
{
    auto dims = tower(shipped().tower("Gamma7.tower2"), Coefficients::field, N).dims();
    EXPECT_EQ(dims, shipped().claim("Gamma7.claim.int2").modp->poincare_series(N));
}

TEST(Les, Gamma2HasOneOrderFourSlotInDegreeThree)
{
    const auto& r = integral_run("Gamma2.tower2");
    int order4 = 0;
    for (const auto& d : r.final_stage().degrees)
        order4 += d.group.count(2, 2);
    EXPECT_EQ(order4, 1);
    EXPECT_EQ(r.final_stage().degrees[3].group.count(2, 2), 1);
}

TEST(Les, A4AmalgamAmbiguityResolvesToZ2PlusZ4)
{
    const auto& d = integral_run("AfZtAf.tower2").final_stage().degrees[3];
    EXPECT_TRUE(d.ambiguous);
    EXPECT_TRUE(d.resolved);
    EXPECT_GE(d.candidates.size(), 2u);
    EXPECT_EQ(d.group.to_string(), "Z/2 + Z/4");
    EXPECT_NE(d.resolution.find("Sq1"), std::string::npos);
}

TEST(Les, WithoutBocksteinInputTheAmbiguityStays)
{
    TowerSpec spec = shipped().tower("AfZtAf.tower2");
    spec.facts.clear();
    auto r = tower(spec, Coefficients::integral, 4);
    const auto& d = r.final_stage().degrees[3];
    EXPECT_TRUE(d.ambiguous);
    EXPECT_FALSE(d.resolved);
}

TEST(Les, FreeClassCounts)
{
    const auto& g10 = integral_run("Gamma10.tower2").final_stage().degrees;
    EXPECT_EQ(g10[1].group.free_rank, 3);
    EXPECT_EQ(g10[2].group.free_rank, 2);
    const auto& g6 = integral_run("Gamma6.tower2").final_stage().degrees;
    const auto claim6 = claim_group(shipped().claim("Gamma6.claim.int2"), 2);
    EXPECT_EQ(g6[1].group.free_rank, claim6.at(1).free_rank);
    EXPECT_EQ(g6[2].group.free_rank, claim6.at(2).free_rank);
    EXPECT_EQ(g6[1].group.free_rank, 2);
    EXPECT_EQ(g6[2].group.free_rank, 1);
}

TEST(Les, AlphaSurjectiveFromDegreeThree)
{
    for (const char* id : {"AfZtDt.tower2", "DtZtDt.tower2", "Gamma2.tower2"}) {
        const auto& r = integral_run(id);
        for (int n = 3; n <= N; ++n)
            EXPECT_TRUE(r.final_stage().degrees[n].alpha_surjective) << id << " degree " << n;
    }
}

TEST(Les, FieldAndIntegralRunsAreConsistentByUct)
{
    for (const char* id : {"Gamma2.tower2", "Gamma5.tower2", "Gamma10.tower3"}) {
        const auto& spec = shipped().tower(id);
        const auto g = tower(spec, Coefficients::integral, N + 1).final_group();
        const auto dims = tower(spec, Coefficients::field, N).dims();
        EXPECT_TRUE(uct_check(g, dims, spec.p).ok()) << id;
    }
}

TEST(Les, OutOfScopeTowerIsMarked)
{
    for (const char* id : {"Gamma3.tower2", "Gamma3.tower3"}) {
        const auto& spec = shipped().tower(id);
        EXPECT_FALSE(spec.out_of_scope.empty());
        auto r = tower(spec, Coefficients::integral, 4);
        auto lines = tower_report(r);
        ASSERT_EQ(lines.size(), 2u);
        EXPECT_EQ(lines[1].rfind("OUT-OF-SCOPE ", 0), 0u);
    }
}

TEST(Les, DeterministicReports)
{
    const auto& spec = shipped().tower("Gamma6.tower2");
    EXPECT_EQ(tower_report(tower(spec, Coefficients::integral, 8)),
              tower_report(tower(spec, Coefficients::integral, 8)));
}

TEST(DeltaProduct, Sigma1TimesY2IsTwiceTheOrderFourClass)
{
    const auto& spec = shipped().tower("Gamma2.tower2");
    const auto& r = integral_run("Gamma2.tower2");
    auto d2 = shipped().algebra("D2.mod2");
    auto z2 = shipped().algebra("Z2.mod2");
    auto dp = delta_product(spec, r, 2, {{"D", parse(*d2, "x1^2")}}, z2->one());
    EXPECT_EQ(dp.degree, 3);
    ASSERT_FALSE(dp.zero);
    // the value is 2 times a generator of order 4
    const auto& classes = r.stages[1].degrees[3].classes;
    bool found = false;
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].order == 4 && dp.value == "2*" + classes[i].name)
            found = true;
    EXPECT_TRUE(found) << dp.value;
    // z2 restricts to zero on the twisting edge
    EXPECT_TRUE(delta_product(spec, r, 2, {{"D", parse(*d2, "y1^2")}}, z2->one()).zero);
}

TEST(DeltaProduct, Gamma6PowersOfY2TimesTau1Survive)
{
    const auto& spec = shipped().tower("Gamma6.tower2");
    const auto& r = integral_run("Gamma6.tower2");
    auto z2 = shipped().algebra("Z2.mod2");
    for (unsigned k = 1; k <= 6; ++k) {
        auto dp = delta_product(spec, r, 5, {{"Zb", z2->power(parse(*z2, "x1"), 2 * k)}}, z2->one());
        EXPECT_FALSE(dp.zero) << k;
        EXPECT_EQ(dp.degree, static_cast<int>(2 * k + 1));
    }
}

TEST(DeltaProduct, ProductOfTwoDeltaClassesVanishes)
{
    EXPECT_TRUE(delta_delta_product().zero);
}

TEST(DeltaProduct, MissingRestrictionIsAnError)
{
    const auto& spec = shipped().tower("Gamma2.tower2");
    const auto& r = integral_run("Gamma2.tower2");
    auto a4 = shipped().algebra("A4.mod2");
    auto z2 = shipped().algebra("Z2.mod2");
    EXPECT_THROW(delta_product(spec, r, 2, {{"A", parse(*a4, "u2")}}, z2->one()), Error);
    EXPECT_THROW(delta_product(spec, r, 7, {}, z2->one()), Error);
}
