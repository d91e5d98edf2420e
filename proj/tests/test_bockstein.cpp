#include "support.hpp"

#include <gtest/gtest.h>

using namespace cohring;
using testing_support::catalog_of;
using testing_support::shipped;

namespace {

constexpr int N = 20;

std::vector<std::string> claims_at(std::uint32_t p)
{
    std::vector<std::string> out;
    for (const auto& id : shipped().ids(EntryKind::claim))
        if (shipped().claim(id).p == p)
            out.push_back(id);
    return out;
}

std::vector<std::size_t> modp_dims(const std::string& id, int n)
{
    const auto& c = shipped().claim(id);
    if (c.modp)
        return c.modp->poincare_series(n);
    return *shipped().claim_modp_dims(id, n);
}

const Check* find_check(const ClaimReport& r, const std::string& suffix)
{
    for (const auto& c : r.checks)
        if (c.id.size() >= suffix.size() && c.id.compare(c.id.size() - suffix.size(), suffix.size(), suffix) == 0)
            return &c;
    return nullptr;
}

} // namespace

TEST(Pages, PolynomialOnOneClassHasTrivialE2)
{
    auto d = shipped().derivation("Z2.sq1");
    auto pages = e2_page(*d, 24);
    EXPECT_EQ(pages.e2[0], 1u);
    for (int n = 1; n <= 24; ++n) {
        EXPECT_EQ(pages.e1[n], 1u);
        EXPECT_EQ(pages.e2[n], 0u) << n;
    }
}

TEST(Pages, OrderPSummandsOfZ2)
{
    auto d = shipped().derivation("Z2.sq1");
    for (int n = 1; n <= 12; ++n)
        EXPECT_EQ(order_p_summands(*d, n), n % 2 == 0 ? 1u : 0u) << n;
}

TEST(Uct, ResidualsByHand)
{
    GradedAbelianGroup g;
    g.degrees.resize(4);
    g.degrees[0].free_rank = 1;
    g.degrees[2].add_torsion(2, 1);
    auto rep = uct_check(g, {1, 1, 1}, 2);
    EXPECT_TRUE(rep.ok());
    auto bad = uct_check(g, {1, 0, 1}, 2);
    ASSERT_FALSE(bad.ok());
    EXPECT_EQ(*bad.first_failure(), 1);
    EXPECT_THROW(uct_check(g, {1, 1, 1, 1, 1}, 2), Error);
}

class ClaimsAtPrime : public ::testing::TestWithParam<std::uint32_t> {};

// dim H^n(F_p) = free(n) + t(n) + t(n+1), recomputed here from the claimed group.
TEST_P(ClaimsAtPrime, UniversalCoefficients)
{
    for (const auto& id : claims_at(GetParam())) {
        const auto& c = shipped().claim(id);
        const auto g = claim_group(c, N + 1);
        const auto dims = modp_dims(id, N);
        for (int n = 0; n <= N; ++n) {
            const int expect = g.at(n).free_rank + g.at(n).torsion_count(c.p) + g.at(n + 1).torsion_count(c.p);
            EXPECT_EQ(static_cast<int>(dims[n]), expect) << id << " degree " << n;
        }
    }
}

TEST_P(ClaimsAtPrime, EveryCheckPasses)
{
    for (const auto& id : claims_at(GetParam())) {
        auto r = verify_claim(shipped().claim(id), N, shipped().claim_modp_dims(id, N));
        for (const auto& c : r.checks)
            EXPECT_TRUE(c.pass) << format_check(c);
        EXPECT_NE(find_check(r, "/uct"), nullptr) << id;
    }
}

INSTANTIATE_TEST_SUITE_P(Primes, ClaimsAtPrime, ::testing::Values(2u, 3u));

TEST(Claims, CoverTheNamedGroupsAtBothPrimes)
{
    for (const char* g : {"Z2", "Z3", "D2", "S3", "A4", "DtZtDt", "AfZtDt", "AfZtAf", "Gamma1", "Gamma2", "Gamma3",
                          "Gamma5", "Gamma6", "Gamma7", "Gamma10", "Gamma11"})
        for (const char* p : {".claim.int2", ".claim.int3"})
            EXPECT_TRUE(shipped().contains(std::string(g) + p)) << g << p;
}

TEST(Claims, AllOrderTwoClaimsHaveFreeE2)
{
    for (const auto& id : claims_at(2)) {
        const auto& c = shipped().claim(id);
        if (!c.higher.empty() || !c.sq1)
            continue;
        const auto pages = e2_page(*c.sq1, N);
        const auto g = claim_group(c, N);
        for (int n = 0; n <= N; ++n)
            EXPECT_EQ(static_cast<int>(pages.e2[n]), g.at(n).free_rank) << id << " degree " << n;
    }
}

TEST(Claims, ExactlyOneOrderFourClass)
{
    for (const char* id : {"AfZtAf.claim.int2", "Gamma2.claim.int2", "Gamma5.claim.int2", "Gamma6.claim.int2",
                           "Gamma10.claim.int2"}) {
        const auto g = claim_group(shipped().claim(id), N);
        int order4 = 0, higher = 0;
        for (const auto& d : g.degrees) {
            order4 += d.count(2, 2);
            higher += d.higher_count(2);
        }
        EXPECT_EQ(order4, 1) << id;
        EXPECT_EQ(higher, 1) << id;
    }
}

TEST(Claims, OrderFourClassLivesInDegreeThreeForA4AmalgamAndGamma2)
{
    for (const char* id : {"AfZtAf.claim.int2", "Gamma2.claim.int2"}) {
        const auto g = claim_group(shipped().claim(id), 4);
        EXPECT_EQ(g.at(3).count(2, 2), 1) << id;
    }
}

TEST(Claims, WitnessLinesIncludingPrintedTypos)
{
    std::size_t witnesses = 0, typos = 0;
    for (const auto& id : claims_at(2)) {
        auto r = verify_claim(shipped().claim(id), 12, shipped().claim_modp_dims(id, 12));
        for (const auto& c : r.checks) {
            if (c.id.find("/witness/") == std::string::npos)
                continue;
            ++witnesses;
            EXPECT_TRUE(c.pass) << format_check(c);
            if (c.detail.find("[printed:") != std::string::npos)
                ++typos;
        }
    }
    EXPECT_GE(witnesses, 25u);
    EXPECT_EQ(typos, 2u);
}

TEST(Claims, TabulatedRelationsAllHold)
{
    std::size_t checked = 0, passed = 0;
    for (const char* id : {"D2.claim.int2", "A4.claim.int2", "DtZtDt.claim.int2", "AfZtDt.claim.int2",
                           "AfZtAf.claim.int2", "Gamma2.claim.int2", "Gamma5.claim.int2"}) {
        auto r = verify_claim(shipped().claim(id), 12, shipped().claim_modp_dims(id, 12));
        checked += r.tabulated_checked;
        passed += r.tabulated_passed;
    }
    EXPECT_EQ(checked, passed);
    EXPECT_EQ(checked, 50u);
}

TEST(Claims, WrongWitnessFails)
{
    auto text = Catalog::read_file(std::filesystem::path(COHRING_DEFAULT_CATALOG_DIR) / "D2.claim.int2.coh");
    const std::string from = "witness x1\n";
    text.replace(text.find(from), from.size(), "witness y1\n");
    Catalog cat = Catalog::from_directory(COHRING_DEFAULT_CATALOG_DIR);
    cat.replace(parse_entry(text, "D2.claim.int2.coh"));
    auto r = verify_claim(cat.claim("D2.claim.int2"), 8);
    EXPECT_FALSE(r.ok());
    EXPECT_NE(find_check(r, "/witness/y2"), nullptr);
    EXPECT_FALSE(find_check(r, "/witness/y2")->pass);
}
