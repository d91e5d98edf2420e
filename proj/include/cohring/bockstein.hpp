#pragma once

// Bockstein pages, Universal Coefficient bookkeeping and verification of
// integral cohomology ring claims against mod-p data.
//
// Only the first differential is computed (it is Sq^1 at p = 2, the
// Bockstein at odd p).  Classes of order p^r with r >= 2 enter as counts:
// under collapse, dim E2(n) = free(n) + h(n) + h(n+1) where h counts
// summands of order at least p^2.

#include "cohring/gradedmaps.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cohring {

struct AbelianGroup {
    int free_rank = 0;
    // (prime, exponent) -> multiplicity; exponent r means a Z/p^r summand
    std::map<std::pair<std::uint32_t, int>, int> torsion;

    void add_torsion(std::uint32_t p, int r, int mult = 1)
    {
        if (r <= 0 || mult <= 0)
            return;
        torsion[{p, r}] += mult;
    }

    // Number of p-torsion summands of any exponent.
    int torsion_count(std::uint32_t p) const
    {
        int n = 0;
        for (const auto& [key, mult] : torsion)
            if (key.first == p)
                n += mult;
        return n;
    }

    int count(std::uint32_t p, int r) const
    {
        auto it = torsion.find({p, r});
        return it == torsion.end() ? 0 : it->second;
    }

    int higher_count(std::uint32_t p) const { return torsion_count(p) - count(p, 1); }

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }

    std::string to_string() const
    {
        if (is_zero())
            return "0";
        std::string out;
        auto append = [&](const std::string& s) { out += (out.empty() ? "" : " + ") + s; };
        if (free_rank)
            append(free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank));
        for (const auto& [key, mult] : torsion) {
            std::uint64_t order = 1;
            for (int i = 0; i < key.second; ++i)
                order *= key.first;
            std::string s = "Z/" + std::to_string(order);
            append(mult == 1 ? s : "(" + s + ")^" + std::to_string(mult));
        }
        return out;
    }

    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

struct GradedAbelianGroup {
    std::vector<AbelianGroup> degrees;

    const AbelianGroup& at(int n) const { return degrees.at(static_cast<std::size_t>(n)); }
    int top_degree() const { return static_cast<int>(degrees.size()) - 1; }
};

// Check record shared by every verification report.
struct Check {
    std::string id;
    bool pass = false;
    std::string detail;
};

// Sq1 is the mod-2 Bockstein; at odd primes the first Bockstein is written beta.
inline std::string bockstein_symbol(std::uint32_t p) { return p == 2 ? "Sq1" : "beta"; }

inline std::string format_check(const Check& c)
{
    return "CHECK " + c.id + " " + (c.pass ? "PASS" : "FAIL") + " " + c.detail;
}

// ---- pages ---------------------------------------------------------------

struct BocksteinPages {
    std::vector<std::size_t> e1;
    std::vector<std::size_t> e2;
};

inline BocksteinPages e2_page(const Derivation& d, int up_to)
{
    BocksteinPages out;
    std::size_t incoming = 0;  // rank of d into the current degree
    for (int n = 0; n <= up_to; ++n) {
        const std::size_t dim = d.algebra().dim(n);
        const std::size_t outgoing = rank(d.matrix(n));
        out.e1.push_back(dim);
        out.e2.push_back(dim - outgoing - incoming);
        incoming = outgoing;
    }
    return out;
}

// Number of Z/p summands in H^n(-;Z), i.e. the rank of d_1 landing in degree n.
inline std::size_t order_p_summands(const Derivation& d, int n)
{
    return n <= 0 ? 0 : rank(d.matrix(n - 1));
}

// ---- universal coefficients -----------------------------------------------

struct UctRow {
    int degree = 0;
    std::size_t modp_dim = 0;
    int free_rank = 0;
    int torsion_here = 0;
    int torsion_next = 0;

    long long residual() const
    {
        return static_cast<long long>(modp_dim) - free_rank - torsion_here - torsion_next;
    }
};

struct UctReport {
    std::uint32_t p = 2;
    std::vector<UctRow> rows;

    bool ok() const
    {
        for (const auto& r : rows)
            if (r.residual() != 0)
                return false;
        return true;
    }

    std::optional<int> first_failure() const
    {
        for (const auto& r : rows)
            if (r.residual() != 0)
                return r.degree;
        return std::nullopt;
    }
};

// dim H^n(F_p) = free(n) + t_p(n) + t_p(n+1) for every degree covered by modp_dims.
inline UctReport uct_check(const GradedAbelianGroup& claim, const std::vector<std::size_t>& modp_dims, std::uint32_t p)
{
    if (claim.degrees.size() < modp_dims.size() + 1)
        throw Error("insufficient degree range: integral data through degree " + std::to_string(claim.top_degree()) +
                    " cannot check mod-p dimensions through degree " + std::to_string(modp_dims.size() - 1));
    UctReport rep{p, {}};
    for (std::size_t n = 0; n < modp_dims.size(); ++n) {
        UctRow row;
        row.degree = static_cast<int>(n);
        row.modp_dim = modp_dims[n];
        row.free_rank = claim.degrees[n].free_rank;
        row.torsion_here = claim.degrees[n].torsion_count(p);
        row.torsion_next = claim.degrees[n + 1].torsion_count(p);
        rep.rows.push_back(row);
    }
    return rep;
}

// ---- integral ring claims ---------------------------------------------------

struct Correspondence {
    std::string generator;            // generator of the claim ring
    Element representative;           // mod-p image
    std::optional<Element> witness;   // rep = Sq^1(witness) when present
    std::string typo;                 // original printed text when it was corrected
};

struct HigherClass {
    std::string name;
    int degree = 0;
    int exponent = 2;                 // order p^exponent
    std::optional<Element> representative;
};

struct FreeClass {
    std::string name;
    int degree = 0;
};

// Formal product value such as sigma1*y2 = 2 t3; invisible mod p.
struct ExceptionalProduct {
    std::vector<std::string> factors;
    int multiplier = 1;
    std::string result;
};

struct IntegralRingClaim {
    std::string id;
    std::uint32_t p = 2;
    AlgebraPtr ring;                        // order-p part, generators named as integral classes
    AlgebraPtr modp;                        // may be null when mod-p dims come from elsewhere
    std::shared_ptr<const Derivation> sq1;  // on modp, may be null
    std::vector<Correspondence> correspondences;
    std::vector<HigherClass> higher;
    std::vector<FreeClass> free;
    std::vector<ExceptionalProduct> products;
    std::vector<std::string> notes;
};

inline bool is_free_generator(const IntegralRingClaim& c, const std::string& name)
{
    for (const auto& f : c.free)
        if (f.name == name)
            return true;
    return false;
}

// Additive structure implied by a claim, degrees 0..up_to.
inline GradedAbelianGroup claim_group(const IntegralRingClaim& c, int up_to)
{
    GradedAbelianGroup g;
    const auto& pres = c.ring->presentation();
    for (int n = 0; n <= up_to; ++n) {
        AbelianGroup a;
        if (n == 0) {
            a.free_rank = 1;
        } else {
            int free_in_ring = 0;
            for (const auto& f : c.free) {
                if (f.degree != n)
                    continue;
                ++a.free_rank;
                if (pres.index_of(f.name))
                    ++free_in_ring;
            }
            a.add_torsion(c.p, 1, static_cast<int>(c.ring->dim(n)) - free_in_ring);
            for (const auto& h : c.higher)
                if (h.degree == n)
                    a.add_torsion(c.p, h.exponent);
        }
        g.degrees.push_back(std::move(a));
    }
    return g;
}

// Substitutes generator images into a polynomial of `source` and reduces in `target`.
inline Element substitute(const Algebra& source, const Algebra& target, const std::vector<Element>& images,
                          const Element& poly)
{
    const std::uint32_t p = target.prime();
    Element out;
    for (const auto& [m, c] : source.canonical(poly).terms) {
        Element term = constant(target.num_generators(), c, p);
        for (std::size_t i = 0; i < m.size() && !term.is_zero(); ++i)
            for (unsigned k = 0; k < m[i]; ++k)
                term = target.multiply(term, images[i]);
        out = add(out, term, p);
    }
    return target.normal_form(out);
}

struct ClaimReport {
    std::vector<Check> checks;
    std::size_t tabulated_checked = 0;
    std::size_t tabulated_passed = 0;

    bool ok() const
    {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return true;
    }
};

inline std::string join_dims(const std::vector<std::size_t>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? " " : "") << v[i];
    return os.str();
}

// Runs the witness, relation, UCT and E2 checks.  When the claim has no
// mod-p ring, `modp_dims` must supply dimensions for degrees 0..up_to.
inline ClaimReport verify_claim(const IntegralRingClaim& c, int up_to,
                                const std::optional<std::vector<std::size_t>>& modp_dims = std::nullopt)
{
    const std::string sq = bockstein_symbol(c.p);
    ClaimReport rep;
    const std::string base = c.id;
    const auto& rpres = c.ring->presentation();

    // correspondence degrees and kernel membership
    std::vector<std::optional<Element>> images(rpres.generators.size());
    if (c.modp) {
        for (const auto& corr : c.correspondences) {
            auto idx = rpres.index_of(corr.generator);
            const std::string cid = base + "/corr/" + corr.generator;
            if (!idx) {
                rep.checks.push_back({cid, false, "unknown generator " + corr.generator});
                continue;
            }
            auto d = homogeneous_degree(c.modp->presentation(), corr.representative);
            if (corr.representative.is_zero() || !d || *d != rpres.generators[*idx].degree) {
                rep.checks.push_back({cid, false, "correspondence degree mismatch for " + corr.generator});
                continue;
            }
            images[*idx] = corr.representative;
            if (c.sq1) {
                Element dd = c.sq1->extend(corr.representative);
                rep.checks.push_back({cid, dd.is_zero(),
                                      dd.is_zero() ? corr.generator + " <-> " + c.modp->format(corr.representative) +
                                                         " lies in ker " + sq
                                                   : "representative not in ker " + sq + ": " + sq + "(" +
                                                         c.modp->format(corr.representative) +
                                                         ") = " + c.modp->format(dd)});
                if (corr.witness) {
                    Element val = c.sq1->extend(*corr.witness);
                    const bool match = c.modp->equal_mod_relations(val, corr.representative);
                    std::string detail = sq + "(" + c.modp->format(*corr.witness) + ") = " + c.modp->format(val);
                    if (!corr.typo.empty())
                        detail += " [printed: " + corr.typo + "; computed value used]";
                    rep.checks.push_back({base + "/witness/" + corr.generator, match,
                                          match ? detail : detail + " != " + c.modp->format(corr.representative)});
                }
            }
        }
        for (const auto& h : c.higher)
            if (h.representative && c.sq1) {
                Element dd = c.sq1->extend(*h.representative);
                rep.checks.push_back({base + "/higher/" + h.name, dd.is_zero(),
                                      h.name + " <-> " + c.modp->format(*h.representative) +
                                          (dd.is_zero() ? " lies in ker " + sq : " not in ker " + sq)});
            }

        // relations, under the correspondence
        std::vector<Element> full(rpres.generators.size());
        for (std::size_t i = 0; i < rpres.generators.size(); ++i)
            if (images[i])
                full[i] = *images[i];
        for (std::size_t r = 0; r < rpres.relations.size(); ++r) {
            const auto& rel = rpres.relations[r];
            bool checkable = true;
            for (const auto& [m, coef] : rel.poly.terms)
                for (std::size_t i = 0; i < m.size(); ++i)
                    if (m[i] && !images[i])
                        checkable = false;
            if (!checkable)
                continue;
            Element img = substitute(*c.ring, *c.modp, full, rel.poly);
            const bool pass = img.is_zero();
            const std::string label = rel.label.empty() ? c.ring->format(rel.poly) : rel.label;
            if (rel.tabulated) {
                ++rep.tabulated_checked;
                rep.tabulated_passed += pass;
            }
            rep.checks.push_back({base + "/relation/" + std::to_string(r + 1), pass,
                                  label + (pass ? " holds mod " + std::to_string(c.p)
                                                : " fails: image " + c.modp->format(img))});
        }
    }

    // The claimed ring embeds in the mod-p ring and covers the image of Sq^1,
    // so the presentation has no missing relations and no missing generators.
    if (c.modp && c.sq1 &&
        std::all_of(images.begin(), images.end(), [](const auto& x) { return x.has_value(); })) {
        std::vector<Element> full;
        for (const auto& x : images)
            full.push_back(*x);
        bool ok = true;
        std::string detail = "ring embeds and covers im " + sq + " for n <= " + std::to_string(up_to);
        for (int n = 1; n <= up_to && ok; ++n) {
            const std::size_t rd = c.ring->dim(n), md = c.modp->dim(n);
            FpMatrix sub(c.p, md, rd);
            for (std::size_t k = 0; k < rd; ++k) {
                const Vec col = c.modp->coordinates(substitute(*c.ring, *c.modp, full, c.ring->standard_monomial(n, k)), n);
                for (std::size_t r = 0; r < md; ++r)
                    sub.set(r, k, col[r]);
            }
            const std::size_t r_sub = rank(sub);
            if (r_sub != rd) {
                ok = false;
                detail = "degree " + std::to_string(n) + ": " + std::to_string(rd - r_sub) +
                         " relation(s) missing from the claimed ring";
                break;
            }
            const FpMatrix d = c.sq1->matrix(n - 1);
            FpMatrix both(c.p, md, rd + d.cols());
            for (std::size_t r = 0; r < md; ++r) {
                for (std::size_t k = 0; k < rd; ++k)
                    both.set(r, k, sub.at(r, k));
                for (std::size_t k = 0; k < d.cols(); ++k)
                    both.set(r, rd + k, d.at(r, k));
            }
            if (rank(both) != r_sub) {
                ok = false;
                detail = "degree " + std::to_string(n) + ": " + std::to_string(rank(both) - r_sub) +
                         " class(es) of im " + sq + " not reached by the claimed ring";
            }
        }
        rep.checks.push_back({base + "/image", ok, detail});
    }

    // additive structure
    std::vector<std::size_t> dims;
    if (modp_dims)
        dims = *modp_dims;
    else if (c.modp)
        dims = c.modp->poincare_series(up_to);
    if (!dims.empty()) {
        dims.resize(std::min<std::size_t>(dims.size(), static_cast<std::size_t>(up_to + 1)));
        const GradedAbelianGroup g = claim_group(c, static_cast<int>(dims.size()));
        const UctReport u = uct_check(g, dims, c.p);
        std::string detail = "mod-" + std::to_string(c.p) + " dims " + join_dims(dims);
        if (auto bad = u.first_failure()) {
            const auto& row = u.rows[static_cast<std::size_t>(*bad)];
            detail = "degree " + std::to_string(*bad) + ": " + std::to_string(row.modp_dim) +
                     " != " + std::to_string(row.free_rank) + " + " + std::to_string(row.torsion_here) + " + " +
                     std::to_string(row.torsion_next);
        } else {
            detail = "dim H^n(F" + std::to_string(c.p) + ") = free + t(n) + t(n+1) for n <= " +
                     std::to_string(dims.size() - 1);
        }
        rep.checks.push_back({base + "/uct", u.ok(), detail});
    }

    if (c.sq1) {
        const BocksteinPages pages = e2_page(*c.sq1, up_to);
        const GradedAbelianGroup g = claim_group(c, up_to + 1);
        bool ok = true;
        std::string detail = "E2 = free + h(n) + h(n+1) for n <= " + std::to_string(up_to);
        for (int n = 0; n <= up_to && ok; ++n) {
            const long long expect =
                g.at(n).free_rank + g.at(n).higher_count(c.p) + g.at(n + 1).higher_count(c.p);
            if (static_cast<long long>(pages.e2[static_cast<std::size_t>(n)]) != expect) {
                ok = false;
                detail = "degree " + std::to_string(n) + ": E2 " + std::to_string(pages.e2[static_cast<std::size_t>(n)]) +
                         " != " + std::to_string(expect);
            }
        }
        rep.checks.push_back({base + "/e2", ok, detail});
    }
    return rep;
}

} // namespace cohring
