#pragma once

// Finitely presented graded-commutative algebras over F_p.
//
// Quotient bases are computed one degree at a time: enumerate the degree-n
// monomials, span all multiples m*r of the relations, and row-reduce with the
// lex-largest monomials in the leftmost columns.  Non-pivot monomials are the
// standard basis.  No Groebner completion is involved, so every degree is a
// finite exact computation.

#include "cohring/error.hpp"
#include "cohring/fplinalg.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace cohring {

using Monomial = std::vector<std::uint16_t>;

struct GeneratorDecl {
    std::string name;
    int degree = 1;
    bool exterior = false;
    // Square-zero with trivial products against every other generator.
    bool isolated = false;
    // Generators of different nonzero blocks multiply to zero (reduced direct sums).
    int block = 0;

    friend bool operator==(const GeneratorDecl&, const GeneratorDecl&) = default;
};

// Sparse F_p-linear combination of monomials.  Coefficients are kept nonzero.
struct Element {
    std::map<Monomial, Residue> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const Element&, const Element&) = default;
};

struct Relation {
    Element poly;
    bool tabulated = false;  // part of a tabulated relation list (trel)
    std::string label;

    friend bool operator==(const Relation&, const Relation&) = default;
};

struct AlgebraPresentation {
    std::uint32_t p = 2;
    std::vector<GeneratorDecl> generators;
    std::vector<Relation> relations;

    std::optional<std::size_t> index_of(const std::string& name) const
    {
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i].name == name)
                return i;
        return std::nullopt;
    }
};

// ---- element helpers that only need p ----------------------------------

inline void add_term(Element& e, const Monomial& m, Residue c, std::uint32_t p)
{
    c %= p;
    if (!c)
        return;
    auto [it, inserted] = e.terms.try_emplace(m, c);
    if (!inserted) {
        it->second = (it->second + c) % p;
        if (!it->second)
            e.terms.erase(it);
    }
}

inline Element add(const Element& a, const Element& b, std::uint32_t p)
{
    Element out = a;
    for (const auto& [m, c] : b.terms)
        add_term(out, m, c, p);
    return out;
}

inline Element scale(const Element& a, Residue s, std::uint32_t p)
{
    Element out;
    for (const auto& [m, c] : a.terms)
        add_term(out, m, c * (s % p), p);
    return out;
}

inline Element negate(const Element& a, std::uint32_t p) { return scale(a, p - 1, p); }

inline Element subtract(const Element& a, const Element& b, std::uint32_t p) { return add(a, negate(b, p), p); }

inline Element constant(std::size_t ngens, Residue c, std::uint32_t p)
{
    Element e;
    add_term(e, Monomial(ngens, 0), c, p);
    return e;
}

inline Element generator_element(std::size_t ngens, std::size_t i)
{
    Element e;
    Monomial m(ngens, 0);
    m[i] = 1;
    e.terms.emplace(std::move(m), 1);
    return e;
}

inline int monomial_degree(const AlgebraPresentation& a, const Monomial& m)
{
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        d += m[i] * a.generators[i].degree;
    return d;
}

// Homogeneous pieces of an element, keyed by degree.
inline std::map<int, Element> homogeneous_parts(const AlgebraPresentation& a, const Element& e)
{
    std::map<int, Element> parts;
    for (const auto& [m, c] : e.terms)
        parts[monomial_degree(a, m)].terms.emplace(m, c);
    return parts;
}

inline std::optional<int> homogeneous_degree(const AlgebraPresentation& a, const Element& e)
{
    std::optional<int> d;
    for (const auto& [m, c] : e.terms) {
        int md = monomial_degree(a, m);
        if (d && *d != md)
            return std::nullopt;
        d = md;
    }
    return d;
}

inline std::string format_monomial(const AlgebraPresentation& a, const Monomial& m)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i])
            continue;
        if (!out.empty())
            out += '*';
        out += a.generators[i].name;
        if (m[i] > 1)
            out += '^' + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

// Terms in descending graded-lex order, e.g. "x1^2*y1 + 2*x1*y1^2".
inline std::string format_element(const AlgebraPresentation& a, const Element& e)
{
    if (e.is_zero())
        return "0";
    std::vector<std::pair<Monomial, Residue>> terms(e.terms.begin(), e.terms.end());
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& l, const auto& r) {
        int dl = monomial_degree(a, l.first), dr = monomial_degree(a, r.first);
        if (dl != dr)
            return dl > dr;
        return l.first > r.first;
    });
    std::string out;
    for (const auto& [m, c] : terms) {
        if (!out.empty())
            out += " + ";
        std::string mono = format_monomial(a, m);
        if (c == 1)
            out += mono;
        else if (mono == "1")
            out += std::to_string(c);
        else
            out += std::to_string(c) + '*' + mono;
    }
    return out;
}

// Reduced direct sum: units identified, products across summands vanish.
// Generator names get the matching suffix appended (suffixes may be empty).
inline AlgebraPresentation reduced_direct_sum(const std::vector<const AlgebraPresentation*>& parts,
                                              const std::vector<std::string>& suffixes = {})
{
    if (parts.empty())
        throw Error("reduced_direct_sum: no summands");
    AlgebraPresentation out;
    out.p = parts.front()->p;
    std::vector<std::size_t> offset;
    int next_block = 1;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k]->p != out.p)
            throw Error("reduced_direct_sum: summands over different primes");
        offset.push_back(out.generators.size());
        const std::string suffix = k < suffixes.size() ? suffixes[k] : std::string();
        // cross products between summands vanish: give every summand its own blocks
        std::map<int, int> renumber;
        for (auto g : parts[k]->generators) {
            g.name += suffix;
            auto [it, fresh] = renumber.emplace(g.block, next_block);
            if (fresh)
                ++next_block;
            g.block = it->second;
            if (out.index_of(g.name))
                throw Error("reduced_direct_sum: duplicate generator '" + g.name + "'");
            out.generators.push_back(std::move(g));
        }
    }
    const std::size_t n = out.generators.size();
    for (std::size_t k = 0; k < parts.size(); ++k) {
        for (const auto& rel : parts[k]->relations) {
            Relation lifted{{}, rel.tabulated, rel.label};
            for (const auto& [m, c] : rel.poly.terms) {
                Monomial big(n, 0);
                std::copy(m.begin(), m.end(), big.begin() + static_cast<std::ptrdiff_t>(offset[k]));
                lifted.poly.terms.emplace(std::move(big), c);
            }
            out.relations.push_back(std::move(lifted));
        }
    }
    return out;
}

// Degreewise data of the quotient.
struct DegreeBasis {
    int degree = 0;
    std::vector<Monomial> monomials;                // all degree-n monomials, lex-descending
    std::map<Monomial, std::size_t> monomial_index;
    RowEchelon relations;                           // echelon form of the relation multiples
    std::vector<std::size_t> standard;              // indices into monomials
    std::vector<std::ptrdiff_t> standard_position;  // monomial index -> position in standard, or -1

    std::size_t dim() const { return standard.size(); }
};

class Algebra {
public:
    explicit Algebra(AlgebraPresentation pres) : pres_(std::move(pres))
    {
        if (!is_small_prime(pres_.p))
            throw Error("algebra over unsupported modulus " + std::to_string(pres_.p));
        for (std::size_t i = 0; i < pres_.generators.size(); ++i) {
            const auto& g = pres_.generators[i];
            if (g.degree < 1)
                throw Error("generator '" + g.name + "' has nonpositive degree");
            for (std::size_t j = 0; j < i; ++j)
                if (pres_.generators[j].name == g.name)
                    throw Error("duplicate generator '" + g.name + "'");
        }
        for (auto& rel : pres_.relations) {
            rel.poly = canonical(rel.poly);
            if (!rel.poly.is_zero() && !homogeneous_degree(pres_, rel.poly))
                throw Error("inhomogeneous relation: " + format_element(pres_, rel.poly));
        }
    }

    Algebra(const Algebra&) = delete;
    Algebra& operator=(const Algebra&) = delete;

    const AlgebraPresentation& presentation() const { return pres_; }
    std::uint32_t prime() const { return pres_.p; }
    std::size_t num_generators() const { return pres_.generators.size(); }

    // Exponent of this generator is capped at one.
    bool is_capped(std::size_t i) const
    {
        const auto& g = pres_.generators[i];
        return g.exterior || (pres_.p != 2 && g.degree % 2 == 1);
    }

    int degree_of(const Monomial& m) const { return monomial_degree(pres_, m); }

    // False when the monomial vanishes for structural reasons: an exterior
    // cap, an isolated generator times anything, or two different blocks.
    bool admissible(const Monomial& m) const
    {
        unsigned factors = 0;
        bool isolated = false;
        int block = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i])
                continue;
            const auto& g = pres_.generators[i];
            if (is_capped(i) && m[i] > 1)
                return false;
            factors += m[i];
            isolated = isolated || g.isolated;
            if (g.block) {
                if (block && block != g.block)
                    return false;
                block = g.block;
            }
        }
        return !(isolated && factors > 1);
    }

    // Pairs of generators whose product vanishes without a written relation.
    std::vector<std::pair<std::size_t, std::size_t>> implicit_zero_products() const
    {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < num_generators(); ++i)
            for (std::size_t j = i; j < num_generators(); ++j) {
                Monomial m(num_generators(), 0);
                ++m[i];
                ++m[j];
                if (!admissible(m))
                    out.emplace_back(i, j);
            }
        return out;
    }

    Element one() const { return constant(num_generators(), 1, pres_.p); }
    Element generator(std::size_t i) const { return generator_element(num_generators(), i); }

    // Drops terms that violate an exterior cap.
    Element canonical(const Element& e) const
    {
        Element out;
        for (const auto& [m, c] : e.terms) {
            if (m.size() != num_generators())
                throw Error("element has wrong number of exponents");
            if (admissible(m))
                add_term(out, m, c, pres_.p);
        }
        return out;
    }

    // Product of monomials with its Koszul sign; nullopt when an exterior
    // generator would appear twice.
    std::optional<std::pair<Monomial, Residue>> multiply_monomials(const Monomial& a, const Monomial& b) const
    {
        Monomial m(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            m[i] = static_cast<std::uint16_t>(a[i] + b[i]);
        }
        if (!admissible(m))
            return std::nullopt;
        Residue sign = 1;
        if (pres_.p != 2) {
            // moving b's odd factors left past a's odd factors of higher index
            unsigned swaps = 0, odd_after = 0;
            for (std::size_t i = a.size(); i-- > 0;) {
                const bool odd = pres_.generators[i].degree % 2 == 1;
                if (odd)
                    swaps += b[i] * odd_after;
                if (odd)
                    odd_after += a[i];
            }
            if (swaps % 2)
                sign = pres_.p - 1;
        }
        return std::make_pair(std::move(m), sign);
    }

    Element multiply_raw(const Element& a, const Element& b) const
    {
        Element out;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms)
                if (auto prod = multiply_monomials(ma, mb))
                    add_term(out, prod->first, ca * cb % pres_.p * prod->second, pres_.p);
        return out;
    }

    Element multiply(const Element& a, const Element& b) const { return normal_form(multiply_raw(a, b)); }

    Element power(const Element& a, unsigned k) const
    {
        Element out = one();
        for (unsigned i = 0; i < k; ++i)
            out = multiply(out, a);
        return out;
    }

    const DegreeBasis& basis(int n) const
    {
        if (n < 0)
            throw Error("negative degree requested");
        std::lock_guard lock(mutex_);
        auto it = cache_.find(n);
        if (it != cache_.end())
            return *it->second;
        auto b = build_basis(n);
        return *cache_.emplace(n, std::move(b)).first->second;
    }

    std::size_t dim(int n) const { return n < 0 ? 0 : basis(n).dim(); }

    std::vector<std::size_t> poincare_series(int up_to) const
    {
        std::vector<std::size_t> out;
        for (int n = 0; n <= up_to; ++n)
            out.push_back(dim(n));
        return out;
    }

    std::vector<Monomial> monomials_of_degree(int n) const
    {
        std::vector<Monomial> out;
        Monomial cur(num_generators(), 0);
        enumerate(0, n, cur, out);
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }

    // Coordinates of a homogeneous element in the standard basis of degree n.
    Vec coordinates(const Element& e, int n) const
    {
        const DegreeBasis& b = basis(n);
        Vec v(b.monomials.size(), 0);
        for (const auto& [m, c] : canonical(e).terms) {
            auto it = b.monomial_index.find(m);
            if (it == b.monomial_index.end())
                throw Error("coordinates: term of wrong degree");
            v[it->second] = (v[it->second] + c) % pres_.p;
        }
        reduce_against(b.relations, v);
        Vec out(b.dim(), 0);
        for (std::size_t k = 0; k < b.standard.size(); ++k)
            out[k] = v[b.standard[k]];
        return out;
    }

    Element from_coordinates(int n, const Vec& coords) const
    {
        const DegreeBasis& b = basis(n);
        Element e;
        for (std::size_t k = 0; k < b.standard.size(); ++k)
            add_term(e, b.monomials[b.standard[k]], coords.at(k), pres_.p);
        return e;
    }

    Element standard_monomial(int n, std::size_t k) const
    {
        const DegreeBasis& b = basis(n);
        Element e;
        e.terms.emplace(b.monomials[b.standard.at(k)], 1);
        return e;
    }

    Element normal_form(const Element& e) const
    {
        Element out;
        for (const auto& [n, part] : homogeneous_parts(pres_, canonical(e))) {
            Element nf = from_coordinates(n, coordinates(part, n));
            for (auto& [m, c] : nf.terms)
                out.terms.emplace(m, c);
        }
        return out;
    }

    bool equal_mod_relations(const Element& a, const Element& b) const
    {
        return normal_form(subtract(a, b, pres_.p)).is_zero();
    }

    std::string format(const Element& e) const { return format_element(pres_, e); }

private:
    // Depth-first over exponents, pruning structurally zero monomials early.
    void enumerate(std::size_t i, int remaining, Monomial& cur, std::vector<Monomial>& out, int block = 0,
                   bool started = false) const
    {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (i == num_generators())
            return;
        const auto& g = pres_.generators[i];
        const int d = g.degree;
        int max_e = is_capped(i) ? std::min(1, remaining / d) : remaining / d;
        if (g.isolated)
            max_e = !started && remaining == d ? 1 : 0;
        if (g.block && block && g.block != block)
            max_e = 0;
        for (int e = 0; e <= max_e; ++e) {
            cur[i] = static_cast<std::uint16_t>(e);
            enumerate(i + 1, remaining - e * d, cur, out, e && g.block ? g.block : block, started || e > 0);
        }
        cur[i] = 0;
    }

    std::unique_ptr<DegreeBasis> build_basis(int n) const
    {
        auto b = std::make_unique<DegreeBasis>();
        b->degree = n;
        b->monomials = monomials_of_degree(n);
        for (std::size_t k = 0; k < b->monomials.size(); ++k)
            b->monomial_index.emplace(b->monomials[k], k);

        std::vector<Vec> rows;
        for (const auto& rel : pres_.relations) {
            if (rel.poly.is_zero())
                continue;
            const int d = *homogeneous_degree(pres_, rel.poly);
            if (d > n)
                continue;
            for (const auto& m : monomials_of_degree(n - d)) {
                Vec row(b->monomials.size(), 0);
                bool nonzero = false;
                for (const auto& [rm, c] : rel.poly.terms) {
                    auto prod = multiply_monomials(m, rm);
                    if (!prod)
                        continue;
                    auto& slot = row[b->monomial_index.at(prod->first)];
                    slot = (slot + c * prod->second) % pres_.p;
                    nonzero = true;
                }
                if (nonzero)
                    rows.push_back(std::move(row));
            }
        }
        FpMatrix mat(pres_.p, rows.size(), b->monomials.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                if (rows[r][c])
                    mat.set(r, c, rows[r][c]);
        b->relations = row_echelon(mat);
        b->relations.cols = b->monomials.size();

        std::vector<bool> pivot(b->monomials.size(), false);
        for (auto c : b->relations.pivots)
            pivot[c] = true;
        b->standard_position.assign(b->monomials.size(), -1);
        for (std::size_t k = 0; k < b->monomials.size(); ++k)
            if (!pivot[k]) {
                b->standard_position[k] = static_cast<std::ptrdiff_t>(b->standard.size());
                b->standard.push_back(k);
            }
        return b;
    }

    AlgebraPresentation pres_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<int, std::unique_ptr<DegreeBasis>> cache_;
};

// Dimensions of the plain direct sum (two units in degree zero).
inline std::vector<std::size_t> direct_sum_dims(const std::vector<const Algebra*>& parts, int up_to)
{
    std::vector<std::size_t> out(static_cast<std::size_t>(up_to + 1), 0);
    for (const auto* a : parts)
        for (int n = 0; n <= up_to; ++n)
            out[static_cast<std::size_t>(n)] += a->dim(n);
    return out;
}

} // namespace cohring
