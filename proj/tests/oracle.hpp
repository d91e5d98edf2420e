#pragma once

// Independent check on quotient bases over F2: a degree-truncated Buchberger
// completion in the commutative polynomial ring, followed by counting
// monomials outside the leading-term ideal.  Shares nothing with the
// library's degreewise echelon beyond the input presentation.

#include "cohring/gradedalg.hpp"

#include <set>
#include <vector>

namespace oracle {

using Mono = std::vector<int>;

// Weighted degree, ties broken by reverse lex.
struct Order {
    std::vector<int> w;

    int degree(const Mono& m) const
    {
        int d = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            d += m[i] * w[i];
        return d;
    }

    // true when a is the larger monomial, so sets list leading terms first
    bool operator()(const Mono& a, const Mono& b) const
    {
        const int da = degree(a), db = degree(b);
        if (da != db)
            return da > db;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i])
                return a[i] < b[i];
        return false;
    }
};

using Poly = std::set<Mono, Order>;  // F2 coefficients: a term is present or not

inline void toggle(Poly& f, const Mono& m)
{
    if (auto it = f.find(m); it != f.end())
        f.erase(it);
    else
        f.insert(m);
}

inline Mono times(const Mono& a, const Mono& b)
{
    Mono out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i];
    return out;
}

inline bool divides(const Mono& a, const Mono& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

inline Mono quotient(const Mono& b, const Mono& a)
{
    Mono out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = b[i] - a[i];
    return out;
}

inline Mono lcm(const Mono& a, const Mono& b)
{
    Mono out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = std::max(a[i], b[i]);
    return out;
}

class Groebner {
public:
    Groebner(Order ord, int top) : ord_(std::move(ord)), top_(top) {}

    // Remainder of f modulo the current basis (fully reduced).
    Poly reduce(Poly f) const
    {
        Poly rem(ord_);
        while (!f.empty()) {
            const Mono t = *f.begin();
            const Poly* g = nullptr;
            for (const auto& b : basis_)
                if (divides(*b.begin(), t)) {
                    g = &b;
                    break;
                }
            if (!g) {
                f.erase(f.begin());
                rem.insert(t);
                continue;
            }
            const Mono q = quotient(t, *g->begin());
            for (const auto& m : *g)
                toggle(f, times(q, m));
        }
        return rem;
    }

    void add_generator(const Poly& f)
    {
        Poly r = reduce(f);
        if (!r.empty() && ord_.degree(*r.begin()) <= top_)
            basis_.push_back(std::move(r));
    }

    // Closes the basis under S-polynomials whose lcm lies in degrees <= top.
    void complete()
    {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t j = 0; j < basis_.size(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                pairs.emplace_back(i, j);
        while (!pairs.empty()) {
            auto [i, j] = pairs.back();
            pairs.pop_back();
            const Mono& a = *basis_[i].begin();
            const Mono& b = *basis_[j].begin();
            const Mono l = lcm(a, b);
            if (ord_.degree(l) > top_ || l == times(a, b))
                continue;
            Poly s(ord_);
            for (const auto& m : basis_[i])
                toggle(s, times(quotient(l, a), m));
            for (const auto& m : basis_[j])
                toggle(s, times(quotient(l, b), m));
            Poly r = reduce(std::move(s));
            if (r.empty())
                continue;
            basis_.push_back(std::move(r));
            for (std::size_t k = 0; k + 1 < basis_.size(); ++k)
                pairs.emplace_back(k, basis_.size() - 1);
        }
    }

    const Order& order() const { return ord_; }

    // Monomials of degree n outside the leading-term ideal.
    std::size_t standard_count(int n) const
    {
        std::size_t count = 0;
        Mono m(ord_.w.size(), 0);
        walk(0, n, m, count);
        return count;
    }

private:
    void walk(std::size_t i, int remaining, Mono& m, std::size_t& count) const
    {
        if (i == m.size()) {
            if (remaining != 0)
                return;
            for (const auto& b : basis_)
                if (divides(*b.begin(), m))
                    return;
            ++count;
            return;
        }
        for (int e = 0; e * ord_.w[i] <= remaining; ++e) {
            m[i] = e;
            walk(i + 1, remaining - e * ord_.w[i], m, count);
        }
        m[i] = 0;
    }

    Order ord_;
    int top_;
    std::vector<Poly> basis_;
};

inline Poly from_element(const Order& ord, const cohring::Element& e)
{
    Poly f(ord);
    for (const auto& [m, c] : e.terms)
        if (c % 2)
            toggle(f, Mono(m.begin(), m.end()));
    return f;
}

// Commutative presentation of a mod-2 algebra: exterior squares, isolated
// generators and cross-block products become explicit relations.
inline Groebner complete_presentation(const cohring::AlgebraPresentation& pres, int top)
{
    Order ord;
    for (const auto& g : pres.generators)
        ord.w.push_back(g.degree);
    Groebner gb(ord, top);
    const std::size_t n = pres.generators.size();
    auto monomial = [&](std::size_t i, std::size_t j) {
        Mono m(n, 0);
        ++m[i];
        ++m[j];
        Poly f(ord);
        f.insert(m);
        return f;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& gi = pres.generators[i];
        if (gi.exterior || gi.isolated)
            gb.add_generator(monomial(i, i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& gj = pres.generators[j];
            const bool cross = gi.block && gj.block && gi.block != gj.block;
            if (gi.isolated || gj.isolated || cross)
                gb.add_generator(monomial(i, j));
        }
    }
    for (const auto& r : pres.relations)
        gb.add_generator(from_element(ord, r.poly));
    gb.complete();
    return gb;
}

} // namespace oracle
