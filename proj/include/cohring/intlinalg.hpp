#pragma once

// Finitely generated abelian groups through integer Smith normal form.
//
// A group is given by generator orders (0 for infinite order) and elements
// are integer coordinate vectors.  Subgroups, kernels, cokernels and
// extensions are all reduced to one operation: the quotient of Z^g by a
// relation lattice, computed with unimodular transforms kept on both sides.

#include "cohring/bockstein.hpp"
#include "cohring/error.hpp"

#include <cstdint>
#include <cstdlib>
#include <utility>
#include <vector>

namespace cohring {

namespace detail {

inline long long checked_mul(long long a, long long b)
{
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error("integer overflow in Smith form");
    return r;
}

inline long long checked_sub(long long a, long long b)
{
    long long r;
    if (__builtin_sub_overflow(a, b, &r))
        throw Error("integer overflow in Smith form");
    return r;
}

inline long long floor_mod(long long a, long long m)
{
    long long r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace detail

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    long long& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    long long operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<long long> column(std::size_t c) const
    {
        std::vector<long long> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(a, c), (*this)(b, c));
    }
    void swap_cols(std::size_t a, std::size_t b)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap((*this)(r, a), (*this)(r, b));
    }
    // row[dst] -= q * row[src]
    void row_axpy(std::size_t dst, std::size_t src, long long q)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(dst, c) = detail::checked_sub((*this)(dst, c), detail::checked_mul(q, (*this)(src, c)));
    }
    // col[dst] -= q * col[src]
    void col_axpy(std::size_t dst, std::size_t src, long long q)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, dst) = detail::checked_sub((*this)(r, dst), detail::checked_mul(q, (*this)(r, src)));
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<long long> data_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows())
        throw Error("IntMatrix product: shape mismatch");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (a(i, k))
                for (std::size_t j = 0; j < b.cols(); ++j)
                    out(i, j) = detail::checked_sub(out(i, j), -detail::checked_mul(a(i, k), b(k, j)));
    return out;
}

// u * n * v == d with u, v unimodular and uinv = u^{-1}; d is diagonal with
// its nonzero entries first.  Entries are positive but need not divide
// each other.
struct SmithForm {
    IntMatrix d, u, uinv, v;
    std::size_t rank = 0;

    long long diag(std::size_t i) const { return i < d.rows() && i < d.cols() ? d(i, i) : 0; }
};

inline SmithForm smith_form(IntMatrix n)
{
    const std::size_t m = n.rows(), k = n.cols();
    SmithForm s{{}, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(k), 0};

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        n.swap_rows(a, b);
        s.u.swap_rows(a, b);
        s.uinv.swap_cols(a, b);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        n.swap_cols(a, b);
        s.v.swap_cols(a, b);
    };
    auto row_op = [&](std::size_t dst, std::size_t src, long long q) {
        n.row_axpy(dst, src, q);
        s.u.row_axpy(dst, src, q);
        s.uinv.col_axpy(src, dst, -q);
    };

    std::size_t t = 0;
    for (; t < std::min(m, k); ++t) {
        // smallest nonzero entry of the trailing block
        std::size_t bi = m, bj = k;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < k; ++j)
                if (n(i, j) && (bi == m || std::llabs(n(i, j)) < std::llabs(n(bi, bj)))) {
                    bi = i;
                    bj = j;
                }
        if (bi == m)
            break;
        swap_rows(t, bi);
        swap_cols(t, bj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (n(i, t)) {
                    row_op(i, t, n(i, t) / n(t, t));
                    clean = clean && n(i, t) == 0;
                }
            for (std::size_t j = t + 1; j < k; ++j)
                if (n(t, j)) {
                    const long long q = n(t, j) / n(t, t);
                    n.col_axpy(j, t, q);
                    s.v.col_axpy(j, t, q);
                    clean = clean && n(t, j) == 0;
                }
            if (clean)
                break;
            // a remainder is smaller than the pivot; bring it in
            std::size_t bi2 = t, bj2 = t;
            for (std::size_t i = t + 1; i < m; ++i)
                if (n(i, t) && std::llabs(n(i, t)) < std::llabs(n(bi2, bj2))) {
                    bi2 = i;
                    bj2 = t;
                }
            for (std::size_t j = t + 1; j < k; ++j)
                if (n(t, j) && std::llabs(n(t, j)) < std::llabs(n(bi2, bj2))) {
                    bi2 = t;
                    bj2 = j;
                }
            swap_rows(t, bi2);
            swap_cols(t, bj2);
        }
        if (n(t, t) < 0) {
            for (std::size_t c = 0; c < k; ++c)
                n(t, c) = -n(t, c);
            for (std::size_t c = 0; c < m; ++c)
                s.u(t, c) = -s.u(t, c);
            for (std::size_t r = 0; r < m; ++r)
                s.uinv(r, t) = -s.uinv(r, t);
        }
    }
    s.rank = t;
    s.d = std::move(n);
    return s;
}

// Integer kernel of n, as a basis of column vectors.
inline std::vector<std::vector<long long>> integer_kernel(const IntMatrix& n)
{
    const SmithForm s = smith_form(n);
    std::vector<std::vector<long long>> out;
    for (std::size_t j = s.rank; j < n.cols(); ++j)
        out.push_back(s.v.column(j));
    return out;
}

using IntVec = std::vector<long long>;

// Cyclic decomposition with a change of coordinates to and from the
// presenting generators.
struct FgGroup {
    std::vector<long long> orders;   // 0 = infinite cyclic
    std::vector<IntVec> generators;  // in the presenting coordinates
    IntMatrix to_new;                // rows: coordinate functionals, one per kept generator

    std::size_t size() const { return orders.size(); }

    IntVec coordinates(const IntVec& x) const
    {
        IntVec y(orders.size(), 0);
        for (std::size_t i = 0; i < orders.size(); ++i) {
            long long acc = 0;
            for (std::size_t j = 0; j < x.size(); ++j)
                acc = detail::checked_sub(acc, -detail::checked_mul(to_new(i, j), x[j]));
            y[i] = orders[i] ? detail::floor_mod(acc, orders[i]) : acc;
        }
        return y;
    }

    bool is_zero(const IntVec& x) const
    {
        for (auto c : coordinates(x))
            if (c)
                return false;
        return true;
    }
};

// Z^g modulo the span of `relations` (each of length g).
inline FgGroup quotient(std::size_t g, const std::vector<IntVec>& relations)
{
    IntMatrix p(g, relations.size());
    for (std::size_t c = 0; c < relations.size(); ++c) {
        if (relations[c].size() != g)
            throw Error("quotient: relation has wrong length");
        for (std::size_t r = 0; r < g; ++r)
            p(r, c) = relations[c][r];
    }
    const SmithForm s = smith_form(p);
    FgGroup out;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < g; ++i) {
        const long long d = i < s.rank ? s.diag(i) : 0;
        if (d == 1)
            continue;
        kept.push_back(i);
        out.orders.push_back(d);
        out.generators.push_back(s.uinv.column(i));
    }
    out.to_new = IntMatrix(kept.size(), g);
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = 0; j < g; ++j)
            out.to_new(i, j) = s.u(kept[i], j);
    return out;
}

// Relations Z^g -> group given by generator orders.
inline std::vector<IntVec> order_relations(const std::vector<long long>& orders)
{
    std::vector<IntVec> rel;
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (orders[i]) {
            IntVec v(orders.size(), 0);
            v[i] = orders[i];
            rel.push_back(std::move(v));
        }
    return rel;
}

// Subgroup of the group with generator orders `ambient` spanned by `span`.
// Generators of the result are returned in ambient coordinates.
inline FgGroup subgroup(const std::vector<long long>& ambient, const std::vector<IntVec>& span)
{
    const std::size_t a = ambient.size(), k = span.size();
    const auto ord = order_relations(ambient);
    IntMatrix m(a, k + ord.size());
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t r = 0; r < a; ++r)
            m(r, c) = span[c][r];
    for (std::size_t c = 0; c < ord.size(); ++c)
        for (std::size_t r = 0; r < a; ++r)
            m(r, k + c) = ord[c][r];
    std::vector<IntVec> rel;
    for (auto& v : integer_kernel(m))
        rel.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
    FgGroup q = quotient(k, rel);
    for (auto& g : q.generators) {
        IntVec amb(a, 0);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t r = 0; r < a; ++r)
                amb[r] = detail::checked_sub(amb[r], -detail::checked_mul(g[c], span[c][r]));
        for (std::size_t r = 0; r < a; ++r)
            if (ambient[r])
                amb[r] = detail::floor_mod(amb[r], ambient[r]);
        g = std::move(amb);
    }
    return q;
}

// Hom between groups with the given generator orders; column j is the image
// of source generator j.
struct GroupHom {
    std::vector<long long> source, target;
    IntMatrix m;  // target.size() x source.size()

    void validate() const
    {
        if (m.rows() != target.size() || m.cols() != source.size())
            throw Error("invalid alpha: matrix shape does not match the groups");
        for (std::size_t j = 0; j < source.size(); ++j)
            for (std::size_t i = 0; i < target.size(); ++i) {
                // ord_s * m_ij must vanish in Z/ord_t
                const long long ot = target[i];
                const long long v = detail::checked_mul(source[j], m(i, j));
                if (ot == 0 ? (source[j] != 0 && m(i, j) != 0) : detail::floor_mod(v, ot) != 0)
                    throw Error("invalid alpha: not a well-defined homomorphism");
            }
    }
};

inline FgGroup hom_kernel(const GroupHom& h)
{
    h.validate();
    const std::size_t a = h.source.size(), b = h.target.size();
    const auto tord = order_relations(h.target);
    IntMatrix n(b, a + tord.size());
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < a; ++j)
            n(i, j) = h.m(i, j);
        for (std::size_t c = 0; c < tord.size(); ++c)
            n(i, a + c) = tord[c][i];
    }
    std::vector<IntVec> span;
    for (auto& v : integer_kernel(n))
        span.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(a));
    return subgroup(h.source, span);
}

inline FgGroup hom_cokernel(const GroupHom& h)
{
    h.validate();
    auto rel = order_relations(h.target);
    for (std::size_t j = 0; j < h.source.size(); ++j)
        rel.push_back(h.m.column(j));
    return quotient(h.target.size(), rel);
}

inline std::vector<std::pair<std::uint64_t, int>> prime_power_factors(long long d)
{
    std::vector<std::pair<std::uint64_t, int>> out;
    std::uint64_t n = static_cast<std::uint64_t>(std::llabs(d));
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e)
            out.push_back({q, e});
    }
    if (n > 1)
        out.push_back({n, 1});
    return out;
}

inline AbelianGroup to_abelian(const std::vector<long long>& orders)
{
    AbelianGroup g;
    for (auto d : orders) {
        if (d == 0)
            ++g.free_rank;
        else
            for (auto [q, e] : prime_power_factors(d))
                g.add_torsion(static_cast<std::uint32_t>(q), e);
    }
    return g;
}

} // namespace cohring
