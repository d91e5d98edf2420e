#pragma once

// Exact dense linear algebra over small prime fields.
//
// Matrices over F_2 are eliminated with rows packed into 64-bit words; odd
// primes use one byte per residue.  Pivoting always takes the leftmost
// nonzero column so reduced forms and kernel bases are reproducible.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohring {

using Residue = std::uint32_t;
using Vec = std::vector<Residue>;

inline bool is_small_prime(std::uint32_t p)
{
    if (p < 2 || p > 255)
        return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

inline Residue inverse_mod(Residue a, std::uint32_t p)
{
    // p <= 255: Fermat by repeated multiplication is fast enough
    Residue result = 1, base = a % p;
    for (std::uint32_t e = p - 2; e; e >>= 1) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
    }
    return result;
}

inline Residue reduce_mod(long long v, std::uint32_t p)
{
    long long r = v % static_cast<long long>(p);
    return static_cast<Residue>(r < 0 ? r + p : r);
}

class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0)
    {
        if (!is_small_prime(p))
            throw std::invalid_argument("FpMatrix: modulus " + std::to_string(p) + " is not a prime <= 255");
    }

    static FpMatrix identity(std::uint32_t p, std::size_t n)
    {
        FpMatrix m(p, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i, 1);
        return m;
    }

    static FpMatrix from_rows(std::uint32_t p, const std::vector<std::vector<long long>>& rows)
    {
        std::size_t cols = rows.empty() ? 0 : rows.front().size();
        FpMatrix m(p, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw std::invalid_argument("FpMatrix::from_rows: ragged rows");
            for (std::size_t j = 0; j < cols; ++j)
                m.set(i, j, reduce_mod(rows[i][j], p));
        }
        return m;
    }

    std::uint32_t prime() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Residue at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Residue v) { data_[r * cols_ + c] = static_cast<std::uint8_t>(v % p_); }
    void add_to(std::size_t r, std::size_t c, Residue v)
    {
        auto& e = data_[r * cols_ + c];
        e = static_cast<std::uint8_t>((e + v % p_) % p_);
    }

    Vec row(std::size_t r) const
    {
        Vec out(cols_);
        for (std::size_t c = 0; c < cols_; ++c)
            out[c] = at(r, c);
        return out;
    }

    FpMatrix transpose() const
    {
        FpMatrix t(p_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t.set(c, r, at(r, c));
        return t;
    }

    Vec apply(std::span<const Residue> v) const
    {
        if (v.size() != cols_)
            throw std::invalid_argument("FpMatrix::apply: dimension mismatch");
        Vec out(rows_, 0);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < cols_; ++c)
                acc += static_cast<std::uint64_t>(at(r, c)) * v[c];
            out[r] = static_cast<Residue>(acc % p_);
        }
        return out;
    }

    bool is_zero() const
    {
        for (auto e : data_)
            if (e)
                return false;
        return true;
    }

    friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b)
    {
        if (a.cols_ != b.rows_ || a.p_ != b.p_)
            throw std::invalid_argument("FpMatrix product: shape or modulus mismatch");
        FpMatrix out(a.p_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                Residue aik = a.at(i, k);
                if (!aik)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out.data_[i * out.cols_ + j] =
                        static_cast<std::uint8_t>((out.data_[i * out.cols_ + j] + aik * b.at(k, j)) % a.p_);
            }
        return out;
    }

    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

private:
    std::uint32_t p_ = 2;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint8_t> data_;
};

// Reduced row echelon form.  `rows` holds only the nonzero rows; row i has
// its leading 1 in column pivots[i].
struct RowEchelon {
    std::uint32_t p = 2;
    std::size_t cols = 0;
    std::vector<Vec> rows;
    std::vector<std::size_t> pivots;

    std::size_t rank() const { return pivots.size(); }
};

namespace detail {

inline RowEchelon rref_f2(const FpMatrix& m)
{
    const std::size_t words = (m.cols() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> packed(m.rows(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.at(r, c))
                packed[r][c / 64] |= std::uint64_t{1} << (c % 64);

    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < m.cols() && lead < packed.size(); ++c) {
        const std::size_t w = c / 64;
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        std::size_t sel = lead;
        while (sel < packed.size() && !(packed[sel][w] & bit))
            ++sel;
        if (sel == packed.size())
            continue;
        std::swap(packed[lead], packed[sel]);
        for (std::size_t r = 0; r < packed.size(); ++r) {
            if (r != lead && (packed[r][w] & bit))
                for (std::size_t k = w; k < words; ++k)
                    packed[r][k] ^= packed[lead][k];
        }
        pivots.push_back(c);
        ++lead;
    }

    RowEchelon out{2, m.cols(), {}, pivots};
    out.rows.reserve(pivots.size());
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        Vec v(m.cols(), 0);
        for (std::size_t c = 0; c < m.cols(); ++c)
            v[c] = (packed[r][c / 64] >> (c % 64)) & 1u;
        out.rows.push_back(std::move(v));
    }
    return out;
}

inline RowEchelon rref_odd(const FpMatrix& m)
{
    const std::uint32_t p = m.prime();
    std::vector<Vec> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        rows.push_back(m.row(r));

    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < m.cols() && lead < rows.size(); ++c) {
        std::size_t sel = lead;
        while (sel < rows.size() && rows[sel][c] == 0)
            ++sel;
        if (sel == rows.size())
            continue;
        std::swap(rows[lead], rows[sel]);
        const Residue inv = inverse_mod(rows[lead][c], p);
        for (auto& e : rows[lead])
            e = e * inv % p;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == lead || rows[r][c] == 0)
                continue;
            const Residue f = p - rows[r][c];
            for (std::size_t k = c; k < m.cols(); ++k)
                rows[r][k] = (rows[r][k] + f * rows[lead][k]) % p;
        }
        pivots.push_back(c);
        ++lead;
    }
    rows.resize(pivots.size());
    return RowEchelon{p, m.cols(), std::move(rows), std::move(pivots)};
}

} // namespace detail

inline RowEchelon row_echelon(const FpMatrix& m)
{
    return m.prime() == 2 ? detail::rref_f2(m) : detail::rref_odd(m);
}

inline std::size_t rank(const FpMatrix& m) { return row_echelon(m).rank(); }

// Basis of {v : m v = 0}; one vector per free column, in column order.
inline std::vector<Vec> kernel_basis(const FpMatrix& m)
{
    const RowEchelon e = row_echelon(m);
    const std::uint32_t p = m.prime();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots)
        is_pivot[c] = true;

    std::vector<Vec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        Vec v(m.cols(), 0);
        v[f] = 1;
        for (std::size_t i = 0; i < e.rank(); ++i)
            v[e.pivots[i]] = (p - e.rows[i][f]) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

// Some x with m x = b, or nullopt when b is outside the column span.
inline std::optional<Vec> solve(const FpMatrix& m, std::span<const Residue> b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve: right-hand side has wrong length");
    const std::uint32_t p = m.prime();
    FpMatrix aug(p, m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            aug.set(r, c, m.at(r, c));
        aug.set(r, m.cols(), b[r]);
    }
    const RowEchelon e = row_echelon(aug);
    Vec x(m.cols(), 0);
    for (std::size_t i = 0; i < e.rank(); ++i) {
        if (e.pivots[i] == m.cols())
            return std::nullopt;
        x[e.pivots[i]] = e.rows[i][m.cols()];
    }
    return x;
}

// Reduces v against an echelon form in place; returns true when v ends up zero.
inline bool reduce_against(const RowEchelon& e, Vec& v)
{
    const std::uint32_t p = e.p;
    for (std::size_t i = 0; i < e.rank(); ++i) {
        const Residue c = v[e.pivots[i]];
        if (!c)
            continue;
        const Residue f = p - c;
        const Vec& row = e.rows[i];
        for (std::size_t k = e.pivots[i]; k < v.size(); ++k)
            if (row[k])
                v[k] = (v[k] + f * row[k]) % p;
    }
    for (auto x : v)
        if (x)
            return false;
    return true;
}

} // namespace cohring
