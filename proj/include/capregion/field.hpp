#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace capregion {

using Symbol = std::uint32_t;
using FieldVector = std::vector<Symbol>;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// GF(q) for prime q, with a precomputed inverse table.
class PrimeField {
  public:
    explicit PrimeField(std::uint32_t q) : q_(q) {
        if (!is_prime(q)) throw std::invalid_argument("field order " + std::to_string(q) + " is not prime");
        if (q > (1u << 16)) throw std::invalid_argument("field order too large");
        inverse_.assign(q, 0);
        for (Symbol a = 1; a < q; ++a)
            for (Symbol b = 1; b < q; ++b)
                if (mul(a, b) == 1) {
                    inverse_[a] = b;
                    break;
                }
    }

    std::uint32_t order() const { return q_; }

    Symbol add(Symbol a, Symbol b) const { return (a + b) % q_; }
    Symbol sub(Symbol a, Symbol b) const { return (a + q_ - b) % q_; }
    Symbol neg(Symbol a) const { return (q_ - a) % q_; }
    Symbol mul(Symbol a, Symbol b) const {
        return static_cast<Symbol>((static_cast<std::uint64_t>(a) * b) % q_);
    }
    Symbol inv(Symbol a) const {
        if (a % q_ == 0) throw std::domain_error("zero has no inverse");
        return inverse_[a % q_];
    }

    /// a += s * b, elementwise.
    void axpy(FieldVector& a, Symbol s, const FieldVector& b) const {
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = add(a[k], mul(s, b[k]));
    }

    FieldVector unit(std::size_t dim, std::size_t k) const {
        FieldVector v(dim, 0);
        v[k] = 1;
        return v;
    }

    /// Reduced row-echelon basis of span(vectors); `dim` is the ambient dimension.
    std::vector<FieldVector> basis(const std::vector<FieldVector>& vectors, std::size_t dim) const {
        std::vector<FieldVector> rows;
        std::vector<std::size_t> pivots;
        for (FieldVector v : vectors) {
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (v[pivots[r]] != 0) axpy(v, neg(v[pivots[r]]), rows[r]);
            std::size_t p = 0;
            while (p < dim && v[p] == 0) ++p;
            if (p == dim) continue;
            Symbol s = inv(v[p]);
            for (auto& x : v) x = mul(x, s);
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (rows[r][p] != 0) axpy(rows[r], neg(rows[r][p]), v);
            rows.push_back(std::move(v));
            pivots.push_back(p);
        }
        return rows;
    }

    bool in_span(const std::vector<FieldVector>& vectors, const FieldVector& target) const {
        auto b = basis(vectors, target.size());
        FieldVector v = target;
        for (const auto& row : b) {
            std::size_t p = 0;
            while (row[p] == 0) ++p;
            if (v[p] != 0) axpy(v, neg(v[p]), row);
        }
        for (auto x : v)
            if (x != 0) return false;
        return true;
    }

    /// Coefficients c with sum_k c[k] * vectors[k] == target, if any.
    std::optional<FieldVector> combination(const std::vector<FieldVector>& vectors, const FieldVector& target) const {
        const std::size_t n = vectors.size(), dim = target.size();
        // Augmented system: rows are coordinates, columns are the vectors.
        std::vector<FieldVector> m(dim, FieldVector(n + 1, 0));
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < n; ++c) m[r][c] = vectors[c][r];
            m[r][n] = target[r];
        }
        std::vector<std::size_t> pivot_col;
        std::size_t row = 0;
        for (std::size_t c = 0; c < n && row < dim; ++c) {
            std::size_t p = row;
            while (p < dim && m[p][c] == 0) ++p;
            if (p == dim) continue;
            std::swap(m[p], m[row]);
            Symbol s = inv(m[row][c]);
            for (auto& x : m[row]) x = mul(x, s);
            for (std::size_t r = 0; r < dim; ++r)
                if (r != row && m[r][c] != 0) axpy(m[r], neg(m[r][c]), m[row]);
            pivot_col.push_back(c);
            ++row;
        }
        for (std::size_t r = row; r < dim; ++r)
            if (m[r][n] != 0) return std::nullopt;
        FieldVector coeffs(n, 0);
        for (std::size_t r = 0; r < pivot_col.size(); ++r) coeffs[pivot_col[r]] = m[r][n];
        return coeffs;
    }

  private:
    std::uint32_t q_;
    std::vector<Symbol> inverse_;
};

}  // namespace capregion
