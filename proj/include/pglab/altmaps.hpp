#pragma once

#include <variant>
#include <vector>

#include "pglab/ffcore/gf2.hpp"
#include "pglab/ffcore/subspace.hpp"
#include "pglab/ffcore/wedge.hpp"
#include "pglab/random.hpp"

namespace pglab {

/// Alternating bilinear map B: F_p^n x F_p^n -> F_p^m stored as the m x C(n,2)
/// matrix of the induced linear map V ^ V -> W (wedge coordinates in
/// WedgeIndex order). Row k is the functional B_k.
class AlternatingMap {
  public:
    /// Zero map.
    AlternatingMap(std::uint32_t p, std::size_t n, std::size_t m);
    AlternatingMap(std::size_t n, FpMatrix coeff);

    /// Form on F_p^n (n even) with B(e_1,e_2) = B(e_3,e_4) = ... = f_1, m = 1.
    static AlternatingMap standard_symplectic(std::uint32_t p, std::size_t n);

    std::uint32_t p() const { return coeff_.p(); }
    std::size_t n() const { return n_; }
    std::size_t m() const { return coeff_.rows(); }
    const FpMatrix& coeff() const { return coeff_; }
    const WedgeIndex& wedge_index() const { return idx_; }

    /// Coefficient of pair (i, j), i < j, in coordinate k.
    Residue pair_coeff(std::size_t k, std::size_t i, std::size_t j) const {
        return coeff_.at(k, idx_.index(i, j));
    }
    void set_pair_coeff(std::size_t k, std::size_t i, std::size_t j, Residue v) {
        coeff_.set(k, idx_.index(i, j), v);
    }

    FpVector apply(std::span<const Residue> u, std::span<const Residue> v) const;

    bool operator==(const AlternatingMap& other) const { return n_ == other.n_ && coeff_ == other.coeff_; }

  private:
    std::size_t n_;
    FpMatrix coeff_;
    WedgeIndex idx_;
};

/// Linear p-power map F: F_p^n -> F_p^m (p odd) as an m x n matrix.
class LinearPowerMap {
  public:
    explicit LinearPowerMap(FpMatrix matrix);

    std::uint32_t p() const { return matrix_.p(); }
    std::size_t n() const { return matrix_.cols(); }
    std::size_t m() const { return matrix_.rows(); }
    const FpMatrix& matrix() const { return matrix_; }

    FpVector apply(std::span<const Residue> x) const { return matrix_.multiply(x); }
    std::size_t rank() const { return pglab::rank(matrix_); }
    bool is_surjective() const { return rank() == m(); }
    Subspace kernel() const { return nullspace(matrix_); }

    bool operator==(const LinearPowerMap& other) const = default;

  private:
    FpMatrix matrix_;
};

/// Quadratic map F: F_2^n -> F_2^m with F_k(x) = sum_{i<=j} Q_k[i,j] x_i x_j.
/// Row k of coeff() holds Q_k in the order (0,0),(0,1),...,(0,n-1),(1,1),...
class QuadraticMap {
  public:
    QuadraticMap(std::size_t n, std::size_t m);
    QuadraticMap(std::size_t n, FpMatrix coeff);

    std::size_t n() const { return n_; }
    std::size_t m() const { return coeff_.rows(); }
    const FpMatrix& coeff() const { return coeff_; }

    /// Column of (i, j), i <= j.
    std::size_t slot(std::size_t i, std::size_t j) const;
    Residue q(std::size_t k, std::size_t i, std::size_t j) const { return coeff_.at(k, slot(i, j)); }
    void set_q(std::size_t k, std::size_t i, std::size_t j, Residue v) { coeff_.set(k, slot(i, j), v); }

    FpVector apply(std::span<const Residue> x) const;

    bool operator==(const QuadraticMap& other) const = default;

  private:
    std::size_t n_;
    FpMatrix coeff_;
};

/// The p-power map carried alongside B: absent (F = 0 for odd-p ab-max),
/// linear (odd p) or quadratic (p = 2).
using PowerMap = std::variant<std::monostate, LinearPowerMap, QuadraticMap>;

AlternatingMap sample_alternating(std::uint32_t p, std::size_t n, std::size_t m, Rng& rng);
QuadraticMap sample_quadratic(std::size_t n, std::size_t m, Rng& rng);

FpVector apply_B(const AlternatingMap& b, std::span<const Residue> u, std::span<const Residue> v);
FpVector apply_F_quad(const QuadraticMap& f, std::span<const Residue> x);

/// B(x,y) = F(x+y) + F(x) + F(y); its pair (i,j) coefficient is Q_k[i,j].
AlternatingMap associated_B(const QuadraticMap& f);

/// Quadratic map with zero diagonal whose associated alternating map is b (p = 2).
QuadraticMap zero_diagonal_quadratic(const AlternatingMap& b);

/// Projection F(e_i) = f_i for i < m, F(e_i) = 0 otherwise.
LinearPowerMap canonical_linear_F(std::uint32_t p, std::size_t n, std::size_t m);

/// Span of B(H, H).
Subspace image_span_B(const AlternatingMap& b, const Subspace& h);
/// Span of F(H); for quadratic F this is span{F(b_i)} + B(H,H).
Subspace image_span_F(const LinearPowerMap& f, const Subspace& h);
Subspace image_span_F(const QuadraticMap& f, const Subspace& h);

/// B(V, V) = W.
bool is_surjective(const AlternatingMap& b);

/// Fast evaluation of B for odd p: out = B(u, v).
class AltEvaluator {
  public:
    explicit AltEvaluator(const AlternatingMap& b);

    void eval(std::span<const Residue> u, std::span<const Residue> v, std::span<Residue> out) const;
    /// Linear functionals x -> B_k(u, x), written as an m x n block.
    void left_functionals(std::span<const Residue> u, std::span<Residue> out) const;

    const PrimeField& field() const { return field_; }
    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }

  private:
    PrimeField field_;
    std::size_t n_, m_;
    // antisymmetric n x n block per coordinate, stored [k][i][j]
    std::vector<Residue> forms_;
    mutable std::vector<std::uint32_t> acc_;
};

namespace gf2 {

/// Bit-packed alternating map over F_2. W-vectors are m-bit words.
class AltForm {
  public:
    explicit AltForm(const AlternatingMap& b);
    /// pair_masks[idx.index(i,j)] = B(e_i, e_j) as an m-bit word.
    AltForm(std::size_t n, std::size_t m, std::span<const Row> pair_masks);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }

    Row eval(Row u, Row v) const {
        Row out = 0;
        if (!table_.empty()) {
            const std::size_t stride = std::size_t(1) << n_;
            while (u) {
                int i = std::countr_zero(u);
                out ^= table_[i * stride + v];
                u &= u - 1;
            }
            return out;
        }
        while (u) {
            int i = std::countr_zero(u);
            Row w = v;
            while (w) {
                out ^= pair_[i * n_ + std::countr_zero(w)];
                w &= w - 1;
            }
            u &= u - 1;
        }
        return out;
    }

    /// B(e_i, e_j) for any i, j (antisymmetric, zero diagonal).
    Row pair(std::size_t i, std::size_t j) const { return pair_[i * n_ + j]; }

  private:
    void build();

    std::size_t n_, m_;
    std::vector<Row> pair_;   // n x n
    std::vector<Row> table_;  // n x 2^n, table_[i][v] = B(e_i, v); small n only
};

/// Bit-packed quadratic map over F_2.
class QuadForm {
  public:
    explicit QuadForm(const QuadraticMap& f);

    Row eval(Row x) const {
        Row out = 0;
        Row rest = x;
        while (rest) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            out ^= diag_[i] ^ assoc_.eval(Row(1) << i, rest);
        }
        return out;
    }
    Row diag(std::size_t i) const { return diag_[i]; }
    const AltForm& assoc() const { return assoc_; }

  private:
    std::vector<Row> diag_;
    AltForm assoc_;
};

}  // namespace gf2

}  // namespace pglab
