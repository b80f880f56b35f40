#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pglab/ffcore/field.hpp"

namespace pglab {

/// Dense row-major matrix over F_p with reduced byte entries.
class FpMatrix {
  public:
    FpMatrix() : FpMatrix(2, 0, 0) {}
    FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);

    /// Rows must all have length `cols` and reduced entries.
    static FpMatrix from_rows(std::uint32_t p, std::size_t cols, const std::vector<FpVector>& rows);
    static FpMatrix identity(std::uint32_t p, std::size_t n);

    std::uint32_t p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Residue at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Residue v);

    std::span<const Residue> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    FpVector row_vector(std::size_t r) const;
    std::vector<FpVector> row_vectors() const;

    std::span<const Residue> data() const { return data_; }

    FpVector multiply(std::span<const Residue> v) const;

    bool operator==(const FpMatrix& other) const = default;

  private:
    std::uint32_t p_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Residue> data_;
};

struct RowEchelon {
    FpMatrix rref;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

/// Unique reduced row echelon form. Zero rows are kept at the bottom so the
/// shape of the input is preserved.
RowEchelon rref(const FpMatrix& m);

std::size_t rank(const FpMatrix& m);

/// Incremental echelon basis of a growing span in F_p^dim. Used where the
/// caller wants to stop as soon as the rank crosses a threshold.
class SpanBuilder {
  public:
    SpanBuilder(const PrimeField& field, std::size_t dim);

    /// Returns true when v was independent of the current span.
    bool insert(std::span<const Residue> v);
    std::size_t rank() const { return rank_; }
    bool contains(std::span<const Residue> v) const;
    void clear() { rank_ = 0; }

    /// Canonical RREF rows of the span built so far.
    FpMatrix to_rref() const;

  private:
    void reduce(std::span<Residue> v) const;

    PrimeField field_;
    std::size_t dim_;
    std::size_t rank_ = 0;
    std::vector<Residue> rows_;  // rank_ rows, each normalised at its pivot
    std::vector<std::size_t> pivots_;
    mutable std::vector<Residue> scratch_;
};

}  // namespace pglab
