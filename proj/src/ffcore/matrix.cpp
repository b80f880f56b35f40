#include "pglab/ffcore/matrix.hpp"

#include <algorithm>

namespace pglab {

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    require_matrix_prime(p);
}

FpMatrix FpMatrix::from_rows(std::uint32_t p, std::size_t cols, const std::vector<FpVector>& rows) {
    FpMatrix m(p, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw DimensionMismatch("row " + std::to_string(r) + " has length " +
                                    std::to_string(rows[r].size()) + ", expected " +
                                    std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
}

void FpMatrix::set(std::size_t r, std::size_t c, Residue v) {
    if (v >= p_) throw std::invalid_argument("matrix entry " + std::to_string(v) + " not reduced mod " +
                                             std::to_string(p_));
    data_[r * cols_ + c] = v;
}

FpVector FpMatrix::row_vector(std::size_t r) const {
    auto s = row(r);
    return FpVector(s.begin(), s.end());
}

std::vector<FpVector> FpMatrix::row_vectors() const {
    std::vector<FpVector> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row_vector(r));
    return out;
}

FpVector FpMatrix::multiply(std::span<const Residue> v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product: length mismatch");
    FpVector out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) acc += unsigned(at(r, c)) * v[c];
        out[r] = Residue(acc % p_);
    }
    return out;
}

RowEchelon rref(const FpMatrix& m) {
    PrimeField f(m.p());
    FpMatrix a = m;
    RowEchelon out;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
        std::size_t sel = lead;
        while (sel < a.rows() && a.at(sel, c) == 0) ++sel;
        if (sel == a.rows()) continue;
        if (sel != lead) {
            auto x = a.row(sel), y = a.row(lead);
            std::swap_ranges(x.begin(), x.end(), y.begin());
        }
        auto piv = a.row(lead);
        Residue s = f.inv(piv[c]);
        for (auto& e : piv) e = f.mul(e, s);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == lead) continue;
            auto row = a.row(r);
            Residue factor = row[c];
            if (factor == 0) continue;
            for (std::size_t j = c; j < a.cols(); ++j) row[j] = f.sub(row[j], f.mul(factor, piv[j]));
        }
        out.pivots.push_back(c);
        ++lead;
    }
    out.rank = lead;
    out.rref = std::move(a);
    return out;
}

std::size_t rank(const FpMatrix& m) { return rref(m).rank; }

SpanBuilder::SpanBuilder(const PrimeField& field, std::size_t dim)
    : field_(field), dim_(dim), rows_(dim * dim, 0), pivots_(dim, 0), scratch_(dim, 0) {}

void SpanBuilder::reduce(std::span<Residue> v) const {
    for (std::size_t i = 0; i < rank_; ++i) {
        Residue factor = v[pivots_[i]];
        if (factor == 0) continue;
        const Residue* row = rows_.data() + i * dim_;
        for (std::size_t j = 0; j < dim_; ++j)
            if (row[j]) v[j] = field_.sub(v[j], field_.mul(factor, row[j]));
    }
}

bool SpanBuilder::insert(std::span<const Residue> v) {
    if (v.size() != dim_) throw DimensionMismatch("span insert: length mismatch");
    if (rank_ == dim_) return false;
    Residue* slot = rows_.data() + rank_ * dim_;
    std::copy(v.begin(), v.end(), slot);
    std::span<Residue> w(slot, dim_);
    reduce(w);
    std::size_t c = 0;
    while (c < dim_ && w[c] == 0) ++c;
    if (c == dim_) return false;
    Residue s = field_.inv(w[c]);
    for (auto& e : w) e = field_.mul(e, s);
    pivots_[rank_++] = c;
    return true;
}

bool SpanBuilder::contains(std::span<const Residue> v) const {
    if (v.size() != dim_) throw DimensionMismatch("span membership: length mismatch");
    std::copy(v.begin(), v.end(), scratch_.begin());
    reduce(scratch_);
    return std::all_of(scratch_.begin(), scratch_.end(), [](Residue e) { return e == 0; });
}

FpMatrix SpanBuilder::to_rref() const {
    FpMatrix m(field_.p(), rank_, dim_);
    for (std::size_t i = 0; i < rank_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m.set(i, j, rows_[i * dim_ + j]);
    return rref(m).rref;
}

}  // namespace pglab
