#include "pglab/ffcore/grassmannian.hpp"

#include <algorithm>

namespace pglab {

void check_guard(std::uint32_t p, std::size_t n, std::size_t d, const EnumerationGuard& guard) {
    auto count = gaussian_binomial(unsigned(n), unsigned(d), p);
    if (!guard.allows(count))
        throw GuardExceeded("enumerating " + count.get_str() + " subspaces of dimension " + std::to_string(d) +
                            " in F_" + std::to_string(p) + "^" + std::to_string(n) + " exceeds guard " +
                            std::to_string(guard.limit));
}

GrassmannianStream::GrassmannianStream(std::uint32_t p, std::size_t n, std::size_t d, EnumerationGuard guard)
    : p_(p), n_(n), d_(d) {
    require_matrix_prime(p);
    if (d > n) throw std::invalid_argument("subspace dimension exceeds ambient dimension");
    check_guard(p, n, d, guard);
    pivots_.resize(d);
    for (std::size_t i = 0; i < d; ++i) pivots_[i] = i;
}

GrassmannianStream::GrassmannianStream(std::uint32_t p, std::size_t n, std::size_t d,
                                       std::vector<std::size_t> pivot_set)
    : p_(p), n_(n), d_(d), single_pivot_set_(true), pivots_(std::move(pivot_set)) {
    require_matrix_prime(p);
    if (pivots_.size() != d || !std::is_sorted(pivots_.begin(), pivots_.end()) ||
        std::adjacent_find(pivots_.begin(), pivots_.end()) != pivots_.end() || (d > 0 && pivots_.back() >= n))
        throw std::invalid_argument("invalid pivot-column set");
}

void GrassmannianStream::load_pivot_set() {
    rows_.assign(d_ * n_, 0);
    free_pos_.clear();
    std::vector<bool> is_pivot(n_, false);
    for (auto c : pivots_) is_pivot[c] = true;
    for (std::size_t r = 0; r < d_; ++r) {
        rows_[r * n_ + pivots_[r]] = 1;
        for (std::size_t c = pivots_[r] + 1; c < n_; ++c)
            if (!is_pivot[c]) free_pos_.push_back(r * n_ + c);
    }
}

bool GrassmannianStream::next_pivot_set() {
    if (single_pivot_set_) return false;
    // lexicographic successor of a d-combination of {0..n-1}
    std::size_t i = d_;
    while (i > 0) {
        --i;
        if (pivots_[i] < n_ - d_ + i) {
            ++pivots_[i];
            for (std::size_t j = i + 1; j < d_; ++j) pivots_[j] = pivots_[j - 1] + 1;
            return true;
        }
    }
    return false;
}

bool GrassmannianStream::next() {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        load_pivot_set();
        return true;
    }
    for (std::size_t k = free_pos_.size(); k > 0; --k) {
        Residue& digit = rows_[free_pos_[k - 1]];
        if (unsigned(digit) + 1 < p_) {
            ++digit;
            return true;
        }
        digit = 0;
    }
    if (!next_pivot_set()) {
        done_ = true;
        return false;
    }
    load_pivot_set();
    return true;
}

std::vector<std::vector<std::size_t>> GrassmannianStream::pivot_sets(std::size_t n, std::size_t d) {
    std::vector<std::vector<std::size_t>> out;
    if (d > n) return out;
    std::vector<std::size_t> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        std::size_t i = d;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (c[i] < n - d + i) {
                ++c[i];
                for (std::size_t j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return out;
}

std::vector<Subspace> enumerate_subspaces(std::uint32_t p, std::size_t n, std::size_t d, EnumerationGuard guard) {
    GrassmannianStream s(p, n, d, guard);
    std::vector<Subspace> out;
    while (s.next()) out.push_back(s.current());
    return out;
}

}  // namespace pglab
