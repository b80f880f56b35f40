#include "pglab/ffcore/gf2.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace pglab::gf2 {

Row pack(std::span<const Residue> v) {
    if (v.size() > kMaxDim) throw DimensionMismatch("gf2::pack: more than 64 coordinates");
    Row r = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] & 1) r |= Row(1) << i;
    return r;
}

FpVector unpack(Row r, std::size_t n) {
    FpVector v(n, 0);
    for (std::size_t i = 0; i < n; ++i) v[i] = Residue((r >> i) & 1);
    return v;
}

std::size_t rank(std::span<const Row> rows) {
    SpanBuilder sb;
    for (auto r : rows) sb.insert(r);
    return sb.rank();
}

SubspaceList::SubspaceList(std::size_t n, std::size_t d) : n_(n), d_(d) {
    if (n > kMaxDim) throw DimensionMismatch("gf2::SubspaceList: ambient dimension above 64");
    GrassmannianStream s(2, n, d, EnumerationGuard{0, true});
    while (s.next()) {
        for (std::size_t r = 0; r < d; ++r) rows_.push_back(pack(s.row(r)));
        ++count_;
    }
}

Subspace SubspaceList::subspace(std::size_t i) const {
    std::vector<Residue> block;
    block.reserve(d_ * n_);
    for (auto r : rows(i)) {
        auto v = unpack(r, n_);
        block.insert(block.end(), v.begin(), v.end());
    }
    return Subspace::from_rref(2, n_, d_, block);
}

const SubspaceList& subspaces(std::size_t n, std::size_t d, const EnumerationGuard& guard) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<SubspaceList>> cache;
    check_guard(2, n, d, guard);
    std::lock_guard lock(mu);
    auto& slot = cache[{n, d}];
    if (!slot) slot = std::make_unique<SubspaceList>(n, d);
    return *slot;
}

}  // namespace pglab::gf2
