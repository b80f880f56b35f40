#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pglab/altmaps.hpp"

namespace pglab {

/// AbMax: every proper U has dim W/B(U,U) < dim V/U (m = n-3 intended).
/// DMax:  every proper U has dim W/(B(U,U)+F(U)) < dim V/U (m = n-2 intended).
enum class Mode { AbMax, DMax };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Intended codimension n - m of W for each mode.
std::size_t mode_gap(Mode mode);

struct SearchOptions {
    EnumerationGuard guard;
    /// Skip the bit-packed F_2 kernels; used to cross-check them.
    bool generic_only = false;
};

struct BadnessReport {
    std::uint32_t p = 2;
    std::size_t n = 0, m = 0;
    Mode mode = Mode::AbMax;
    /// N_h per scanned dimension h. After a first-hit search the hit
    /// dimension holds 1 (a lower bound) and later dimensions are absent.
    std::map<std::size_t, std::uint64_t> counts;
    std::optional<Subspace> witness;
    bool exhaustive = false;

    std::uint64_t total() const;
};

/// dim B(H,H) <= dim H - (n - m); for m = n-3 and dim H = 3 this is total isotropy.
bool is_bad_abmax(const AlternatingMap& b, const Subspace& h);

/// Odd p with surjective F and m = n-2: B(H,H) <= F(H) and ker F <= H.
/// Otherwise the defining inequality. For p = 2, F must be quadratic.
bool is_bad_dmax(const AlternatingMap& b, const PowerMap& f, const Subspace& h);

/// dim(B(H,H) + F(H)) <= dim H - (n - m), evaluated literally.
bool is_bad_dmax_definition(const AlternatingMap& b, const PowerMap& f, const Subspace& h);

/// First bad subspace in scan order (dimensions ascending, canonical order
/// within a dimension; odd-p DMax walks subspaces S < W and lifts F^{-1}(S)).
/// A dimension whose Grassmannian exceeds the guard ends the scan with
/// exhaustive = false.
BadnessReport find_bad_subspace(const AlternatingMap& b, const PowerMap& f, Mode mode,
                                const SearchOptions& opts = {});

/// Exact N_h for every candidate dimension. Throws GuardExceeded.
BadnessReport count_bad(const AlternatingMap& b, const PowerMap& f, Mode mode, const SearchOptions& opts = {});

/// Number of totally isotropic 3-dimensional subspaces, by scanning the
/// whole Grassmannian.
std::uint64_t count_isotropic_3(const AlternatingMap& b, const SearchOptions& opts = {});

/// Same count by extending isotropic planes P only: each contributes the
/// number of lines of P^perp / P, and every isotropic 3-space is reached
/// from its p^2 + p + 1 planes.
std::uint64_t count_isotropic_3_flags(const AlternatingMap& b, const SearchOptions& opts = {});

struct Certificate {
    std::uint32_t p = 2;
    std::size_t n = 0, m = 0;
    Mode mode = Mode::AbMax;
    std::uint64_t seed = 0;
    std::uint64_t max_attempts = 0;
    std::uint64_t attempts = 0;
    AlternatingMap b{2, 0, 0};
    PowerMap f;
    bool certified = false;
    std::optional<Subspace> witness;
};

/// Samples (B, F) for `mode` from the substream of `attempt`.
std::pair<AlternatingMap, PowerMap> sample_instance(std::uint32_t p, std::size_t n, Mode mode, Rng& rng);

/// Rejection sampling until a map without bad subspaces turns up. Attempt a
/// (1-based) draws from substream_seed(seed, a).
Certificate certify_loop(std::uint32_t p, std::size_t n, Mode mode, std::uint64_t seed, std::uint64_t max_attempts,
                         const SearchOptions& opts = {});

}  // namespace pglab
