#pragma once

#include <cstdint>

namespace sumlevel::detail {

/// Level-n Stern–Brocot interval with machine-word endpoints.
struct SBInterval64 {
    std::uint64_t left_num;
    std::uint64_t left_den;
    std::uint64_t right_num;
    std::uint64_t right_den;
};

/// Denominators stay below Fib(n+2), which fits in 64 bits up to this level.
inline constexpr int kMaxWalkLevel = 88;

namespace walk_impl {

template <class Visit>
void descend(const SBInterval64& iv, int remaining, std::uint64_t& k, Visit& visit) {
    if (remaining == 0) {
        visit(++k, iv);
        return;
    }
    const std::uint64_t mn = iv.left_num + iv.right_num;
    const std::uint64_t md = iv.left_den + iv.right_den;
    descend(SBInterval64{iv.left_num, iv.left_den, mn, md}, remaining - 1, k, visit);
    descend(SBInterval64{mn, md, iv.right_num, iv.right_den}, remaining - 1, k, visit);
}

} // namespace walk_impl

/// Calls visit(k, interval) for k = 1..2^n in increasing order.
template <class Visit>
void walk_sb_level(int n, Visit&& visit) {
    std::uint64_t k = 0;
    walk_impl::descend(SBInterval64{0, 1, 1, 1}, n, k, visit);
}

/// Whether the k-th interval of a level lies in C_n, i.e. its Farey code
/// (Gray code of k−1) ends in R: k ≡ 2 or 3 (mod 4).
constexpr bool in_sum_level(std::uint64_t k) {
    const std::uint64_t r = (k - 1) & 3U;
    return r == 1 || r == 2;
}

} // namespace sumlevel::detail
