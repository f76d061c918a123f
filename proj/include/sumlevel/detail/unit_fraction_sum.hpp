#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>

namespace sumlevel::detail {

inline void lcm_into(mpz_class& acc, std::uint64_t d) {
    mpz_class t;
    mpz_import(t.get_mpz_t(), 1, 1, sizeof(d), 0, 0, &d);
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), t.get_mpz_t());
}
inline void lcm_into(mpz_class& acc, const mpz_class& d) { mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), d.get_mpz_t()); }

inline void add_quotient(mpz_class& num, const mpz_class& lcm, std::uint64_t d) {
    mpz_class t;
    mpz_import(t.get_mpz_t(), 1, 1, sizeof(d), 0, 0, &d);
    mpz_divexact(t.get_mpz_t(), lcm.get_mpz_t(), t.get_mpz_t());
    num += t;
}
inline void add_quotient(mpz_class& num, const mpz_class& lcm, const mpz_class& d) {
    mpz_class t;
    mpz_divexact(t.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    num += t;
}

inline constexpr int kLeafBlockDepth = 4;

namespace unit_sum_impl {

template <class Node, class Expand, class LeafDen, class Den>
void collect(const Node& node, int depth, Expand& expand, LeafDen& leaf_den, std::array<Den, 1U << kLeafBlockDepth>& out,
             std::size_t& used) {
    if (depth == 0) {
        out[used++] = leaf_den(node);
        return;
    }
    const auto [left, right] = expand(node);
    collect(left, depth - 1, expand, leaf_den, out, used);
    collect(right, depth - 1, expand, leaf_den, out, used);
}

} // namespace unit_sum_impl

/// Exact Σ 1/leaf_den(leaf) over the leaves of the binary tree of the given depth
/// below `root`, where expand(node) returns its (left, right) children.
///
/// Binary splitting: blocks of up to 16 leaves are summed over their common
/// multiple and the block sums are combined pairwise as reduced fractions.
template <class Node, class Expand, class LeafDen>
mpq_class sum_unit_fractions(const Node& root, int depth, Expand&& expand, LeafDen&& leaf_den) {
    if (depth <= kLeafBlockDepth) {
        using Den = std::decay_t<decltype(leaf_den(root))>;
        std::array<Den, 1U << kLeafBlockDepth> dens{};
        std::size_t used = 0;
        unit_sum_impl::collect(root, depth, expand, leaf_den, dens, used);
        mpz_class lcm = 1;
        for (std::size_t i = 0; i < used; ++i) lcm_into(lcm, dens[i]);
        mpz_class num = 0;
        for (std::size_t i = 0; i < used; ++i) add_quotient(num, lcm, dens[i]);
        mpq_class r(num, lcm);
        r.canonicalize();
        return r;
    }
    const auto [left, right] = expand(root);
    return sum_unit_fractions(left, depth - 1, expand, leaf_den) + sum_unit_fractions(right, depth - 1, expand, leaf_den);
}

} // namespace sumlevel::detail
