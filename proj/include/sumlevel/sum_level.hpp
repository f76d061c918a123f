#pragma once

// Sum-level sets: the level-n Stern–Brocot intervals whose Farey code ends in R,
// i.e. the points whose continued-fraction digit partial sums hit n exactly.

#include "sumlevel/exact_kernel.hpp"
#include "sumlevel/rational.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace sumlevel {

inline constexpr int kDefaultExactGuard = 25;
inline constexpr int kDefaultFloatGuard = 36;
/// Leaf denominators s·(q+s) stay below 2^64 up to this level.
inline constexpr int kMaxTreeSumLevel = 44;

enum class FamilyTag {
    SumLevel,   ///< C_n
    Complement, ///< level-n intervals outside C_n
    Level,      ///< every level-n interval
};

std::string_view family_tag_name(FamilyTag tag);

/// Closed interval with rational endpoints, not necessarily a single SB interval.
struct ClosedInterval {
    Rational left;
    Rational right;

    Rational length() const { return right - left; }
    friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

struct IntervalFamily {
    int level = 0;
    FamilyTag tag = FamilyTag::Level;
    std::vector<SBInterval> members; ///< disjoint, increasing

    Rational measure() const;
};

/// Merges members 2i−1, 2i (1-based) of a sum-level family into one interval each.
std::vector<ClosedInterval> even_intervals(const IntervalFamily& sum_level);

enum class Method { Exact, Compensated, Operator };

std::string_view method_name(Method method);

struct MeasureValue {
    std::optional<Rational> exact;
    double approx = 0.0;
    Method method = Method::Exact;
};

/// C_n: intervals of level n with k ≡ 2, 3 (mod 4), in increasing order.
IntervalFamily enumerate_sum_level(int n, int guard = kDefaultEnumerationGuard);

/// Level-n intervals not in C_n.
IntervalFamily complement_family(int n, int guard = kDefaultEnumerationGuard);

/// λ(C_n) by exact summation over the Farey tree.
MeasureValue lambda_exact(int n, int guard = kDefaultExactGuard);

/// λ(C_n) in compensated double arithmetic; identical result for every thread count.
MeasureValue lambda_compensated(int n, int guard = kDefaultFloatGuard, unsigned threads = 0);

/// u0(F) ∪ u1(F) as a sorted family one level deeper.
IntervalFamily inverse_branch_image(const IntervalFamily& family);

/// Whether the preimage of C_n under the Farey map is exactly C_{n+1}.
bool pullback_check(int n, int guard = kDefaultEnumerationGuard);

/// λ{x in [[a1..ak]] : a_{k+1}(x) >= threshold} = 1/(q_k(threshold·q_k + q_{k−1})).
Rational tail_cylinder_measure(const CFWord& word, const BigInt& threshold);

/// ⌈n (ln n)^ε⌉ for n >= 2, ε > 0.
BigInt e_set_threshold(int n, double eps);

/// Exact measure of the union, over compositions (a1..ak) of n, of the tails a_{k+1} >= threshold.
Rational composition_tail_measure(int n, const BigInt& threshold, int guard = kDefaultExactGuard);

/// λ of the E-set at (n, ε), using threshold e_set_threshold(n, ε).
MeasureValue e_set_measure(int n, double eps, int guard = kDefaultExactGuard);

} // namespace sumlevel
