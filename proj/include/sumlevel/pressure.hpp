#pragma once

// Partition sums Σ diam(I)^t over Stern–Brocot families and the exact
// comparison between the sum-level family and the previous full level.

#include "sumlevel/exact_kernel.hpp"
#include "sumlevel/rational.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace sumlevel {

enum class PressureFamily {
    All,        ///< every level-n interval
    SumLevel,   ///< C_n
    Complement, ///< level-n intervals outside C_n
    Even,       ///< C_n with adjacent members merged pairwise
};

std::string_view pressure_family_name(PressureFamily family);
std::optional<PressureFamily> parse_pressure_family(std::string_view name);

inline const std::vector<double> kDefaultPressureTs = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

struct PressureProbe {
    double t;
    PressureFamily family;
    int n;
    double log_sum;
    double estimate;
};

/// log Σ diam(I)^t over the family, by streaming log-sum-exp in increasing order.
double partition_sum(int n, double t, PressureFamily family, int guard = kDefaultEnumerationGuard);

/// partition_sum / n.
double pressure_estimate(int n, double t, PressureFamily family, int guard = kDefaultEnumerationGuard);

PressureProbe pressure_probe(int n, double t, PressureFamily family, int guard = kDefaultEnumerationGuard);

/// Σ diam(I)^t as an exact rational for integer t.
Rational partition_sum_exact(int n, int t, PressureFamily family, int guard = kDefaultEnumerationGuard);

inline constexpr double kLogSlack = 1e-12;

/// The i-th member I of C_n is paired with the i-th interval J of level n−1;
/// with a, b the endpoint-denominator products of I and J, diam(J)/(n+1) <= diam(I) <= diam(J)
/// reads b <= a <= (n+1)·b.
struct SandwichReport {
    int n = 0;
    double t = 0.0;
    std::size_t pairs = 0;
    bool per_pair_ok = true;
    std::optional<std::size_t> first_bad_pair; ///< 1-based
    /// Pairs with a > n·b, i.e. where the tighter factor n would fail.
    std::size_t factor_n_violations = 0;
    /// Largest a/b observed, and whether a/b = n+1 happens only where J has an endpoint denominator 1.
    Rational max_ratio{0};
    bool extreme_only_at_unit_denominator = true;
    double log_sum_level = 0.0;      ///< log Σ_{C_n} diam^t
    double log_sum_previous = 0.0;   ///< log Σ_{level n−1} diam^t
    bool log_bounds_ok = true;
    /// Exact comparison of the two sums, available for integer t.
    std::optional<bool> exact_bounds_ok;

    bool passed() const { return per_pair_ok && extreme_only_at_unit_denominator && log_bounds_ok && exact_bounds_ok.value_or(true); }
};

SandwichReport sandwich_check(int n, double t, int guard = kDefaultEnumerationGuard);

/// Σ_even diam^t / Σ_{C_n} diam^t lies between (1+ρ)^t/(1+ρ^t) at ρ = 1 and ρ = 2,
/// since each even interval splits into halves with length ratio ρ in [1/2, 2].
struct EvenSplitReport {
    int n = 0;
    double t = 0.0;
    bool halves_ratio_ok = true; ///< every half-length ratio in [1/2, 2], checked on integers
    double log_sum_even = 0.0;
    double log_sum_level = 0.0;
    double log_lower = 0.0;
    double log_upper = 0.0;
    bool band_ok = true;

    bool passed() const { return halves_ratio_ok && band_ok; }
};

EvenSplitReport even_split_check(int n, double t, int guard = kDefaultEnumerationGuard);

/// max over adjacent level-m fractions s/q < s'/q' of max(q/q', q'/q).
Rational max_adjacent_denominator_ratio(int m, int guard = kDefaultEnumerationGuard);

} // namespace sumlevel
