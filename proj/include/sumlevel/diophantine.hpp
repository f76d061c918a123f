#pragma once

// Digit statistics of seeded uniform samples and the exact measures they are
// compared against.

#include "sumlevel/exact_kernel.hpp"
#include "sumlevel/rational.hpp"
#include "sumlevel/sum_level.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace sumlevel {

inline constexpr int kDefaultSampleBits = 256;

/// x = numerator / 2^bits with the continued-fraction digits shared by every real
/// of its grid cell [x, x + 2^-bits], further capped at the largest k with q_k^2 <= 2^(bits-8).
struct DigitSample {
    std::uint64_t sample_id = 0;
    BigInt numerator;
    int bits = kDefaultSampleBits;
    CFWord digits;

    std::size_t valid_depth() const { return digits.size(); }
    Rational value() const;
};

/// 64-bit word i of the stream for `seed` (SplitMix64 finaliser in counter mode).
std::uint64_t stream_word(std::uint64_t seed, std::uint64_t i);

DigitSample make_sample(std::uint64_t seed, std::uint64_t sample_id, int bits = kDefaultSampleBits);

/// Samples first_id .. first_id+count−1; identical for every thread count.
std::vector<DigitSample> sample_digits(std::uint64_t seed, std::size_t count, int bits = kDefaultSampleBits,
                                       unsigned threads = 1, std::uint64_t first_id = 0);

/// max{k >= 0 : a1 + … + ak <= n}.
std::size_t theta(const CFWord& digits, std::uint64_t n);

struct StatRecord {
    std::uint64_t n = 0;
    std::optional<double> khintchine; ///< log(a_n/n)/log log n, n >= 3
    std::optional<double> algebraic;  ///< log(a_{n+1}/S_n)/log log S_n, S_n >= 3
    std::size_t theta = 0;
    std::optional<double> ratio; ///< a_{θ+1}/S_θ, θ > 0
};

/// Requires n+1 <= valid depth for every requested n.
std::vector<StatRecord> stat_series(const CFWord& digits, const std::vector<std::uint64_t>& n_grid);
std::vector<StatRecord> stat_series(const DigitSample& sample, const std::vector<std::uint64_t>& n_grid);

/// Some partial sum of the digits equals n.
bool in_sum_level(const CFWord& digits, std::uint64_t n);
/// Some partial sum equals n and the following digit is >= threshold.
bool in_e_set(const CFWord& digits, std::uint64_t n, const BigInt& threshold);
/// θ = θ_n > 0 and a_{θ+1} > ε·S_θ.
bool in_theta_tail(const CFWord& digits, std::uint64_t n, double eps);

/// ⌊ε·m⌋ + 1, the least digit with digit/m > ε.
BigInt ratio_threshold(double eps, std::uint64_t m);

/// Exact measure of {θ_n > 0, a_{θ_n+1}/S_{θ_n} > ε}.
Rational theta_tail_exact(int n, double eps, int guard = kDefaultExactGuard);

enum class Event { SumLevel, ESet, ThetaTail };

std::string_view event_name(Event event);

struct EventFrequency {
    Event event;
    int n;
    double eps;
    std::size_t hits = 0;
    std::size_t samples = 0;
    std::size_t undecided = 0; ///< samples whose valid digits cannot decide the event
    double frequency = 0.0;
    Rational exact;
    double sigma = 0.0; ///< binomial standard deviation sqrt(p(1−p)/N)
    double z = 0.0;
};

/// Empirical frequency of the event against its exact measure.
EventFrequency event_frequency(const std::vector<DigitSample>& samples, Event event, int n, double eps = 0.0);

} // namespace sumlevel
