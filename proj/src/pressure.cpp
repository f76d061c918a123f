#include "sumlevel/pressure.hpp"

#include "sumlevel/detail/bigint.hpp"
#include "sumlevel/detail/sb_walk.hpp"
#include "sumlevel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sumlevel {

namespace {

using detail::to_big;

// Streaming log Σ exp(x_i) with a compensated scaled accumulator.
class LogSumExp {
public:
    void add(double x) {
        if (x > max_) {
            const double scale = std::exp(max_ - x);
            sum_ *= scale;
            comp_ *= scale;
            max_ = x;
        }
        const double term = std::exp(x - max_);
        const double t = sum_ + term;
        comp_ += std::fabs(sum_) >= term ? (sum_ - t) + term : (term - t) + sum_;
        sum_ = t;
    }
    double value() const { return max_ + std::log(sum_ + comp_); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void check_pressure_level(int n, PressureFamily family, int guard) {
    const int lowest = family == PressureFamily::All ? 0 : 2;
    if (n < lowest) {
        throw DomainError("partition sum over " + std::string(pressure_family_name(family)) + " needs n >= " +
                          std::to_string(lowest));
    }
    if (n > guard) throw LevelTooLarge("partition_sum", n, guard);
    if (n > detail::kMaxWalkLevel) throw LevelTooLarge("partition_sum", n, detail::kMaxWalkLevel);
}

// Calls emit(t1, t2, t3) for merged pairs (diameter (t1+t3)/(t1 t2 t3)), or
// emit(t1, t2, 0) for single intervals (diameter 1/(t1 t2)).
template <class Emit>
void walk_family(int n, PressureFamily family, Emit&& emit) {
    std::uint64_t pending_left = 0;
    std::uint64_t pending_mid = 0;
    detail::walk_sb_level(n, [&](std::uint64_t k, const detail::SBInterval64& iv) {
        const bool in_c = detail::in_sum_level(k);
        switch (family) {
        case PressureFamily::All: emit(iv.left_den, iv.right_den, 0); break;
        case PressureFamily::SumLevel:
            if (in_c) emit(iv.left_den, iv.right_den, 0);
            break;
        case PressureFamily::Complement:
            if (!in_c) emit(iv.left_den, iv.right_den, 0);
            break;
        case PressureFamily::Even:
            if (in_c && ((k - 1) & 3U) == 1) {
                pending_left = iv.left_den;
                pending_mid = iv.right_den;
            } else if (in_c) {
                emit(pending_left, pending_mid, iv.right_den);
            }
            break;
        }
    });
}

double log_diameter(std::uint64_t t1, std::uint64_t t2, std::uint64_t t3) {
    const double base = -std::log(static_cast<double>(t1)) - std::log(static_cast<double>(t2));
    if (t3 == 0) return base;
    return base + std::log(static_cast<double>(t1 + t3)) - std::log(static_cast<double>(t3));
}

mpq_class pairwise_sum(const std::vector<mpq_class>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 0) return 0;
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

mpq_class integer_power(const mpq_class& base, int t) {
    mpz_class num;
    mpz_class den;
    const auto e = static_cast<unsigned long>(t < 0 ? -static_cast<long>(t) : t);
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
    mpq_class r = t < 0 ? mpq_class(den, num) : mpq_class(num, den);
    r.canonicalize();
    return r;
}

} // namespace

std::string_view pressure_family_name(PressureFamily family) {
    switch (family) {
    case PressureFamily::All: return "all";
    case PressureFamily::SumLevel: return "C";
    case PressureFamily::Complement: return "C-complement";
    case PressureFamily::Even: return "even";
    }
    return "?";
}

std::optional<PressureFamily> parse_pressure_family(std::string_view name) {
    for (auto f : {PressureFamily::All, PressureFamily::SumLevel, PressureFamily::Complement, PressureFamily::Even}) {
        if (pressure_family_name(f) == name) return f;
    }
    return std::nullopt;
}

double partition_sum(int n, double t, PressureFamily family, int guard) {
    check_pressure_level(n, family, guard);
    if (!std::isfinite(t)) throw DomainError("partition sum needs a finite t");
    LogSumExp acc;
    walk_family(n, family, [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) { acc.add(t * log_diameter(a, b, c)); });
    return acc.value();
}

double pressure_estimate(int n, double t, PressureFamily family, int guard) {
    if (n < 1) throw DomainError("pressure estimate needs n >= 1");
    return partition_sum(n, t, family, guard) / static_cast<double>(n);
}

PressureProbe pressure_probe(int n, double t, PressureFamily family, int guard) {
    const double log_sum = partition_sum(n, t, family, guard);
    return {t, family, n, log_sum, n > 0 ? log_sum / static_cast<double>(n) : 0.0};
}

Rational partition_sum_exact(int n, int t, PressureFamily family, int guard) {
    check_pressure_level(n, family, guard);
    std::vector<mpq_class> terms;
    walk_family(n, family, [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        mpq_class diam = c == 0 ? mpq_class(1, to_big(a) * to_big(b))
                                : mpq_class(to_big(a + c), to_big(a) * to_big(b) * to_big(c));
        diam.canonicalize();
        terms.push_back(integer_power(diam, t));
    });
    return Rational(pairwise_sum(terms, 0, terms.size()));
}

SandwichReport sandwich_check(int n, double t, int guard) {
    check_pressure_level(n, PressureFamily::SumLevel, guard);
    if (!std::isfinite(t)) throw DomainError("sandwich check needs a finite t");
    SandwichReport report;
    report.n = n;
    report.t = t;

    std::vector<std::pair<std::uint64_t, std::uint64_t>> previous;
    previous.reserve(std::size_t{1} << (n - 1));
    detail::walk_sb_level(n - 1, [&](std::uint64_t, const detail::SBInterval64& iv) {
        previous.emplace_back(iv.left_den, iv.right_den);
    });

    const auto n1 = static_cast<std::uint64_t>(n + 1);
    std::uint64_t best_a = 0;
    std::uint64_t best_b = 1;
    LogSumExp level_sum;
    LogSumExp previous_sum;
    std::size_t i = 0;
    detail::walk_sb_level(n, [&](std::uint64_t k, const detail::SBInterval64& iv) {
        if (!detail::in_sum_level(k)) return;
        const auto [jl, jr] = previous[i++];
        const std::uint64_t a = iv.left_den * iv.right_den;
        const std::uint64_t b = jl * jr;
        if (a < b || a > n1 * b) {
            if (report.per_pair_ok) report.first_bad_pair = i;
            report.per_pair_ok = false;
        }
        if (a > static_cast<std::uint64_t>(n) * b) ++report.factor_n_violations;
        if (a == n1 * b && std::min(jl, jr) != 1) report.extreme_only_at_unit_denominator = false;
        if (a * best_b > best_a * b) {
            best_a = a;
            best_b = b;
        }
        level_sum.add(t * log_diameter(iv.left_den, iv.right_den, 0));
        previous_sum.add(t * log_diameter(jl, jr, 0));
    });
    report.pairs = i;
    report.max_ratio = Rational(to_big(best_a), to_big(best_b));
    report.log_sum_level = level_sum.value();
    report.log_sum_previous = previous_sum.value();
    const double spread = std::fabs(t) * std::log(static_cast<double>(n + 1));
    report.log_bounds_ok = report.log_sum_level <= report.log_sum_previous + spread + kLogSlack &&
                           report.log_sum_level >= report.log_sum_previous - spread - kLogSlack;

    if (t == std::trunc(t) && std::fabs(t) <= 64) {
        const int ti = static_cast<int>(t);
        const mpq_class level_exact = partition_sum_exact(n, ti, PressureFamily::SumLevel, guard).raw();
        const mpq_class previous_exact = partition_sum_exact(n - 1, ti, PressureFamily::All, guard).raw();
        mpz_class factor;
        mpz_pow_ui(factor.get_mpz_t(), mpz_class(n + 1).get_mpz_t(), static_cast<unsigned long>(std::abs(ti)));
        report.exact_bounds_ok = previous_exact <= factor * level_exact && level_exact <= factor * previous_exact;
    }
    return report;
}

EvenSplitReport even_split_check(int n, double t, int guard) {
    check_pressure_level(n, PressureFamily::Even, guard);
    if (!std::isfinite(t)) throw DomainError("even split check needs a finite t");
    EvenSplitReport report;
    report.n = n;
    report.t = t;
    walk_family(n, PressureFamily::Even, [&](std::uint64_t t1, std::uint64_t, std::uint64_t t3) {
        // half lengths 1/(t1 t2) and 1/(t2 t3) have ratio t1/t3
        if (t1 > 2 * t3 || t3 > 2 * t1) report.halves_ratio_ok = false;
    });
    report.log_sum_even = partition_sum(n, t, PressureFamily::Even, guard);
    report.log_sum_level = partition_sum(n, t, PressureFamily::SumLevel, guard);
    const double at_one = (t - 1.0) * std::log(2.0);
    const double at_two = t * std::log(3.0) - std::log1p(std::exp2(t));
    report.log_lower = std::min(at_one, at_two);
    report.log_upper = std::max(at_one, at_two);
    const double diff = report.log_sum_even - report.log_sum_level;
    report.band_ok = diff >= report.log_lower - kLogSlack && diff <= report.log_upper + kLogSlack;
    return report;
}

Rational max_adjacent_denominator_ratio(int m, int guard) {
    check_pressure_level(m, PressureFamily::All, guard);
    std::uint64_t best_num = 1;
    std::uint64_t best_den = 1;
    detail::walk_sb_level(m, [&](std::uint64_t, const detail::SBInterval64& iv) {
        const std::uint64_t hi = std::max(iv.left_den, iv.right_den);
        const std::uint64_t lo = std::min(iv.left_den, iv.right_den);
        if (hi * best_den > best_num * lo) {
            best_num = hi;
            best_den = lo;
        }
    });
    return Rational(to_big(best_num), to_big(best_den));
}

} // namespace sumlevel
