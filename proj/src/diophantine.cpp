#include "sumlevel/diophantine.hpp"

#include "sumlevel/detail/bigint.hpp"
#include "sumlevel/detail/parallel.hpp"
#include "sumlevel/errors.hpp"

#include <cmath>

namespace sumlevel {

namespace {

using detail::to_big;

void require_depth(bool ok, const char* what) {
    if (!ok) {
        throw InsufficientDepth(std::string(what) + ": not enough valid continued-fraction digits");
    }
}

} // namespace

Rational DigitSample::value() const {
    BigInt den = 1;
    den <<= bits;
    return Rational(numerator, den);
}

std::uint64_t stream_word(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

// Digits of num/2^bits, stopping before a convergent denominator q with q^2 > limit.
std::vector<std::uint64_t> bounded_digits(BigInt num, int bits, const BigInt& limit) {
    BigInt den = 1;
    den <<= bits;
    BigInt q_prev = 0;
    BigInt q = 1;
    BigInt a;
    BigInt r;
    std::vector<std::uint64_t> digits;
    while (sgn(num) != 0) {
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
        if (!mpz_fits_ulong_p(a.get_mpz_t())) break;
        BigInt q_next = a * q + q_prev;
        if (q_next * q_next > limit) break;
        digits.push_back(mpz_get_ui(a.get_mpz_t()));
        q_prev = std::move(q);
        q = std::move(q_next);
        den = std::move(num);
        num = std::move(r);
    }
    return digits;
}

} // namespace

DigitSample make_sample(std::uint64_t seed, std::uint64_t sample_id, int bits) {
    if (bits < 64 || bits % 64 != 0) {
        throw DomainError("sample bits must be a positive multiple of 64");
    }
    const auto words = static_cast<std::uint64_t>(bits / 64);
    DigitSample s;
    s.sample_id = sample_id;
    s.bits = bits;
    s.numerator = 0;
    for (std::uint64_t j = 0; j < words; ++j) {
        s.numerator <<= 64;
        s.numerator += to_big(stream_word(seed, sample_id * words + j));
    }

    BigInt limit = 1;
    limit <<= bits - 8;
    // Cylinders are intervals, so digits shared by both cell endpoints hold on the whole cell.
    auto digits = bounded_digits(s.numerator, bits, limit);
    const auto upper = bounded_digits(s.numerator + 1, bits, limit);
    std::size_t common = 0;
    while (common < digits.size() && common < upper.size() && digits[common] == upper[common]) ++common;
    digits.resize(common);
    s.digits = CFWord(std::move(digits));
    return s;
}

std::vector<DigitSample> sample_digits(std::uint64_t seed, std::size_t count, int bits, unsigned threads,
                                       std::uint64_t first_id) {
    if (count < 1) {
        throw DomainError("sample count must be >= 1");
    }
    std::vector<DigitSample> out(count);
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    detail::parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(count, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            out[i] = make_sample(seed, first_id + i, bits);
        }
    });
    return out;
}

std::size_t theta(const CFWord& digits, std::uint64_t n) {
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
        if (digits[k] > n - sum) return k;
        sum += digits[k];
    }
    require_depth(sum == n, "theta");
    return digits.size();
}

std::vector<StatRecord> stat_series(const CFWord& digits, const std::vector<std::uint64_t>& n_grid) {
    std::vector<StatRecord> out;
    out.reserve(n_grid.size());
    for (auto n : n_grid) {
        if (n < 1) throw DomainError("stat_series index must be >= 1");
        require_depth(n + 1 <= digits.size(), "stat_series");
        StatRecord rec;
        rec.n = n;
        const double nd = static_cast<double>(n);
        if (n >= 3) {
            rec.khintchine = std::log(static_cast<double>(digits[n - 1]) / nd) / std::log(std::log(nd));
        }
        std::uint64_t partial = 0;
        for (std::size_t i = 0; i < n; ++i) partial += digits[i];
        if (partial >= 3) {
            const double s = static_cast<double>(partial);
            rec.algebraic = std::log(static_cast<double>(digits[n]) / s) / std::log(std::log(s));
        }
        rec.theta = theta(digits, n);
        if (rec.theta > 0) {
            std::uint64_t s = 0;
            for (std::size_t i = 0; i < rec.theta; ++i) s += digits[i];
            rec.ratio = static_cast<double>(digits[rec.theta]) / static_cast<double>(s);
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<StatRecord> stat_series(const DigitSample& sample, const std::vector<std::uint64_t>& n_grid) {
    return stat_series(sample.digits, n_grid);
}

bool in_sum_level(const CFWord& digits, std::uint64_t n) {
    std::uint64_t sum = 0;
    for (auto a : digits.digits()) {
        if (a > n - sum) return false;
        sum += a;
        if (sum == n) return true;
    }
    require_depth(false, "in_sum_level");
    return false;
}

bool in_e_set(const CFWord& digits, std::uint64_t n, const BigInt& threshold) {
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
        if (digits[k] > n - sum) return false;
        sum += digits[k];
        if (sum == n) {
            require_depth(k + 1 < digits.size(), "in_e_set");
            return to_big(digits[k + 1]) >= threshold;
        }
    }
    require_depth(false, "in_e_set");
    return false;
}

BigInt ratio_threshold(double eps, std::uint64_t m) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw DomainError("ratio threshold needs a finite eps > 0");
    }
    const long double product = std::floor(static_cast<long double>(eps) * static_cast<long double>(m));
    BigInt out;
    mpz_set_d(out.get_mpz_t(), static_cast<double>(product));
    return out + 1;
}

bool in_theta_tail(const CFWord& digits, std::uint64_t n, double eps) {
    const std::size_t k = theta(digits, n);
    if (k == 0) return false;
    require_depth(k < digits.size(), "in_theta_tail");
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k; ++i) s += digits[i];
    return to_big(digits[k]) >= ratio_threshold(eps, s);
}

Rational theta_tail_exact(int n, double eps, int guard) {
    if (n < 2) throw DomainError("theta tail needs n >= 2");
    if (n > guard) throw LevelTooLarge("theta_tail_exact", n, guard);
    Rational total(0);
    for (int m = 1; m <= n; ++m) {
        BigInt threshold = ratio_threshold(eps, static_cast<std::uint64_t>(m));
        const BigInt clock = n - m + 1;
        if (threshold < clock) threshold = clock;
        total += composition_tail_measure(m, threshold, guard);
    }
    return total;
}

std::string_view event_name(Event event) {
    switch (event) {
    case Event::SumLevel: return "C";
    case Event::ESet: return "E";
    case Event::ThetaTail: return "theta-tail";
    }
    return "?";
}

EventFrequency event_frequency(const std::vector<DigitSample>& samples, Event event, int n, double eps) {
    EventFrequency f{event, n, eps, 0, 0, 0, 0.0, Rational(0), 0.0, 0.0};
    const auto un = static_cast<std::uint64_t>(n);
    BigInt threshold;
    switch (event) {
    case Event::SumLevel: f.exact = *lambda_exact(n).exact; break;
    case Event::ESet:
        threshold = e_set_threshold(n, eps);
        f.exact = *e_set_measure(n, eps).exact;
        break;
    case Event::ThetaTail: f.exact = theta_tail_exact(n, eps); break;
    }
    for (const auto& s : samples) {
        try {
            bool hit = false;
            switch (event) {
            case Event::SumLevel: hit = in_sum_level(s.digits, un); break;
            case Event::ESet: hit = in_e_set(s.digits, un, threshold); break;
            case Event::ThetaTail: hit = in_theta_tail(s.digits, un, eps); break;
            }
            ++f.samples;
            if (hit) ++f.hits;
        } catch (const InsufficientDepth&) {
            ++f.undecided;
        }
    }
    const double p = f.exact.to_double();
    const auto count = static_cast<double>(f.samples);
    f.frequency = f.samples > 0 ? static_cast<double>(f.hits) / count : 0.0;
    f.sigma = f.samples > 0 ? std::sqrt(p * (1.0 - p) / count) : 0.0;
    f.z = f.sigma > 0.0 ? (f.frequency - p) / f.sigma : 0.0;
    return f;
}

} // namespace sumlevel
