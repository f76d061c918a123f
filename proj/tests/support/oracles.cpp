#include "oracles.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>

namespace oracle {

std::vector<Rational> mediant_level(int n) {
    std::vector<Rational> level{Rational(0), Rational(1)};
    for (int step = 0; step < n; ++step) {
        std::vector<Rational> next;
        for (std::size_t i = 0; i + 1 < level.size(); ++i) {
            next.push_back(level[i]);
            next.push_back(sumlevel::mediant(level[i], level[i + 1]));
        }
        next.push_back(level.back());
        level = std::move(next);
    }
    return level;
}

std::vector<std::vector<std::uint64_t>> compositions(int n) {
    std::vector<std::vector<std::uint64_t>> out;
    const std::uint64_t masks = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        std::vector<std::uint64_t> word;
        std::uint64_t run = 1;
        for (int i = 0; i < n - 1; ++i) {
            if ((mask >> i) & 1U) {
                word.push_back(run);
                run = 1;
            } else {
                ++run;
            }
        }
        word.push_back(run);
        out.push_back(std::move(word));
    }
    return out;
}

Rational composition_lambda(int n) {
    std::vector<mpz_class> dens;
    for (const auto& word : compositions(n)) {
        mpz_class q_prev = 0;
        mpz_class q = 1;
        for (auto a : word) {
            mpz_class next = mpz_class(static_cast<unsigned long>(a)) * q + q_prev;
            q_prev = q;
            q = next;
        }
        dens.push_back(q * (q + q_prev));
    }
    mpz_class lcm = 1;
    for (const auto& d : dens) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    mpz_class num = 0;
    for (const auto& d : dens) num += lcm / d;
    return Rational(num, lcm);
}

std::pair<double, double> float_code_interval(const std::string& letters, bool stern_brocot) {
    auto apply = [&](double x) {
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
            switch (*it) {
            case 'A':
            case 'L': x = x / (1.0 + x); break;
            case 'B': x = 1.0 / (2.0 - x); break;
            case 'R': x = 1.0 / (1.0 + x); break;
            }
        }
        return x;
    };
    (void)stern_brocot;
    const double a = apply(0.0);
    const double b = apply(1.0);
    return {std::min(a, b), std::max(a, b)};
}

Rational backward_cf(const std::vector<std::uint64_t>& digits, const Rational& y) {
    Rational x = y;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        x = (Rational(static_cast<long>(*it)) + x).reciprocal();
    }
    return x;
}

Rational union_measure(std::vector<std::pair<Rational, Rational>> intervals) {
    std::sort(intervals.begin(), intervals.end());
    Rational total(0);
    bool open = false;
    Rational lo, hi;
    for (const auto& [a, b] : intervals) {
        if (open && a <= hi) {
            if (hi < b) hi = b;
            continue;
        }
        if (open) total += hi - lo;
        lo = a;
        hi = b;
        open = true;
    }
    if (open) total += hi - lo;
    return total;
}

namespace {

std::pair<Rational, Rational> tail_interval(const std::vector<std::uint64_t>& word, std::uint64_t threshold) {
    const Rational a = backward_cf(word, Rational(0));
    const Rational b = backward_cf(word, Rational(1, static_cast<long>(threshold)));
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

Rational tail_union_measure(int n, std::uint64_t threshold) {
    std::vector<std::pair<Rational, Rational>> parts;
    for (const auto& word : compositions(n)) parts.push_back(tail_interval(word, threshold));
    return union_measure(std::move(parts));
}

Rational theta_tail_union_measure(int n, double eps) {
    std::vector<std::pair<Rational, Rational>> parts;
    for (int m = 1; m <= n; ++m) {
        const auto by_ratio = static_cast<std::uint64_t>(std::floor(eps * m)) + 1;
        const auto by_clock = static_cast<std::uint64_t>(n - m + 1);
        for (const auto& word : compositions(m)) parts.push_back(tail_interval(word, std::max(by_ratio, by_clock)));
    }
    return union_measure(std::move(parts));
}

long double power_sum(int n, double t) {
    const auto level = mediant_level(n);
    long double total = 0;
    for (std::size_t i = 0; i + 1 < level.size(); ++i) {
        const long double d = (level[i + 1] - level[i]).to_double();
        total += std::pow(d, static_cast<long double>(t));
    }
    return total;
}

} // namespace oracle
