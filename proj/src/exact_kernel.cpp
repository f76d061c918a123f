#include "sumlevel/exact_kernel.hpp"

#include "sumlevel/detail/bigint.hpp"
#include "sumlevel/detail/sb_walk.hpp"
#include "sumlevel/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <utility>

namespace sumlevel {

namespace {

void check_level(const char* what, int n, int guard) {
    if (n < 0) {
        throw DomainError(std::string(what) + ": negative level");
    }
    if (n > guard) {
        throw LevelTooLarge(what, n, guard);
    }
    if (n > detail::kMaxWalkLevel) {
        throw LevelTooLarge(what, n, detail::kMaxWalkLevel);
    }
}

using detail::to_big;

// x ↦ (a·x + b)/(c·x + d)
struct Mobius {
    BigInt a, b, c, d;

    Mobius operator*(const Mobius& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

Mobius letter_map(Alphabet alphabet, char letter) {
    if (alphabet == Alphabet::SternBrocot) {
        return letter == 'A' ? Mobius{1, 0, 1, 1} : Mobius{0, 1, -1, 2};
    }
    return letter == 'L' ? Mobius{1, 0, 1, 1} : Mobius{0, 1, 1, 1};
}

char other_sb_letter(char c) { return c == 'A' ? 'B' : 'A'; }

} // namespace

SBInterval SBInterval::from_endpoints(const Rational& left, const Rational& right, int level,
                                      std::optional<std::uint64_t> index) {
    if (!(left < right)) {
        throw DomainError("interval endpoints out of order: " + left.str() + ", " + right.str());
    }
    if (left < Rational(0) || Rational(1) < right) {
        throw DomainError("interval not inside [0,1]");
    }
    SBInterval iv{left.numerator(), left.denominator(), right.numerator(), right.denominator(), level, index};
    if (!iv.is_unimodular()) {
        throw DomainError("endpoints " + left.str() + ", " + right.str() + " are not Stern-Brocot neighbours");
    }
    return iv;
}

// ---------------------------------------------------------------------------
// CFWord

CFWord::CFWord(std::vector<std::uint64_t> digits) : digits_(std::move(digits)) {
    if (std::any_of(digits_.begin(), digits_.end(), [](std::uint64_t a) { return a == 0; })) {
        throw DomainError("continued-fraction digits must be >= 1");
    }
}

CFWord::CFWord(std::initializer_list<std::uint64_t> digits) : CFWord(std::vector<std::uint64_t>(digits)) {}

CFWord CFWord::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == '[' || s.front() == ' ')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ']' || s.back() == ' ')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    std::vector<std::uint64_t> digits;
    while (!text.empty()) {
        const auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw DomainError("cannot parse continued-fraction digit '" + std::string(item) + "'");
        }
        digits.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return CFWord(std::move(digits));
}

std::uint64_t CFWord::digit_sum() const {
    std::uint64_t s = 0;
    for (auto a : digits_) {
        if (__builtin_add_overflow(s, a, &s)) {
            throw DomainError("digit sum overflows 64 bits");
        }
    }
    return s;
}

CFWord CFWord::shifted() const {
    if (digits_.empty()) {
        throw DomainError("cannot shift an empty word");
    }
    return CFWord(std::vector<std::uint64_t>(digits_.begin() + 1, digits_.end()));
}

CFWord CFWord::prefix(std::size_t k) const {
    k = std::min(k, digits_.size());
    return CFWord(std::vector<std::uint64_t>(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(k)));
}

std::vector<BigInt> CFWord::convergent_denominators() const {
    std::vector<BigInt> q;
    q.reserve(digits_.size() + 1);
    q.emplace_back(1);
    BigInt prev = 0;
    for (auto a : digits_) {
        BigInt next = to_big(a) * q.back() + prev;
        prev = q.back();
        q.push_back(std::move(next));
    }
    return q;
}

std::string CFWord::str() const {
    std::string s = "[[";
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(digits_[i]);
    }
    return s + "]]";
}

// ---------------------------------------------------------------------------
// BinaryCode

BinaryCode::BinaryCode(Alphabet alphabet, std::string letters)
    : alphabet_(alphabet), letters_(std::move(letters)) {
    if (letters_.empty()) {
        throw DomainError("empty code");
    }
    const char lo = alphabet_ == Alphabet::SternBrocot ? 'A' : 'L';
    const char hi = alphabet_ == Alphabet::SternBrocot ? 'B' : 'R';
    for (char c : letters_) {
        if (c != lo && c != hi) {
            throw DomainError(std::string("letter '") + c + "' not in alphabet {" + lo + "," + hi + "}");
        }
    }
}

// ---------------------------------------------------------------------------
// Stern–Brocot levels

std::vector<Rational> sb_level(int n, int guard) {
    check_level("sb_level", n, guard);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cur{{0, 1}, {1, 1}};
    for (int level = 1; level <= n; ++level) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> next;
        next.reserve(2 * cur.size() - 1);
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            next.push_back(cur[k]);
            next.emplace_back(cur[k].first + cur[k + 1].first, cur[k].second + cur[k + 1].second);
        }
        next.push_back(cur.back());
        cur.swap(next);
    }
    std::vector<Rational> out;
    out.reserve(cur.size());
    for (const auto& [s, t] : cur) {
        out.emplace_back(to_big(s), to_big(t));
    }
    return out;
}

std::vector<SBInterval> sb_intervals(int n, int guard) {
    check_level("sb_intervals", n, guard);
    std::vector<SBInterval> out;
    out.reserve(std::size_t{1} << n);
    detail::walk_sb_level(n, [&](std::uint64_t k, const detail::SBInterval64& iv) {
        out.push_back(SBInterval{to_big(iv.left_num), to_big(iv.left_den), to_big(iv.right_num),
                                 to_big(iv.right_den), n, k});
    });
    return out;
}

// ---------------------------------------------------------------------------
// Codings

SBInterval apply_code(const BinaryCode& code) {
    Mobius m{1, 0, 0, 1};
    for (char c : code.letters()) {
        m = m * letter_map(code.alphabet(), c);
    }
    Rational at0(m.b, m.d);
    Rational at1(BigInt(m.a + m.b), BigInt(m.c + m.d));
    if (at1 < at0) {
        std::swap(at0, at1);
    }
    return SBInterval::from_endpoints(at0, at1, static_cast<int>(code.size()));
}

CFWord code_to_cylinder(const BinaryCode& code) {
    const std::string& w = code.letters();
    std::vector<std::uint64_t> digits;
    if (code.alphabet() == Alphabet::Farey) {
        if (w.back() != 'R') {
            throw UntranslatableCode("Farey code " + w + " does not end in R");
        }
        std::uint64_t run = 1;
        for (char c : w) {
            if (c == 'L') {
                ++run;
            } else {
                digits.push_back(run);
                run = 1;
            }
        }
        return CFWord(std::move(digits));
    }

    if (w == "B") {
        return CFWord{1};
    }
    std::vector<std::uint64_t> runs;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        runs.push_back(j - i);
        i = j;
    }
    if (runs.size() < 2 || runs.back() != 1) {
        throw UntranslatableCode("Stern-Brocot code " + w + " does not end in a letter change");
    }
    runs.pop_back();
    if (w.front() == 'A') {
        runs.front() += 1;
        return CFWord(std::move(runs));
    }
    runs.insert(runs.begin(), 1);
    return CFWord(std::move(runs));
}

BinaryCode cylinder_to_farey_code(const CFWord& word) {
    if (word.empty()) {
        throw DomainError("empty cylinder word");
    }
    std::string letters;
    for (auto a : word.digits()) {
        letters.append(a - 1, 'L');
        letters.push_back('R');
    }
    return BinaryCode::farey(std::move(letters));
}

BinaryCode cylinder_to_sb_code(const CFWord& word) {
    if (word.empty()) {
        throw DomainError("empty cylinder word");
    }
    if (word.size() == 1 && word[0] == 1) {
        return BinaryCode::stern_brocot("B");
    }
    std::vector<std::uint64_t> runs;
    char letter = 'A';
    if (word[0] >= 2) {
        runs.push_back(word[0] - 1);
    } else {
        letter = 'B';
    }
    runs.insert(runs.end(), word.digits().begin() + 1, word.digits().end());
    std::string letters;
    for (auto r : runs) {
        letters.append(r, letter);
        letter = other_sb_letter(letter);
    }
    letters.push_back(letter);
    return BinaryCode::stern_brocot(std::move(letters));
}

namespace {

std::string bits_to_letters(int n, std::uint64_t bits, char zero, char one) {
    std::string s(static_cast<std::size_t>(n), zero);
    for (int i = 0; i < n; ++i) {
        if ((bits >> (n - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = one;
    }
    return s;
}

void check_index(int n, std::uint64_t k) {
    if (n < 1 || n > 63) {
        throw DomainError("code level must be in 1..63");
    }
    if (k < 1 || k > (std::uint64_t{1} << n)) {
        throw DomainError("interval index out of range for level " + std::to_string(n));
    }
}

} // namespace

BinaryCode farey_code_of_index(int n, std::uint64_t k) {
    check_index(n, k);
    const std::uint64_t b = k - 1;
    return BinaryCode::farey(bits_to_letters(n, b ^ (b >> 1), 'L', 'R'));
}

BinaryCode sb_code_of_index(int n, std::uint64_t k) {
    check_index(n, k);
    return BinaryCode::stern_brocot(bits_to_letters(n, k - 1, 'A', 'B'));
}

std::uint64_t index_of_code(const BinaryCode& code) {
    if (code.size() > 63) {
        throw DomainError("code longer than 63 letters has no 64-bit index");
    }
    const char one = code.alphabet() == Alphabet::SternBrocot ? 'B' : 'R';
    std::uint64_t bits = 0;
    for (char c : code.letters()) bits = (bits << 1) | (c == one ? 1U : 0U);
    if (code.alphabet() == Alphabet::Farey) {
        for (std::uint64_t shift = bits >> 1; shift != 0; shift >>= 1) bits ^= shift;
    }
    return bits + 1;
}

SBInterval cf_cylinder_interval(const CFWord& word) {
    if (word.empty()) {
        throw DomainError("empty cylinder word");
    }
    BigInt p_prev = 1, q_prev = 0, p = 0, q = 1;
    for (auto a : word.digits()) {
        const BigInt big_a = to_big(a);
        BigInt p_next = big_a * p + p_prev;
        BigInt q_next = big_a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
    }
    Rational end1(p, q);
    Rational end2(BigInt(p + p_prev), BigInt(q + q_prev));
    if (end2 < end1) {
        std::swap(end1, end2);
    }
    const std::uint64_t level = word.digit_sum();
    return SBInterval::from_endpoints(end1, end2, level > 1'000'000'000 ? -1 : static_cast<int>(level));
}

// ---------------------------------------------------------------------------
// Maps

Rational farey_map(const Rational& x) {
    if (x < Rational(0) || Rational(1) < x) {
        throw DomainError("farey_map: " + x.str() + " outside [0,1]");
    }
    const Rational one(1);
    if (x <= Rational(1, 2)) {
        return x / (one - x);
    }
    return (one - x) / x;
}

Rational gauss_map(const Rational& x) {
    if (x.is_zero()) {
        throw DomainError("gauss_map: division by zero at x = 0");
    }
    if (x < Rational(0) || Rational(1) < x) {
        throw DomainError("gauss_map: " + x.str() + " outside (0,1]");
    }
    const Rational inv = x.reciprocal();
    return inv - Rational(inv.floor(), BigInt(1));
}

CFWord cf_digits(const Rational& x, std::size_t max_k) {
    if (!(Rational(0) < x && x < Rational(1))) {
        throw DomainError("cf_digits: " + x.str() + " outside (0,1)");
    }
    BigInt num = x.numerator();
    BigInt den = x.denominator();
    BigInt a, r;
    std::vector<std::uint64_t> digits;
    while (sgn(num) != 0 && digits.size() < max_k) {
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
        if (!mpz_fits_ulong_p(a.get_mpz_t())) {
            throw DomainError("cf_digits: digit does not fit in 64 bits");
        }
        digits.push_back(mpz_get_ui(a.get_mpz_t()));
        den = num;
        num = r;
    }
    return CFWord(std::move(digits));
}

} // namespace sumlevel
