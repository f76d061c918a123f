#pragma once

// Stern–Brocot tree, the Stern–Brocot / Farey / continued-fraction codings of
// its intervals, and exact evaluation of the Farey and Gauss maps.

#include "sumlevel/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sumlevel {

inline constexpr int kDefaultEnumerationGuard = 30;

/// Interval between two adjacent Stern–Brocot fractions s/t < s'/t'.
///
/// Unimodular (s'·t − s·t' = 1), so its length is 1/(t·t') exactly.
/// Equality compares endpoints only; level and index are bookkeeping.
struct SBInterval {
    BigInt left_num;
    BigInt left_den;
    BigInt right_num;
    BigInt right_den;
    int level = 0;
    std::optional<std::uint64_t> index; ///< 1-based position k within level, when known

    /// Validates ordering, the unit interval, and unimodularity.
    static SBInterval from_endpoints(const Rational& left, const Rational& right, int level,
                                     std::optional<std::uint64_t> index = std::nullopt);

    Rational left() const { return Rational(left_num, left_den); }
    Rational right() const { return Rational(right_num, right_den); }
    Rational diameter() const { return Rational(BigInt(1), BigInt(left_den * right_den)); }
    bool is_unimodular() const { return right_num * left_den - left_num * right_den == 1; }

    friend bool operator==(const SBInterval& a, const SBInterval& b) {
        return a.left_num == b.left_num && a.left_den == b.left_den && a.right_num == b.right_num &&
               a.right_den == b.right_den;
    }
};

/// Continued-fraction digit word (a1,…,ak), every digit >= 1.
class CFWord {
public:
    CFWord() = default;
    explicit CFWord(std::vector<std::uint64_t> digits);
    CFWord(std::initializer_list<std::uint64_t> digits);

    /// Parses "[[1,2,3]]", "[1,2,3]" or "1,2,3".
    static CFWord parse(std::string_view text);

    const std::vector<std::uint64_t>& digits() const { return digits_; }
    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    std::uint64_t operator[](std::size_t i) const { return digits_[i]; }
    std::uint64_t digit_sum() const;

    /// Word without its first digit.
    CFWord shifted() const;
    /// First `k` digits.
    CFWord prefix(std::size_t k) const;

    /// Convergent denominators q_0 = 1, q_1, …, q_k (q_{-1} = 0 is implicit).
    std::vector<BigInt> convergent_denominators() const;

    /// "[[a1,a2,…]]"
    std::string str() const;

    friend bool operator==(const CFWord&, const CFWord&) = default;

private:
    std::vector<std::uint64_t> digits_;
};

enum class Alphabet {
    SternBrocot, ///< letters A (x/(1+x)) and B (1/(2−x))
    Farey,       ///< letters L (u0 = x/(1+x)) and R (u1 = 1/(1+x))
};

/// Non-empty word over {A,B} or {L,R}.
class BinaryCode {
public:
    BinaryCode(Alphabet alphabet, std::string letters);

    static BinaryCode farey(std::string letters) { return {Alphabet::Farey, std::move(letters)}; }
    static BinaryCode stern_brocot(std::string letters) { return {Alphabet::SternBrocot, std::move(letters)}; }

    Alphabet alphabet() const { return alphabet_; }
    const std::string& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    const std::string& str() const { return letters_; }

    friend bool operator==(const BinaryCode&, const BinaryCode&) = default;

private:
    Alphabet alphabet_;
    std::string letters_;
};

/// The 2^n + 1 fractions of the n-th Stern–Brocot sequence in increasing order.
std::vector<Rational> sb_level(int n, int guard = kDefaultEnumerationGuard);

/// The 2^n intervals of level n in increasing order, indexed 1..2^n.
std::vector<SBInterval> sb_intervals(int n, int guard = kDefaultEnumerationGuard);

/// Image of [0,1] under w1∘w2∘…∘wk (first letter outermost), endpoints sorted.
SBInterval apply_code(const BinaryCode& code);

/// Translates a code into the cylinder it codes; throws UntranslatableCode otherwise.
CFWord code_to_cylinder(const BinaryCode& code);

/// L^{a1−1} R L^{a2−1} R … L^{ak−1} R
BinaryCode cylinder_to_farey_code(const CFWord& word);

/// Inverse of the Stern–Brocot dictionary; [[1]] maps to "B".
BinaryCode cylinder_to_sb_code(const CFWord& word);

/// Farey code of the k-th interval (1-based) of level n: reflected Gray code of k−1.
BinaryCode farey_code_of_index(int n, std::uint64_t k);

/// Stern–Brocot code of the k-th interval (1-based) of level n: binary digits of k−1.
BinaryCode sb_code_of_index(int n, std::uint64_t k);

/// 1-based position within its level of the interval coded by `code` (inverse of the two functions above).
std::uint64_t index_of_code(const BinaryCode& code);

/// Cylinder [[a1,…,ak]] as the interval between p_k/q_k and (p_k+p_{k−1})/(q_k+q_{k−1}).
SBInterval cf_cylinder_interval(const CFWord& word);

/// x/(1−x) on [0,1/2], (1−x)/x on (1/2,1].
Rational farey_map(const Rational& x);

/// 1/x mod 1 on (0,1].
Rational gauss_map(const Rational& x);

/// Regular continued-fraction digits of x in (0,1), at most max_k of them.
///
/// Rationals terminate with a final digit >= 2 whenever the expansion has
/// more than one digit (Euclid's last quotient), so the result is canonical.
CFWord cf_digits(const Rational& x, std::size_t max_k);

} // namespace sumlevel
