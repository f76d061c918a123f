#pragma once

// Independent reference computations used only by the tests. None of them
// shares enumeration or summation code with the library.

#include "sumlevel/exact_kernel.hpp"
#include "sumlevel/rational.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using sumlevel::Rational;

/// Level-n Stern–Brocot sequence by repeated exact mediant insertion.
std::vector<Rational> mediant_level(int n);

/// All compositions of n in lexicographic order of their cut masks.
std::vector<std::vector<std::uint64_t>> compositions(int n);

/// λ(C_n) as Σ over compositions of 1/(q_k(q_k + q_{k−1})), summed over one global common denominator.
Rational composition_lambda(int n);

/// Image of [0,1] under a code, evaluated in double precision, sorted.
std::pair<double, double> float_code_interval(const std::string& letters, bool stern_brocot);

/// x = 1/(a1 + 1/(a2 + … + 1/(ak + y))) evaluated exactly from the inside out.
Rational backward_cf(const std::vector<std::uint64_t>& digits, const Rational& y);

/// Measure of a union of closed intervals after sorting and merging overlaps.
Rational union_measure(std::vector<std::pair<Rational, Rational>> intervals);

/// Union over compositions (a1..ak) of n of {[a1..ak, a_{k+1}, …] : a_{k+1} >= threshold},
/// built as intervals between backward_cf(word, 0) and backward_cf(word, 1/threshold).
Rational tail_union_measure(int n, std::uint64_t threshold);

/// Union over words with digit sum m <= n of the tails a_{k+1} >= max(floor(eps m)+1, n−m+1).
Rational theta_tail_union_measure(int n, double eps);

/// Σ (right − left)^t over consecutive fractions of mediant_level(n), in long double.
long double power_sum(int n, double t);

} // namespace oracle
