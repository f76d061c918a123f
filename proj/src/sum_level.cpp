#include "sumlevel/sum_level.hpp"

#include "sumlevel/compensated.hpp"
#include "sumlevel/detail/bigint.hpp"
#include "sumlevel/detail/parallel.hpp"
#include "sumlevel/detail/sb_walk.hpp"
#include "sumlevel/detail/unit_fraction_sum.hpp"
#include "sumlevel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace sumlevel {

namespace {

using detail::to_big;

void check_range(const char* what, int n, int lowest, int guard, int hard_cap) {
    if (n < lowest) {
        throw DomainError(std::string(what) + ": level must be >= " + std::to_string(lowest));
    }
    if (n > guard) {
        throw LevelTooLarge(what, n, guard);
    }
    if (n > hard_cap) {
        throw LevelTooLarge(what, n, hard_cap);
    }
}

IntervalFamily filtered_level(int n, int guard, FamilyTag tag, const char* what) {
    check_range(what, n, 1, guard, detail::kMaxWalkLevel);
    const bool want_sum_level = tag == FamilyTag::SumLevel;
    IntervalFamily family{n, tag, {}};
    family.members.reserve(std::size_t{1} << (n - 1));
    detail::walk_sb_level(n, [&](std::uint64_t k, const detail::SBInterval64& iv) {
        if (detail::in_sum_level(k) == want_sum_level) {
            family.members.push_back(SBInterval{to_big(iv.left_num), to_big(iv.left_den), to_big(iv.right_num),
                                                to_big(iv.right_den), n, k});
        }
    });
    return family;
}

// Oriented Farey-tree node: denominators of the images of 0 and 1.
struct DenominatorPair {
    std::uint64_t at0;
    std::uint64_t at1;
};

std::pair<DenominatorPair, DenominatorPair> farey_children(const DenominatorPair& p) {
    const std::uint64_t mid = p.at0 + p.at1;
    return {{p.at0, mid}, {p.at1, mid}};
}

// Length of the R-child of a node.
std::uint64_t r_child_denominator(const DenominatorPair& p) { return p.at1 * (p.at0 + p.at1); }

void accumulate_r_children(const DenominatorPair& p, int depth, CompensatedSum& acc) {
    if (depth == 0) {
        acc.add(1.0 / static_cast<double>(r_child_denominator(p)));
        return;
    }
    const auto [l, r] = farey_children(p);
    accumulate_r_children(l, depth - 1, acc);
    accumulate_r_children(r, depth - 1, acc);
}

// Composition under construction: current last digit plus the convergent
// denominators of the digits already closed.
struct PartialWord {
    std::uint64_t last = 1;
    std::uint64_t q_prev = 1;
    std::uint64_t q_prev2 = 0;
};

std::pair<PartialWord, PartialWord> composition_children(const PartialWord& w) {
    return {{w.last + 1, w.q_prev, w.q_prev2}, {1, w.last * w.q_prev + w.q_prev2, w.q_prev}};
}

} // namespace

std::string_view family_tag_name(FamilyTag tag) {
    switch (tag) {
    case FamilyTag::SumLevel: return "C";
    case FamilyTag::Complement: return "C-complement";
    case FamilyTag::Level: return "T";
    }
    return "?";
}

std::string_view method_name(Method method) {
    switch (method) {
    case Method::Exact: return "exact";
    case Method::Compensated: return "compensated";
    case Method::Operator: return "operator";
    }
    return "?";
}

Rational IntervalFamily::measure() const {
    mpq_class total = 0;
    for (const auto& iv : members) {
        total += mpq_class(1, BigInt(iv.left_den * iv.right_den));
    }
    return Rational(total);
}

std::vector<ClosedInterval> even_intervals(const IntervalFamily& sum_level) {
    if (sum_level.tag != FamilyTag::SumLevel || sum_level.members.size() % 2 != 0) {
        throw DomainError("even intervals need a sum-level family with an even number of members");
    }
    std::vector<ClosedInterval> out;
    out.reserve(sum_level.members.size() / 2);
    for (std::size_t i = 0; i + 1 < sum_level.members.size(); i += 2) {
        const auto& a = sum_level.members[i];
        const auto& b = sum_level.members[i + 1];
        if (a.right() != b.left()) {
            throw DomainError("sum-level members " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                              " are not adjacent");
        }
        out.push_back({a.left(), b.right()});
    }
    return out;
}

IntervalFamily enumerate_sum_level(int n, int guard) {
    return filtered_level(n, guard, FamilyTag::SumLevel, "enumerate_sum_level");
}

IntervalFamily complement_family(int n, int guard) {
    return filtered_level(n, guard, FamilyTag::Complement, "complement_family");
}

MeasureValue lambda_exact(int n, int guard) {
    check_range("lambda_exact", n, 1, guard, kMaxTreeSumLevel);
    const mpq_class sum = detail::sum_unit_fractions(DenominatorPair{1, 1}, n - 1, farey_children, r_child_denominator);
    Rational exact(sum);
    const double approx = exact.to_double();
    return {std::move(exact), approx, Method::Exact};
}

MeasureValue lambda_compensated(int n, int guard, unsigned threads) {
    check_range("lambda_compensated", n, 1, guard, kMaxTreeSumLevel);
    const int depth = n - 1;
    const int split = std::min(depth, 10);
    const std::size_t tasks = std::size_t{1} << split;
    std::vector<CompensatedSum> partial(tasks);
    detail::parallel_for(tasks, threads, [&](std::size_t task) {
        DenominatorPair node{1, 1};
        for (int bit = split - 1; bit >= 0; --bit) {
            const auto [l, r] = farey_children(node);
            node = ((task >> bit) & 1U) ? r : l;
        }
        accumulate_r_children(node, depth - split, partial[task]);
    });
    CompensatedSum total;
    for (const auto& p : partial) total.merge(p);
    return {std::nullopt, total.value(), Method::Compensated};
}

IntervalFamily inverse_branch_image(const IntervalFamily& family) {
    const Rational one(1);
    IntervalFamily out{family.level + 1, family.tag, {}};
    out.members.reserve(2 * family.members.size());
    for (const auto& iv : family.members) {
        const Rational a = iv.left();
        const Rational b = iv.right();
        // u0(x) = x/(1+x) preserves order, u1(x) = 1/(1+x) reverses it.
        out.members.push_back(SBInterval::from_endpoints(a / (one + a), b / (one + b), out.level));
        out.members.push_back(SBInterval::from_endpoints((one + b).reciprocal(), (one + a).reciprocal(), out.level));
    }
    std::sort(out.members.begin(), out.members.end(),
              [](const SBInterval& x, const SBInterval& y) { return x.left() < y.left(); });
    return out;
}

bool pullback_check(int n, int guard) {
    check_range("pullback_check", n + 1, 2, guard, detail::kMaxWalkLevel);
    const IntervalFamily image = inverse_branch_image(enumerate_sum_level(n, guard));
    const IntervalFamily next = enumerate_sum_level(n + 1, guard);
    return image.members == next.members;
}

Rational tail_cylinder_measure(const CFWord& word, const BigInt& threshold) {
    if (word.empty()) {
        throw DomainError("tail_cylinder_measure: empty word");
    }
    if (threshold < 1) {
        throw DomainError("tail_cylinder_measure: threshold must be >= 1");
    }
    const auto q = word.convergent_denominators();
    const BigInt& qk = q[q.size() - 1];
    const BigInt& qk1 = q[q.size() - 2];
    return Rational(BigInt(1), BigInt(qk * (threshold * qk + qk1)));
}

BigInt e_set_threshold(int n, double eps) {
    if (n < 2) {
        throw DomainError("E-set threshold needs n >= 2");
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw DomainError("E-set threshold needs a finite eps > 0");
    }
    const long double value = std::ceil(static_cast<long double>(n) *
                                        std::pow(std::log(static_cast<long double>(n)), static_cast<long double>(eps)));
    if (!std::isfinite(value)) {
        throw DomainError("E-set threshold overflows");
    }
    BigInt out;
    mpz_set_d(out.get_mpz_t(), static_cast<double>(value));
    return out;
}

Rational composition_tail_measure(int n, const BigInt& threshold, int guard) {
    check_range("composition_tail_measure", n, 1, guard, kMaxTreeSumLevel);
    if (threshold < 1) {
        throw DomainError("composition_tail_measure: threshold must be >= 1");
    }
    const auto leaf_den = [&](const PartialWord& w) {
        const BigInt qk = to_big(w.last * w.q_prev + w.q_prev2);
        return BigInt(qk * (threshold * qk + w.q_prev));
    };
    return Rational(detail::sum_unit_fractions(PartialWord{}, n - 1, composition_children, leaf_den));
}

MeasureValue e_set_measure(int n, double eps, int guard) {
    const BigInt threshold = e_set_threshold(n, eps);
    Rational exact = composition_tail_measure(n, threshold, guard);
    const double approx = exact.to_double();
    return {std::move(exact), approx, Method::Exact};
}

} // namespace sumlevel
