#include "sumlevel/transfer_operator.hpp"

#include "sumlevel/compensated.hpp"
#include "sumlevel/detail/parallel.hpp"
#include "sumlevel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace sumlevel {

std::string_view mesh_kind_name(MeshKind kind) { return kind == MeshKind::Uniform ? "uniform" : "dyadic"; }
std::string_view basis_name(Basis basis) { return basis == Basis::Lebesgue ? "d" : "h"; }

// ---------------------------------------------------------------------------
// Mesh

Mesh::Mesh(MeshKind kind, std::vector<double> nodes, int octaves, std::size_t half_index)
    : kind_(kind), nodes_(std::move(nodes)), octaves_(octaves), half_index_(half_index) {
    left_.reserve(nodes_.size());
    right_.reserve(nodes_.size());
    for (double x : nodes_) {
        left_.push_back(locate(x / (1.0 + x)));
        right_.push_back(locate(1.0 / (1.0 + x)));
    }
}

std::shared_ptr<const Mesh> Mesh::uniform(std::size_t intervals) {
    if (intervals < 4 || intervals % 4 != 0) {
        throw DomainError("uniform mesh size must be a positive multiple of 4");
    }
    std::vector<double> nodes(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        nodes[i] = static_cast<double>(i) / static_cast<double>(intervals);
    }
    return std::shared_ptr<const Mesh>(new Mesh(MeshKind::Uniform, std::move(nodes), 0, intervals / 2));
}

std::shared_ptr<const Mesh> Mesh::dyadic(std::size_t intervals, int octaves) {
    if (octaves < 1 || octaves > 1000) {
        throw DomainError("dyadic mesh needs 1..1000 octaves");
    }
    const auto oct = static_cast<std::size_t>(octaves);
    if (intervals < 2 * oct || intervals % (2 * oct) != 0) {
        throw DomainError("dyadic mesh size must be a positive multiple of 2*octaves");
    }
    const std::size_t per_octave = intervals / oct;
    std::vector<double> nodes(intervals + 1);
    nodes[0] = 0.0;
    for (std::size_t i = 1; i <= intervals; ++i) {
        nodes[i] = std::exp2(-static_cast<double>(intervals - i) / static_cast<double>(per_octave));
    }
    return std::shared_ptr<const Mesh>(new Mesh(MeshKind::Dyadic, std::move(nodes), octaves, intervals - per_octave));
}

Mesh::Stencil Mesh::locate(double x) const {
    const std::size_t m = intervals();
    x = std::clamp(x, 0.0, 1.0);
    std::size_t i = 0;
    if (kind_ == MeshKind::Uniform) {
        i = std::min(static_cast<std::size_t>(x * static_cast<double>(m)), m - 1);
    } else if (x > nodes_[1]) {
        const double per_octave = static_cast<double>(m / static_cast<std::size_t>(octaves_));
        const double guess = static_cast<double>(m) + per_octave * std::log2(x);
        i = static_cast<std::size_t>(std::clamp(std::floor(guess), 1.0, static_cast<double>(m - 1)));
    }
    while (i > 0 && nodes_[i] > x) --i;
    while (i + 1 < m && nodes_[i + 1] < x) ++i;
    const double w = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    return {i, std::clamp(w, 0.0, 1.0)};
}

double Mesh::interpolate(const std::vector<double>& values, double x) const {
    const Stencil s = locate(x);
    return values[s.cell] * (1.0 - s.weight) + values[s.cell + 1] * s.weight;
}

// ---------------------------------------------------------------------------
// DensityGrid

DensityGrid DensityGrid::from_function(std::shared_ptr<const Mesh> mesh, Basis basis,
                                       const std::function<double(double)>& f) {
    std::vector<double> values;
    values.reserve(mesh->nodes().size());
    for (double x : mesh->nodes()) values.push_back(f(x));
    return {std::move(mesh), std::move(values), basis};
}

void DensityGrid::validate() const {
    if (!mesh || values.size() != mesh->nodes().size()) {
        throw DomainError("density grid does not match its mesh");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw DomainError("density value at node " + std::to_string(i) + " is not finite and non-negative");
        }
    }
}

namespace {

inline double sample(const std::vector<double>& v, const Mesh::Stencil& s) {
    return v[s.cell] * (1.0 - s.weight) + v[s.cell + 1] * s.weight;
}

template <class NodeRule>
DensityGrid apply_nodewise(const DensityGrid& in, Basis expected, unsigned threads, NodeRule rule) {
    if (in.basis != expected) {
        throw DomainError(std::string("operator expects a ") + std::string(basis_name(expected)) + "-basis density");
    }
    const Mesh& mesh = *in.mesh;
    const std::size_t count = mesh.nodes().size();
    DensityGrid out{in.mesh, std::vector<double>(count), in.basis};
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    detail::parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(count, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const double x = mesh.node(i);
            out.values[i] = rule(x, sample(in.values, mesh.left_branch()[i]), sample(in.values, mesh.right_branch()[i]));
        }
    });
    return out;
}

// Composite Simpson over nodes first..last (even count of intervals) of f(i),
// with uniform step h in the integration variable.
template <class F>
double simpson(std::size_t first, std::size_t last, double h, F f) {
    double s = f(first) + f(last);
    for (std::size_t i = first + 1; i < last; ++i) {
        s += ((i - first) % 2 == 1 ? 4.0 : 2.0) * f(i);
    }
    return s * h / 3.0;
}

} // namespace

DensityGrid pf_apply(const DensityGrid& f, unsigned threads) {
    return apply_nodewise(f, Basis::Lebesgue, threads, [](double x, double at_u0, double at_u1) {
        const double s = 1.0 + x;
        return (at_u0 + at_u1) / (s * s);
    });
}

DensityGrid dual_apply(const DensityGrid& g, unsigned threads) {
    return apply_nodewise(g, Basis::Invariant, threads,
                          [](double x, double at_u0, double at_u1) { return (at_u0 + x * at_u1) / (1.0 + x); });
}

double upper_half_mass(const DensityGrid& grid) {
    const Mesh& mesh = *grid.mesh;
    const std::size_t a = mesh.half_index();
    const std::size_t b = mesh.intervals();
    const auto& v = grid.values;
    const bool lebesgue = grid.basis == Basis::Lebesgue;
    if (mesh.kind() == MeshKind::Uniform) {
        const double h = 1.0 / static_cast<double>(b);
        return simpson(a, b, h, [&](std::size_t i) { return lebesgue ? v[i] : v[i] / mesh.node(i); });
    }
    // dλ = x d(ln x) and dμ = d(ln x)
    const double h = std::numbers::ln2 / static_cast<double>(b - a);
    return simpson(a, b, h, [&](std::size_t i) { return lebesgue ? v[i] * mesh.node(i) : v[i]; });
}

double total_mass(const DensityGrid& grid) {
    if (grid.basis != Basis::Lebesgue || grid.mesh->kind() != MeshKind::Uniform) {
        throw DomainError("total_mass needs a Lebesgue density on a uniform mesh");
    }
    const std::size_t m = grid.mesh->intervals();
    return simpson(0, m, 1.0 / static_cast<double>(m), [&](std::size_t i) { return grid.values[i]; });
}

std::shared_ptr<const Mesh> make_mesh(const OperatorOptions& options) {
    return options.mesh == MeshKind::Uniform ? Mesh::uniform(options.grid) : Mesh::dyadic(options.grid, options.octaves);
}

// ---------------------------------------------------------------------------
// LambdaIterator

LambdaIterator::LambdaIterator(std::shared_ptr<const Mesh> mesh, unsigned threads)
    : density_(DensityGrid::from_function(std::move(mesh), Basis::Invariant, [](double x) { return x; })),
      threads_(threads) {
    history_.push_back(upper_half_mass(density_));
}

LambdaIterator::LambdaIterator(DensityGrid density, std::vector<double> history, unsigned threads)
    : density_(std::move(density)), history_(std::move(history)), threads_(threads) {}

void LambdaIterator::advance() {
    density_ = dual_apply(density_, threads_);
    history_.push_back(upper_half_mass(density_));
}

std::vector<double> operator_lambdas(std::int64_t max_level, const OperatorOptions& options) {
    if (max_level < 1) {
        throw DomainError("operator level must be >= 1");
    }
    auto mesh = make_mesh(options);
    std::optional<LambdaIterator> it;
    if (options.checkpoint_path && std::filesystem::exists(*options.checkpoint_path)) {
        it.emplace(LambdaIterator::resume(*options.checkpoint_path, mesh, options.threads));
    } else {
        it.emplace(mesh, options.threads);
    }
    std::int64_t since_save = 0;
    while (it->level() < max_level) {
        it->advance();
        if (options.checkpoint_path && options.checkpoint_every > 0 && ++since_save >= options.checkpoint_every) {
            it->save(*options.checkpoint_path);
            since_save = 0;
        }
    }
    if (options.checkpoint_path && since_save > 0) {
        it->save(*options.checkpoint_path);
    }
    const auto& h = it->history();
    return {h.begin(), h.begin() + max_level};
}

MeasureValue lambda_operator(std::int64_t n, const OperatorOptions& options) {
    const auto values = operator_lambdas(n, options);
    return {std::nullopt, values.back(), Method::Operator};
}

double wandering_rate(std::int64_t n) {
    if (n < 0) {
        throw DomainError("wandering rate needs n >= 0");
    }
    return std::log1p(static_cast<double>(n));
}

double return_sequence(std::int64_t n) {
    if (n < 1) {
        throw DomainError("return sequence needs n >= 1");
    }
    return static_cast<double>(n) / wandering_rate(n);
}

std::string_view law_name(Law law) {
    switch (law) {
    case Law::LambdaCn: return "lambda_Cn";
    case Law::Cesaro: return "cesaro";
    case Law::Wandering: return "wandering";
    case Law::ReturnSequence: return "return_seq";
    case Law::RatioToLimit: return "ratio_to_limit";
    }
    return "?";
}

std::vector<std::int64_t> SamplingRule::sample(std::int64_t n_max) const {
    if (n_max < 1) {
        throw DomainError("sampling needs n_max >= 1");
    }
    std::vector<std::int64_t> out;
    switch (kind) {
    case Kind::Every:
        if (stride < 1) throw DomainError("sampling stride must be >= 1");
        for (std::int64_t n = stride; n <= n_max; n += stride) out.push_back(n);
        out.push_back(n_max);
        break;
    case Kind::Decades:
        for (std::int64_t n = 1; n <= n_max; n *= 10) {
            out.push_back(n);
            if (n > n_max / 10) break;
        }
        out.push_back(n_max);
        break;
    case Kind::Explicit:
        for (auto n : levels) {
            if (n < 1 || n > n_max) throw DomainError("sample level " + std::to_string(n) + " outside [1, n_max]");
            out.push_back(n);
        }
        break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> cesaro_partial_sums(const std::vector<double>& operator_values,
                                        const std::vector<double>& exact_prefix) {
    std::vector<double> out;
    out.reserve(operator_values.size());
    CompensatedSum acc;
    for (std::size_t k = 0; k < operator_values.size(); ++k) {
        acc.add(k < exact_prefix.size() ? exact_prefix[k] : operator_values[k]);
        out.push_back(acc.value());
    }
    return out;
}

CesaroResult cesaro_series(std::int64_t n_max, const SamplingRule& rule, const OperatorOptions& options,
                           int exact_upto) {
    if (n_max < 1) {
        throw DomainError("cesaro series needs n_max >= 1");
    }
    const auto levels = rule.sample(n_max);
    const int exact_terms = static_cast<int>(std::min<std::int64_t>(std::max(exact_upto, 0), n_max));
    std::vector<double> exact_values;
    std::optional<Rational> exact_sum;
    Rational running(0);
    for (int k = 1; k <= exact_terms; ++k) {
        const Rational v = *lambda_exact(k, std::max(exact_terms, kDefaultExactGuard)).exact;
        exact_values.push_back(v.to_double());
        running += v;
    }
    if (exact_terms == n_max) {
        exact_sum = running;
    }
    std::vector<double> terms;
    if (n_max > exact_terms) {
        terms = operator_lambdas(n_max, options);
    } else {
        terms.assign(static_cast<std::size_t>(n_max), 0.0);
    }
    const auto sums = cesaro_partial_sums(terms, exact_values);
    CesaroResult result{{Law::Cesaro, {}}, {Law::RatioToLimit, {}}, std::move(exact_sum)};
    for (auto n : levels) {
        const double s = sums[static_cast<std::size_t>(n - 1)];
        result.sums.entries.push_back({n, s});
        if (n >= 2) {
            const double nd = static_cast<double>(n);
            result.ratios.entries.push_back({n, s / (nd / std::log2(nd))});
        }
    }
    return result;
}

std::string_view violation_name(MonotoneViolation::Kind kind) {
    switch (kind) {
    case MonotoneViolation::Kind::NotDecreasing: return "not-decreasing-in-n";
    case MonotoneViolation::Kind::NotMonotone: return "not-monotone-in-x";
    case MonotoneViolation::Kind::NotConcave: return "not-concave";
    }
    return "?";
}

namespace {

std::optional<MonotoneViolation> class_violation(const DensityGrid& g, std::int64_t iteration) {
    const auto& x = g.mesh->nodes();
    const auto& v = g.values;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i + 1] < v[i] - kGridSlack) {
            return MonotoneViolation{MonotoneViolation::Kind::NotMonotone, iteration, i + 1, x[i + 1], v[i + 1], v[i]};
        }
    }
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double w = (x[i + 1] - x[i]) / (x[i + 1] - x[i - 1]);
        const double chord = w * v[i - 1] + (1.0 - w) * v[i + 1];
        if (v[i] < chord - kGridSlack) {
            return MonotoneViolation{MonotoneViolation::Kind::NotConcave, iteration, i, x[i], v[i], chord};
        }
    }
    return std::nullopt;
}

} // namespace

MonotoneReport monotone_class_check(std::int64_t n_max, std::size_t grid, unsigned threads) {
    if (n_max < 1) {
        throw DomainError("monotone check needs n_max >= 1");
    }
    auto mesh = Mesh::uniform(grid);
    DensityGrid prev = DensityGrid::from_function(mesh, Basis::Invariant, [](double x) { return x; });
    MonotoneReport report;
    auto fail = [&](MonotoneViolation v) {
        report.passed = false;
        report.first_violation = v;
        return report;
    };
    if (auto v = class_violation(prev, 0)) return fail(*v);
    for (std::int64_t n = 1; n <= n_max; ++n) {
        DensityGrid next = dual_apply(prev, threads);
        for (std::size_t i = mesh->half_index(); i < next.values.size(); ++i) {
            if (!(next.values[i] < prev.values[i])) {
                return fail({MonotoneViolation::Kind::NotDecreasing, n, i, mesh->node(i), next.values[i], prev.values[i]});
            }
        }
        if (auto v = class_violation(next, n)) return fail(*v);
        report.iterations = n;
        prev = std::move(next);
    }
    return report;
}

} // namespace sumlevel
