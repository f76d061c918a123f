#pragma once

// Discretised transfer operators of the Farey map and the large-n evaluation
// of λ(C_n) by iterating the dual operator on φ0(x) = x.

#include "sumlevel/rational.hpp"
#include "sumlevel/sum_level.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sumlevel {

enum class MeshKind {
    Uniform, ///< x_i = i/M
    Dyadic,  ///< x_0 = 0, x_i = 2^{-(M-i)/K}, K = M/octaves nodes per octave
};

/// Density with respect to Lebesgue measure (d) or to dμ = dx/x (h).
enum class Basis { Lebesgue, Invariant };

std::string_view mesh_kind_name(MeshKind kind);
std::string_view basis_name(Basis basis);

inline constexpr std::size_t kDefaultGrid = 65536;
inline constexpr int kDefaultOctaves = 32;

/// Nodes on [0,1] plus precomputed stencils for the two inverse branches
/// u0(x) = x/(1+x) and u1(x) = 1/(1+x).
class Mesh {
public:
    struct Stencil {
        std::size_t cell; ///< value lies in [x_cell, x_{cell+1}]
        double weight;    ///< linear weight of x_{cell+1}
    };

    /// Requires M divisible by 4.
    static std::shared_ptr<const Mesh> uniform(std::size_t intervals);
    /// Requires M divisible by 2·octaves.
    static std::shared_ptr<const Mesh> dyadic(std::size_t intervals, int octaves = kDefaultOctaves);

    MeshKind kind() const { return kind_; }
    std::size_t intervals() const { return nodes_.size() - 1; }
    int octaves() const { return octaves_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    /// Index of the node at x = 1/2.
    std::size_t half_index() const { return half_index_; }

    Stencil locate(double x) const;
    double interpolate(const std::vector<double>& values, double x) const;

    const std::vector<Stencil>& left_branch() const { return left_; }
    const std::vector<Stencil>& right_branch() const { return right_; }

private:
    Mesh(MeshKind kind, std::vector<double> nodes, int octaves, std::size_t half_index);

    MeshKind kind_;
    std::vector<double> nodes_;
    int octaves_;
    std::size_t half_index_;
    std::vector<Stencil> left_;
    std::vector<Stencil> right_;
};

/// Piecewise-linear function sampled on a mesh.
struct DensityGrid {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> values;
    Basis basis = Basis::Lebesgue;

    static DensityGrid from_function(std::shared_ptr<const Mesh> mesh, Basis basis,
                                     const std::function<double(double)>& f);
    double at(double x) const { return mesh->interpolate(values, x); }
    /// Throws DomainError on a non-finite or negative value.
    void validate() const;
};

/// (Lf)(x) = [f(u0 x) + f(u1 x)]/(1+x)^2 on a Lebesgue density.
DensityGrid pf_apply(const DensityGrid& f, unsigned threads = 1);

/// (T̂g)(x) = [g(u0 x) + x·g(u1 x)]/(1+x) on an invariant-measure density.
DensityGrid dual_apply(const DensityGrid& g, unsigned threads = 1);

/// λ-mass of the density on [1/2,1] by composite Simpson (in x on a uniform
/// mesh, in ln x on a dyadic one).
double upper_half_mass(const DensityGrid& grid);

/// ∫_0^1 f dx for a Lebesgue density on a uniform mesh.
double total_mass(const DensityGrid& grid);

struct OperatorOptions {
    std::size_t grid = kDefaultGrid;
    MeshKind mesh = MeshKind::Dyadic;
    int octaves = kDefaultOctaves;
    unsigned threads = 1;
    std::optional<std::filesystem::path> checkpoint_path;
    std::int64_t checkpoint_every = 10000;
};

std::shared_ptr<const Mesh> make_mesh(const OperatorOptions& options);

/// Iterates g_{n-1} = T̂^{n-1} φ0 and records λ(C_k) = ∫_{1/2}^1 g_{k-1} dμ for k = 1..n.
class LambdaIterator {
public:
    explicit LambdaIterator(std::shared_ptr<const Mesh> mesh, unsigned threads = 1);

    std::int64_t level() const { return static_cast<std::int64_t>(history_.size()); }
    double lambda() const { return history_.back(); }
    /// λ(C_1), …, λ(C_level).
    const std::vector<double>& history() const { return history_; }
    const DensityGrid& density() const { return density_; }

    void advance();

    /// Binary checkpoint; format described in README.md.
    void save(const std::filesystem::path& path) const;
    /// Throws CheckpointError when the file is unreadable or was written for a different mesh.
    static LambdaIterator resume(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh,
                                 unsigned threads = 1);

private:
    LambdaIterator(DensityGrid density, std::vector<double> history, unsigned threads);

    DensityGrid density_;
    std::vector<double> history_;
    unsigned threads_;
};

/// Runs (or resumes) the iteration until every requested level has a value.
/// Returns λ(C_1..C_max) as computed by the operator.
std::vector<double> operator_lambdas(std::int64_t max_level, const OperatorOptions& options);

MeasureValue lambda_operator(std::int64_t n, const OperatorOptions& options = {});

/// W_n(C_1) = log(n+1); 0 at n = 0.
double wandering_rate(std::int64_t n);

/// ν_n = n / log(n+1).
double return_sequence(std::int64_t n);

enum class Law { LambdaCn, Cesaro, Wandering, ReturnSequence, RatioToLimit };

std::string_view law_name(Law law);

struct SeriesEntry {
    std::int64_t n;
    double value;
};

struct AsymptoticSeries {
    Law law;
    std::vector<SeriesEntry> entries;
};

struct SamplingRule {
    enum class Kind { Every, Decades, Explicit };
    Kind kind = Kind::Decades;
    std::int64_t stride = 1;
    std::vector<std::int64_t> levels;

    /// Sorted distinct sample levels in [1, n_max]; Every and Decades also include n_max.
    std::vector<std::int64_t> sample(std::int64_t n_max) const;
};

struct CesaroResult {
    AsymptoticSeries sums;   ///< Σ_{k<=n} λ(C_k)
    AsymptoticSeries ratios; ///< sum / (n / log2 n), n >= 2
    std::optional<Rational> exact_sum; ///< when every term up to n_max is exact
};

/// Σ λ(C_k) in compensated arithmetic, taking the first exact_prefix.size() terms from exact values.
std::vector<double> cesaro_partial_sums(const std::vector<double>& operator_values,
                                        const std::vector<double>& exact_prefix);

/// Exact λ(C_k) for k <= exact_upto, operator values beyond.
CesaroResult cesaro_series(std::int64_t n_max, const SamplingRule& rule, const OperatorOptions& options = {},
                           int exact_upto = 20);

struct MonotoneViolation {
    enum class Kind { NotDecreasing, NotMonotone, NotConcave };
    Kind kind;
    std::int64_t iteration;
    std::size_t node;
    double x;
    double observed;
    double bound;
};

struct MonotoneReport {
    bool passed = true;
    std::int64_t iterations = 0;
    std::optional<MonotoneViolation> first_violation;
};

std::string_view violation_name(MonotoneViolation::Kind kind);

inline constexpr double kGridSlack = 1e-10;

/// Iterates T̂ on φ0 over a uniform mesh with M intervals; checks strict decrease on
/// [1/2,1] between successive iterates and that every iterate is non-decreasing and
/// concave up to kGridSlack.
MonotoneReport monotone_class_check(std::int64_t n_max, std::size_t grid, unsigned threads = 1);

} // namespace sumlevel
