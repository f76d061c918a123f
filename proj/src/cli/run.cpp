#include "sumlevel/cli.hpp"

#include "sumlevel/checkpoint.hpp"
#include "sumlevel/diophantine.hpp"
#include "sumlevel/errors.hpp"
#include "sumlevel/exact_kernel.hpp"
#include "sumlevel/pressure.hpp"
#include "sumlevel/sum_level.hpp"
#include "sumlevel/transfer_operator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sumlevel::cli {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
    std::string s = text;
    std::string::size_type sep = s.find("..");
    std::size_t width = 2;
    if (sep == std::string::npos) {
        sep = s.find(':');
        width = 1;
    }
    if (sep == std::string::npos) throw UsageError("--n-range expects A:B or A..B");
    try {
        std::size_t used_a = 0;
        std::size_t used_b = 0;
        const std::string a = s.substr(0, sep);
        const std::string b = s.substr(sep + width);
        const auto lo = std::stoll(a, &used_a);
        const auto hi = std::stoll(b, &used_b);
        if (used_a != a.size() || used_b != b.size() || lo > hi) throw UsageError("bad --n-range " + text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("bad --n-range " + text);
    }
}

OperatorOptions operator_options(const RunConfig& c) {
    OperatorOptions o;
    o.grid = c.grid;
    o.mesh = c.mesh == "uniform" ? MeshKind::Uniform : MeshKind::Dyadic;
    o.octaves = c.octaves;
    o.threads = c.threads;
    if (c.checkpoint) {
        o.checkpoint_path = c.checkpoint;
    } else if (auto dir = checkpoint_dir_from_env()) {
        o.checkpoint_path = *dir / checkpoint_file_name(std::string(mesh_kind_name(o.mesh)), o.grid,
                                                        o.mesh == MeshKind::Dyadic ? o.octaves : 0);
    }
    return o;
}

int to_int_level(std::int64_t n) {
    if (n < 0 || n > 1'000'000) throw DomainError("level " + std::to_string(n) + " out of range");
    return static_cast<int>(n);
}

double require_eps(const RunConfig& c) {
    if (!c.eps) throw UsageError("--eps is required for this quantity");
    return *c.eps;
}

// ---------------------------------------------------------------------------

Table measure(const RunConfig& c) {
    Table table{{"n", "method", "exact", "approx"}, {}};
    const auto levels = selected_levels(c);
    const bool complement = c.quantity == "complement";
    const Rational one(1);

    if (c.quantity == "e-set" || c.quantity == "theta-tail") {
        if (c.method != "exact" && c.method != "auto") {
            throw UsageError(c.quantity + " is only available with --method exact");
        }
        const double eps = require_eps(c);
        for (auto n : levels) {
            const int level = to_int_level(n);
            Rational v = c.quantity == "e-set" ? *e_set_measure(level, eps, c.exact_guard).exact
                                               : theta_tail_exact(level, eps, c.exact_guard);
            const double approx = v.to_double();
            table.add_row({n, std::string("exact"), std::move(v), approx});
        }
        return table;
    }
    if (c.quantity != "lambda" && !complement) throw UsageError("unknown quantity " + c.quantity);

    std::vector<double> operator_values;
    std::int64_t operator_max = 0;
    for (auto n : levels) {
        if (resolve_method(c, n) == "operator") operator_max = std::max(operator_max, n);
    }
    if (operator_max > 0) operator_values = operator_lambdas(operator_max, operator_options(c));

    for (auto n : levels) {
        const std::string method = resolve_method(c, n);
        if (method == "exact") {
            Rational v = *lambda_exact(to_int_level(n), c.exact_guard).exact;
            if (complement) v = one - v;
            const double approx = v.to_double();
            table.add_row({n, method, std::move(v), approx});
        } else {
            double v = method == "compensated" ? lambda_compensated(to_int_level(n), c.float_guard, c.threads).approx
                                               : operator_values[static_cast<std::size_t>(n - 1)];
            if (complement) v = 1.0 - v;
            table.add_row({n, method, std::monostate{}, v});
        }
    }
    return table;
}

std::string code_for(const std::string& coding, int n, std::uint64_t k) {
    if (n == 0) return {};
    if (coding == "sb") return sb_code_of_index(n, k).str();
    const BinaryCode farey = farey_code_of_index(n, k);
    if (coding == "farey") return farey.str();
    try {
        return code_to_cylinder(farey).str();
    } catch (const UntranslatableCode&) {
        return {};
    }
}

Table enumerate(const RunConfig& c) {
    if (c.coding != "farey" && c.coding != "sb" && c.coding != "cf") throw UsageError("unknown coding " + c.coding);
    const std::string family = c.family.empty() ? "C" : c.family;
    Table table{{"n", "index", "code", "left", "right", "diameter"}, {}};
    for (auto n64 : selected_levels(c)) {
        const int n = to_int_level(n64);
        std::vector<SBInterval> members;
        if (family == "C") {
            members = enumerate_sum_level(n, c.enumeration_guard).members;
        } else if (family == "C-complement") {
            members = complement_family(n, c.enumeration_guard).members;
        } else if (family == "T") {
            members = sb_intervals(n, c.enumeration_guard);
        } else {
            throw UsageError("unknown family " + family);
        }
        for (const auto& iv : members) {
            const std::uint64_t k = *iv.index;
            table.add_row({n64, k, code_for(c.coding, n, k), iv.left(), iv.right(), iv.diameter()});
        }
    }
    return table;
}

Table codes(const RunConfig& c) {
    Table table{{"level", "index", "farey", "sb", "cylinder", "left", "right", "diameter"}, {}};
    if (c.code.has_value() == c.cylinder.has_value()) throw UsageError("codes needs exactly one of --code, --cylinder");
    if (c.code) {
        if (c.alphabet != "farey" && c.alphabet != "sb") throw UsageError("unknown alphabet " + c.alphabet);
        const BinaryCode code(c.alphabet == "sb" ? Alphabet::SternBrocot : Alphabet::Farey, *c.code);
        const SBInterval iv = apply_code(code);
        const auto n = static_cast<int>(code.size());
        Cell index;
        Cell farey;
        Cell sb;
        if (n <= 63) {
            const std::uint64_t k = index_of_code(code);
            index = k;
            farey = farey_code_of_index(n, k).str();
            sb = sb_code_of_index(n, k).str();
        }
        Cell cylinder;
        try {
            cylinder = code_to_cylinder(code).str();
        } catch (const UntranslatableCode&) {
        }
        table.add_row({static_cast<std::int64_t>(n), index, farey, sb, cylinder, iv.left(), iv.right(), iv.diameter()});
        return table;
    }
    const CFWord word = CFWord::parse(*c.cylinder);
    const SBInterval iv = cf_cylinder_interval(word);
    const BinaryCode farey = cylinder_to_farey_code(word);
    Cell index;
    if (farey.size() <= 63) index = index_of_code(farey);
    table.add_row({static_cast<std::int64_t>(farey.size()), index, farey.str(), cylinder_to_sb_code(word).str(),
                   word.str(), iv.left(), iv.right(), iv.diameter()});
    return table;
}

std::string describe(const MonotoneViolation& v) {
    std::ostringstream s;
    s << violation_name(v.kind) << " at iteration " << v.iteration << ", node " << v.node << " (x=" << format_double(v.x)
      << "): " << format_double(v.observed) << " vs " << format_double(v.bound);
    return s.str();
}

Table operator_check(const RunConfig& c) {
    Table table{{"check", "n", "value", "passed", "detail"}, {}};
    if (c.check == "monotone") {
        const MonotoneReport r = monotone_class_check(c.n_max, c.grid, c.threads);
        table.add_row({std::string("monotone"), c.n_max, r.iterations, r.passed,
                       r.first_violation ? describe(*r.first_violation) : std::string()});
    } else if (c.check == "pullback") {
        for (std::int64_t n = 1; n <= c.n_max; ++n) {
            table.add_row({std::string("pullback"), n, std::monostate{},
                           pullback_check(to_int_level(n), c.enumeration_guard), std::string()});
        }
    } else if (c.check == "oracle") {
        const std::int64_t top = std::min<std::int64_t>(c.n_max, c.exact_guard);
        const auto values = operator_lambdas(top, operator_options(c));
        for (std::int64_t n = 1; n <= top; ++n) {
            const double exact = lambda_exact(to_int_level(n), c.exact_guard).approx;
            const double rel = std::fabs(values[static_cast<std::size_t>(n - 1)] - exact) / exact;
            table.add_row({std::string("oracle"), n, rel, rel <= 1e-4, std::string("relative error vs exact")});
        }
    } else if (c.check == "asymptotics") {
        std::vector<std::int64_t> levels = c.levels.empty() ? std::vector<std::int64_t>{100, 1000, 10000} : c.levels;
        std::sort(levels.begin(), levels.end());
        if (levels.front() < 2) throw UsageError("asymptotic levels must be >= 2");
        const auto values = operator_lambdas(levels.back(), operator_options(c));
        std::vector<double> exact_prefix;
        for (int k = 1; k <= std::min<std::int64_t>(c.exact_upto, levels.back()); ++k) {
            exact_prefix.push_back(lambda_exact(k, std::max(c.exact_guard, c.exact_upto)).approx);
        }
        const auto sums = cesaro_partial_sums(values, exact_prefix);
        struct Law {
            const char* name;
            double limit;
        };
        for (const Law law : {Law{"r_n", 1.0}, Law{"wandering_product", std::log(2.0)}, Law{"cesaro_ratio", 1.0}}) {
            double previous = INFINITY;
            for (auto n : levels) {
                const double lam = values[static_cast<std::size_t>(n - 1)];
                const double nd = static_cast<double>(n);
                double v = 0.0;
                if (std::string_view(law.name) == "r_n") v = lam * std::log2(nd);
                else if (std::string_view(law.name) == "wandering_product") v = wandering_rate(n - 1) * lam;
                else v = sums[static_cast<std::size_t>(n - 1)] / (nd / std::log2(nd));
                const double deviation = std::fabs(v - law.limit);
                table.add_row({std::string(law.name), n, v, deviation < previous,
                               "deviation=" + format_double(deviation)});
                previous = deviation;
            }
        }
    } else {
        throw UsageError("unknown check " + c.check);
    }
    return table;
}

Table pressure(const RunConfig& c) {
    const std::vector<double> ts = c.ts.empty() ? kDefaultPressureTs : c.ts;
    const auto levels = selected_levels(c);
    if (c.sandwich && c.even_split) throw UsageError("--sandwich and --even-split are exclusive");
    if (c.sandwich) {
        Table table{{"n", "t", "pairs", "per_pair_ok", "factor_n_violations", "max_ratio", "log_sum_level",
                     "log_sum_previous", "log_bounds_ok", "exact_bounds_ok", "passed"},
                    {}};
        for (auto n : levels) {
            for (double t : ts) {
                const auto r = sandwich_check(to_int_level(n), t, c.enumeration_guard);
                Cell exact_ok;
                if (r.exact_bounds_ok) exact_ok = *r.exact_bounds_ok;
                table.add_row({n, t, static_cast<std::uint64_t>(r.pairs), r.per_pair_ok,
                               static_cast<std::uint64_t>(r.factor_n_violations), r.max_ratio, r.log_sum_level,
                               r.log_sum_previous, r.log_bounds_ok, exact_ok, r.passed()});
            }
        }
        return table;
    }
    if (c.even_split) {
        Table table{{"n", "t", "halves_ratio_ok", "log_sum_even", "log_sum_level", "log_lower", "log_upper", "passed"},
                    {}};
        for (auto n : levels) {
            for (double t : ts) {
                const auto r = even_split_check(to_int_level(n), t, c.enumeration_guard);
                table.add_row({n, t, r.halves_ratio_ok, r.log_sum_even, r.log_sum_level, r.log_lower, r.log_upper,
                               r.passed()});
            }
        }
        return table;
    }
    const std::string name = c.family.empty() ? "all" : c.family;
    const auto family = parse_pressure_family(name);
    if (!family) throw UsageError("unknown family " + name);
    Table table{{"n", "t", "family", "log_sum", "estimate"}, {}};
    for (auto n : levels) {
        for (double t : ts) {
            const auto p = pressure_probe(to_int_level(n), t, *family, c.enumeration_guard);
            table.add_row({n, t, name, p.log_sum, p.n > 0 ? Cell(p.estimate) : Cell(std::monostate{})});
        }
    }
    return table;
}

Table dioph(const RunConfig& c) {
    if (!c.seed) throw UsageError("dioph requires --seed");
    const auto samples = sample_digits(*c.seed, c.samples, c.bits, c.threads);
    if (c.event) {
        Event event = Event::SumLevel;
        if (*c.event == "E") event = Event::ESet;
        else if (*c.event == "theta-tail") event = Event::ThetaTail;
        else if (*c.event != "C") throw UsageError("unknown event " + *c.event);
        const double eps = event == Event::SumLevel ? 0.0 : require_eps(c);
        Table table{{"event", "n", "eps", "hits", "samples", "frequency", "exact", "sigma", "z"}, {}};
        for (auto n : selected_levels(c)) {
            const auto f = event_frequency(samples, event, to_int_level(n), eps);
            table.add_row({std::string(event_name(event)), n, event == Event::SumLevel ? Cell() : Cell(eps),
                           static_cast<std::uint64_t>(f.hits), static_cast<std::uint64_t>(f.samples), f.frequency,
                           f.exact, f.sigma, f.z});
        }
        return table;
    }
    const std::vector<std::uint64_t> grid = c.n_grid.empty() ? std::vector<std::uint64_t>{5, 10, 15} : c.n_grid;
    Table table{{"sample_id", "n", "khintchine", "algebraic", "theta", "ratio"}, {}};
    auto opt = [](const std::optional<double>& v) { return v ? Cell(*v) : Cell(); };
    for (const auto& s : samples) {
        for (auto n : grid) {
            try {
                const auto rec = stat_series(s, {n}).front();
                table.add_row({s.sample_id, n, opt(rec.khintchine), opt(rec.algebraic),
                               static_cast<std::uint64_t>(rec.theta), opt(rec.ratio)});
            } catch (const InsufficientDepth&) {
                table.add_row({s.sample_id, n, Cell(), Cell(), Cell(), Cell()});
            }
        }
    }
    return table;
}

} // namespace

std::vector<std::int64_t> selected_levels(const RunConfig& config) {
    if (config.n && config.n_range) throw UsageError("--n and --n-range are exclusive");
    if (config.n) return {*config.n};
    if (config.n_range) {
        std::vector<std::int64_t> out;
        for (auto n = config.n_range->first; n <= config.n_range->second; ++n) out.push_back(n);
        return out;
    }
    throw UsageError(config.subcommand + " needs --n or --n-range");
}

std::string resolve_method(const RunConfig& config, std::int64_t n) {
    if (config.method != "auto") return config.method;
    if (n <= config.exact_guard) return "exact";
    if (n <= config.float_guard) return "compensated";
    return "operator";
}

Table execute(const RunConfig& config) {
    if (config.subcommand == "measure") return measure(config);
    if (config.subcommand == "enumerate") return enumerate(config);
    if (config.subcommand == "codes") return codes(config);
    if (config.subcommand == "operator-check") return operator_check(config);
    if (config.subcommand == "pressure") return pressure(config);
    if (config.subcommand == "dioph") return dioph(config);
    throw UsageError("unknown subcommand " + config.subcommand);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Sum-level sets of continued fractions: exact and numerical measures", "sumlevel"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "csv";
    std::string output;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", output, "Write the table to a file instead of stdout");

    std::int64_t n = 0;
    std::string range;
    std::string checkpoint;
    double eps = 0.0;
    std::uint64_t seed = 0;

    auto add_levels = [&](CLI::App* sub) {
        sub->add_option("--n", n, "Level");
        sub->add_option("--n-range", range, "Levels A:B (inclusive)");
    };
    auto add_guards = [&](CLI::App* sub) {
        sub->add_option("--guard", c.enumeration_guard, "Enumeration guard")->capture_default_str();
        sub->add_option("--exact-guard", c.exact_guard, "Largest level for exact sums")->capture_default_str();
        sub->add_option("--float-guard", c.float_guard, "Largest level for compensated sums")->capture_default_str();
    };
    auto add_operator = [&](CLI::App* sub) {
        sub->add_option("--grid", c.grid, "Operator grid size M")->capture_default_str();
        sub->add_option("--mesh", c.mesh, "Operator mesh")->check(CLI::IsMember({"dyadic", "uniform"}))->capture_default_str();
        sub->add_option("--octaves", c.octaves, "Octaves spanned by the dyadic mesh")->capture_default_str();
        sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
        sub->add_option("--checkpoint", checkpoint, "Checkpoint file for long operator runs");
    };

    auto* measure_cmd = app.add_subcommand("measure", "Lebesgue measure of sum-level and related sets");
    add_levels(measure_cmd);
    add_guards(measure_cmd);
    add_operator(measure_cmd);
    measure_cmd->add_option("--quantity", c.quantity)
        ->check(CLI::IsMember({"lambda", "complement", "e-set", "theta-tail"}))
        ->capture_default_str();
    measure_cmd->add_option("--method", c.method)
        ->check(CLI::IsMember({"exact", "compensated", "operator", "auto"}))
        ->capture_default_str();
    measure_cmd->add_option("--eps", eps, "Exponent for e-set, ratio for theta-tail");

    auto* enumerate_cmd = app.add_subcommand("enumerate", "List the intervals of a family");
    add_levels(enumerate_cmd);
    add_guards(enumerate_cmd);
    enumerate_cmd->add_option("--coding", c.coding)->check(CLI::IsMember({"farey", "sb", "cf"}))->capture_default_str();
    enumerate_cmd->add_option("--family", c.family, "C, C-complement or T")
        ->check(CLI::IsMember({"C", "C-complement", "T"}));

    auto* codes_cmd = app.add_subcommand("codes", "Translate between codes, cylinders and intervals");
    std::string code;
    std::string cylinder;
    codes_cmd->add_option("--code", code, "Farey or Stern-Brocot code");
    codes_cmd->add_option("--alphabet", c.alphabet)->check(CLI::IsMember({"farey", "sb"}))->capture_default_str();
    codes_cmd->add_option("--cylinder", cylinder, "Continued-fraction word, e.g. [[1,2]]");

    auto* check_cmd = app.add_subcommand("operator-check", "Transfer-operator checks");
    add_operator(check_cmd);
    add_guards(check_cmd);
    check_cmd->add_option("--check", c.check)
        ->check(CLI::IsMember({"monotone", "asymptotics", "pullback", "oracle"}))
        ->capture_default_str();
    check_cmd->add_option("--n-max", c.n_max, "Largest level or iteration")->capture_default_str();
    check_cmd->add_option("--levels", c.levels, "Sample levels for asymptotics")->delimiter(',');
    check_cmd->add_option("--exact-upto", c.exact_upto, "Exact terms in Cesaro sums")->capture_default_str();

    auto* pressure_cmd = app.add_subcommand("pressure", "Partition sums and pressure estimates");
    add_levels(pressure_cmd);
    pressure_cmd->add_option("--guard", c.enumeration_guard, "Enumeration guard")->capture_default_str();
    pressure_cmd->add_option("--t", c.ts, "Exponents t")->delimiter(',');
    pressure_cmd->add_option("--family", c.family, "all, C, C-complement or even")
        ->check(CLI::IsMember({"all", "C", "C-complement", "even"}));
    pressure_cmd->add_flag("--sandwich", c.sandwich, "Compare C_n with the previous level");
    pressure_cmd->add_flag("--even-split", c.even_split, "Compare merged pairs with C_n");

    auto* dioph_cmd = app.add_subcommand("dioph", "Digit statistics of seeded samples");
    add_levels(dioph_cmd);
    dioph_cmd->add_option("--seed", seed, "Master seed")->required();
    dioph_cmd->add_option("--samples", c.samples, "Number of samples")->capture_default_str();
    dioph_cmd->add_option("--bits", c.bits, "Sample resolution in bits")->capture_default_str();
    dioph_cmd->add_option("--threads", c.threads, "Worker threads")->capture_default_str();
    dioph_cmd->add_option("--n-grid", c.n_grid, "Indices for statistics")->delimiter(',');
    std::string event;
    dioph_cmd->add_option("--event", event, "C, E or theta-tail: compare frequencies with exact measures")
        ->check(CLI::IsMember({"C", "E", "theta-tail"}));
    dioph_cmd->add_option("--eps", eps, "Exponent for E, ratio for theta-tail");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    for (auto* sub : app.get_subcommands()) {
        c.subcommand = sub->get_name();
        if (sub->get_option_no_throw("--n") && sub->count("--n")) c.n = n;
        if (sub->get_option_no_throw("--eps") && sub->count("--eps")) c.eps = eps;
        if (sub->get_option_no_throw("--seed") && sub->count("--seed")) c.seed = seed;
        if (sub->get_option_no_throw("--event") && sub->count("--event")) c.event = event;
        if (sub->get_option_no_throw("--checkpoint") && sub->count("--checkpoint")) c.checkpoint = checkpoint;
        if (sub->get_option_no_throw("--code") && sub->count("--code")) c.code = code;
        if (sub->get_option_no_throw("--cylinder") && sub->count("--cylinder")) c.cylinder = cylinder;
    }
    c.format = format == "json" ? Format::Json : Format::Csv;
    if (!output.empty()) c.output = output;

    try {
        if (!range.empty()) c.n_range = parse_range(range);
        const Table table = execute(c);
        if (c.output) {
            std::ofstream file(*c.output);
            if (!file) throw IoError("cannot open " + c.output->string() + " for writing");
            emit(table, c.format, file);
        } else {
            emit(table, c.format, out);
        }
        return kOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const LevelTooLarge& e) {
        err << "error: " << e.what() << '\n';
        return kGuardExceeded;
    } catch (const CheckpointError& e) {
        err << "error: " << e.what() << '\n';
        return kCheckpointMismatch;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
}

} // namespace sumlevel::cli
