#include "plr/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "plr/construct.hpp"
#include "plr/criterion.hpp"
#include "plr/io.hpp"
#include "plr/reference_tables.hpp"
#include "plr/scramble.hpp"

namespace plr {

namespace {

struct RunConfig {
    std::uint32_t b = 2;
    int m = 8;
    std::size_t s = 5;
    double alpha = 1.0;
    std::string weights = "const:1";
    std::string modulus;  // empty: smallest admissible
    std::string generator;
    std::vector<std::string> q;
    std::string method = "fast-cbc";
    std::string input;
    std::string kind = "auto";
    std::string output;
    std::string format = "text";
    std::uint64_t seed = 1;
    int depth = 0;
    std::uint64_t replicate = 0;
    std::size_t replicates = 100;
    std::string integrand = "prodlin";
    double max_log2_points = kDefaultMaxLog2Points;
    bool primitive = false;
    bool verify = false;
    int table = 0;
    int m_min = kReferenceMinM;
    int m_max = kReferenceMaxM;
    std::vector<int> s_list;
    std::vector<double> alphas;
    std::vector<std::string> weight_list;

    // Options the user actually passed.
    bool m_given = false;
    bool s_given = false;
};

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// Wraps library validation failures raised while interpreting flags.
template <class F>
auto as_config(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InputError&) {
        throw;
    } catch (const std::logic_error& e) {
        throw ConfigError(e.what());
    }
}

void check_base(const RunConfig& cfg) {
    if (cfg.b < 2 || cfg.b > kMaxBase || !is_prime(cfg.b))
        throw ConfigError("base b = " + std::to_string(cfg.b) + " must be a prime <= " + std::to_string(kMaxBase));
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1], got " + fmt_g(alpha));
}

void check_budget(const RunConfig& cfg, std::uint32_t b, int m) {
    if (m < 1) throw ConfigError("m must be >= 1");
    as_config([&] {
        check_point_budget(b, m, cfg.max_log2_points);
        return 0;
    });
}

WeightSequence parse_weights(const std::string& spec) {
    return as_config([&] { return WeightSequence::parse(spec); });
}

Modulus resolve_modulus(const RunConfig& cfg, bool need_primitive) {
    check_base(cfg);
    if (cfg.modulus.empty()) {
        check_budget(cfg, cfg.b, cfg.m);
        return find_modulus(cfg.b, cfg.m, need_primitive);
    }
    const Poly p = as_config([&] { return Poly::parse(cfg.b, cfg.modulus); });
    if (cfg.m_given && p.degree() != cfg.m)
        throw ConfigError("modulus " + cfg.modulus + " has degree " + std::to_string(p.degree()) + " but -m is " +
                          std::to_string(cfg.m));
    check_budget(cfg, cfg.b, p.degree());
    return as_config([&] { return Modulus(p); });
}

std::ostream& open_output(const RunConfig& cfg, std::ostream& fallback, std::unique_ptr<std::ofstream>& file) {
    if (cfg.output.empty() || cfg.output == "-") return fallback;
    file = std::make_unique<std::ofstream>(cfg.output);
    if (!*file) throw ConfigError("cannot write '" + cfg.output + "'");
    return *file;
}

struct Source {
    PointSet points;
    std::string description;
    std::optional<ConstructionRecord> record;
};

ConstructionRecord construct_record(const RunConfig& cfg);

Source resolve_points(const RunConfig& cfg) {
    if (!cfg.input.empty()) {
        const std::string text = slurp(cfg.input);
        std::string kind = cfg.kind;
        if (kind == "auto") {
            std::istringstream probe(text);
            std::string first;
            while (probe >> first && first.starts_with('#')) probe.ignore(1 << 20, '\n');
            kind = first == "plr-construction" ? "construction" : "matrices";
        }
        std::istringstream in(text);
        if (kind == "construction") {
            auto rec = read_construction(in);
            auto pts = generate_points(rec.generating_vector());
            return {std::move(pts), "construction file " + cfg.input, std::move(rec)};
        }
        if (kind == "matrices") return {points_from_matrices(read_matrices(in)), "matrix file " + cfg.input, std::nullopt};
        if (kind == "points") return {read_points(in), "point file " + cfg.input, std::nullopt};
        throw ConfigError("unknown input kind '" + cfg.kind + "' (auto, construction, matrices, points)");
    }
    if (!cfg.q.empty()) {
        const Modulus p = resolve_modulus(cfg, false);
        if (cfg.s_given && cfg.s != cfg.q.size())
            throw ConfigError("-s " + std::to_string(cfg.s) + " does not match the " + std::to_string(cfg.q.size()) +
                              " polynomials given with -q");
        std::vector<Poly> q;
        for (const auto& t : cfg.q) q.push_back(as_config([&] { return Poly::parse(cfg.b, t); }));
        const GeneratingVector gv = as_config([&] { return GeneratingVector(p, q); });
        std::string desc = "p=" + p.poly().to_digit_string() + " q=";
        for (std::size_t j = 0; j < q.size(); ++j) desc += (j ? "," : "") + q[j].to_digit_string();
        return {generate_points(gv), desc, std::nullopt};
    }
    auto rec = construct_record(cfg);
    auto pts = generate_points(rec.generating_vector());
    return {std::move(pts), rec.method + " rule p=" + rec.p.to_digit_string(), std::move(rec)};
}

ConstructionRecord construct_record(const RunConfig& cfg) {
    check_alpha(cfg.alpha);
    if (cfg.s == 0) throw ConfigError("s must be >= 1");
    const auto gamma = parse_weights(cfg.weights);
    if (cfg.method != "naive-cbc" && cfg.method != "fast-cbc" && cfg.method != "korobov")
        throw ConfigError("unknown method '" + cfg.method + "' (naive-cbc, fast-cbc, korobov)");
    const bool fast = cfg.method == "fast-cbc";
    const Modulus p = resolve_modulus(cfg, fast && cfg.generator.empty());

    ConstructionRecord rec;
    rec.b = p.base();
    rec.m = p.degree();
    rec.alpha = cfg.alpha;
    rec.weights = gamma.to_string();
    rec.method = cfg.method;
    rec.p = p.poly();
    if (fast) {
        const Poly g = cfg.generator.empty() ? Poly::monomial(p.base(), 1)
                                             : as_config([&] { return Poly::parse(cfg.b, cfg.generator); });
        if (!is_primitive(p.poly(), g))
            throw ConfigError("fast-cbc needs a primitive element: " + g.to_string() + " does not generate the units modulo " +
                              p.poly().to_string() + " (pass -g or omit -p)");
        CbcFastOptions opts;
        opts.verify = cfg.verify;
        auto r = cbc_fast(build_log_table(p, g), cfg.s, cfg.alpha, gamma, opts);
        rec.g = g;
        rec.q.assign(r.gv.q().begin(), r.gv.q().end());
        rec.per_dim_B = std::move(r.per_dim_B);
    } else if (cfg.method == "naive-cbc") {
        auto r = cbc_naive(p, cfg.s, cfg.alpha, gamma);
        rec.q.assign(r.gv.q().begin(), r.gv.q().end());
        rec.per_dim_B = std::move(r.per_dim_B);
    } else {
        auto r = korobov_search(p, cfg.s, cfg.alpha, gamma);
        rec.q.assign(r.gv.q().begin(), r.gv.q().end());
        // Prefix values of the Korobov vector, for a uniform record layout.
        for (std::size_t d = 1; d <= cfg.s; ++d) {
            std::vector<Poly> prefix(rec.q.begin(), rec.q.begin() + static_cast<std::ptrdiff_t>(d));
            rec.per_dim_B.push_back(criterion_B(generate_points(GeneratingVector(p, prefix)), cfg.alpha, gamma));
        }
    }
    return rec;
}

void echo(std::ostream& out, const std::string& cmd, const std::string& details) {
    out << "# plr " << cmd << ' ' << details << '\n';
}

int cmd_construct(const RunConfig& cfg, std::ostream& out) {
    const auto rec = construct_record(cfg);
    const auto format = parse_format(cfg.format);
    std::unique_ptr<std::ofstream> file;
    auto& o = open_output(cfg, out, file);
    if (format == Format::text) {
        write_construction(o, rec);
    } else {
        echo(o, "construct",
             "b=" + std::to_string(rec.b) + " m=" + std::to_string(rec.m) + " s=" + std::to_string(rec.q.size()) +
                 " alpha=" + fmt_g(rec.alpha) + " weights=" + rec.weights + " method=" + rec.method +
                 " p=" + rec.p.to_digit_string() + " g=" + (rec.g ? rec.g->to_digit_string() : "-"));
        o << "d,q,B\n";
        for (std::size_t d = 0; d < rec.q.size(); ++d)
            o << d + 1 << ',' << rec.q[d].to_digit_string() << ',' << format_sci(rec.per_dim_B[d]) << '\n';
    }
    return kExitOk;
}

int cmd_score(const RunConfig& cfg, std::ostream& out) {
    if (cfg.input.empty()) throw ConfigError("score needs --input (construction, matrix or point file)");
    const auto src = resolve_points(cfg);
    const auto format = parse_format(cfg.format);
    std::vector<double> alphas = cfg.alphas;
    std::vector<std::string> weights = cfg.weight_list;
    if (alphas.empty()) alphas.push_back(src.record ? src.record->alpha : cfg.alpha);
    if (weights.empty()) weights.push_back(src.record ? src.record->weights : cfg.weights);
    for (double a : alphas) check_alpha(a);

    std::unique_ptr<std::ofstream> file;
    auto& o = open_output(cfg, out, file);
    echo(o, "score",
         "input=" + src.description + " b=" + std::to_string(src.points.base()) + " m=" + std::to_string(src.points.m()) +
             " s=" + std::to_string(src.points.dimension()));
    o << (format == Format::csv ? "alpha,weights,B\n" : "alpha weights B\n");
    const char sep = format == Format::csv ? ',' : ' ';
    for (const auto& w : weights) {
        const auto gamma = parse_weights(w);
        as_config([&] { return gamma.first(src.points.dimension()); });
        for (double a : alphas)
            o << fmt_g(a) << sep << gamma.to_string() << sep << format_sci(criterion_B(src.points, a, gamma)) << '\n';
    }
    return kExitOk;
}

int cmd_points(const RunConfig& cfg, std::ostream& out) {
    const auto src = resolve_points(cfg);
    const auto format = parse_format(cfg.format);
    std::unique_ptr<std::ofstream> file;
    auto& o = open_output(cfg, out, file);
    echo(o, "points", src.description);
    write_points(o, src.points, format);
    return kExitOk;
}

int cmd_scramble(const RunConfig& cfg, std::ostream& out) {
    const auto src = resolve_points(cfg);
    const auto format = parse_format(cfg.format);
    if (cfg.depth != 0 && cfg.depth < src.points.m()) throw ConfigError("--depth must be >= m");
    const ScrambleSpec spec{cfg.depth, cfg.seed};
    const auto scrambled = owen_scramble(src.points, spec, cfg.replicate);
    std::unique_ptr<std::ofstream> file;
    auto& o = open_output(cfg, out, file);
    echo(o, "scramble",
         src.description + " seed=" + std::to_string(cfg.seed) + " replicate=" + std::to_string(cfg.replicate) +
             " depth=" + std::to_string(cfg.depth == 0 ? src.points.m() : cfg.depth));
    write_scrambled(o, scrambled, src.points.m(), format);
    return kExitOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
    const auto src = resolve_points(cfg);
    const auto format = parse_format(cfg.format);
    if (cfg.replicates < 2) throw ConfigError("--R must be >= 2");
    if (cfg.depth != 0 && cfg.depth < src.points.m()) throw ConfigError("--depth must be >= m");
    const auto f = as_config([&] { return make_integrand(cfg.integrand, src.points.dimension()); });
    const auto v = replicate_variance(f, src.points, cfg.replicates, ScrambleSpec{cfg.depth, cfg.seed});
    std::unique_ptr<std::ofstream> file;
    auto& o = open_output(cfg, out, file);
    echo(o, "estimate",
         src.description + " seed=" + std::to_string(cfg.seed) + " R=" + std::to_string(cfg.replicates) +
             " integrand=" + f.id);
    const char sep = format == Format::csv ? ',' : ' ';
    o << "integrand" << sep << "N" << sep << "R" << sep << "mean" << sep << "variance" << sep << "stderr" << sep
      << "exact\n";
    o << f.id << sep << src.points.size() << sep << cfg.replicates << sep << format_sci(v.mean) << sep
      << format_sci(v.variance) << sep << format_sci(v.standard_error) << sep << fmt_g(f.exact) << '\n';
    return kExitOk;
}

// Comparison of a computed value with a printed 3-digit reference.
std::string classify(double ours, const ReferenceCell& ref, bool anomaly) {
    if (fmt3(ours) == ref.top_text) return "match";
    if (anomaly) return "print-anomaly";
    const double ratio = ours / ref.top;
    if (std::abs(ratio - 1.0) <= 0.25) return "within-25%";
    if (ratio <= 2.0 && ratio >= 0.5) return "within-2x";
    return "deviates";
}

int cmd_reproduce_table(const RunConfig& cfg, std::ostream& out) {
    if (cfg.table < 1 || cfg.table > 3) throw ConfigError("--table must be 1, 2 or 3");
    if (cfg.m_min < kReferenceMinM || cfg.m_max > kReferenceMaxM || cfg.m_min > cfg.m_max)
        throw ConfigError("m range must lie within 4..16");
    std::vector<int> s_list = cfg.s_list;
    if (s_list.empty()) s_list.assign(reference_dimensions().begin(), reference_dimensions().end());
    std::vector<double> alphas = cfg.alphas;
    if (alphas.empty()) alphas = {0.5, 1.0};
    for (int s : s_list)
        if (std::find(reference_dimensions().begin(), reference_dimensions().end(), s) == reference_dimensions().end())
            throw ConfigError("s must be one of 1, 5, 50, 100");
    for (double a : alphas)
        if (a != 0.5 && a != 1.0) throw ConfigError("alpha must be 0.5 or 1");
    check_budget(cfg, 2, cfg.m_max);
    const int s_max = *std::max_element(s_list.begin(), s_list.end());
    const auto gamma = reference_weights(cfg.table);
    const auto format = parse_format(cfg.format);

    std::unique_ptr<std::ofstream> file;
    auto& o = open_output(cfg, out, file);
    echo(o, "reproduce-table",
         "table=" + std::to_string(cfg.table) + " b=2 weights=" + gamma.to_string() + " m=" + std::to_string(cfg.m_min) +
             ".." + std::to_string(cfg.m_max) + " method=fast-cbc modulus=smallest-x-primitive");
    const char sep = format == Format::csv ? ',' : ' ';
    o << "table" << sep << "alpha" << sep << "s" << sep << "m" << sep << "p" << sep << "B" << sep << "closed_form" << sep
      << "ref_cbc" << sep << "ref_net" << sep << "rel_dev" << sep << "status\n";
    for (double a : alphas)
        for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
            const Modulus p = find_modulus(2, m, true);
            const auto r = cbc_fast(build_log_table(p, Poly::monomial(2, 1)), static_cast<std::size_t>(s_max), a, gamma);
            for (int s : s_list) {
                const double B = r.per_dim_B[static_cast<std::size_t>(s - 1)];
                const auto ref = reference_cell(cfg.table, a, s, m);
                const bool anomaly = is_known_print_anomaly(cfg.table, a, s, m);
                const std::string closed = s == 1 ? format_sci(one_dim_closed_form({a, 2, m}, gamma(1))) : "-";
                char dev[32];
                std::snprintf(dev, sizeof dev, "%+.3f", B / ref.top - 1.0);
                o << cfg.table << sep << fmt_g(a) << sep << s << sep << m << sep << p.poly().to_digit_string() << sep
                  << format_sci(B) << sep << closed << sep << ref.top_text << sep << ref.bottom_text << sep << dev << sep
                  << classify(B, ref, anomaly) << '\n';
            }
        }
    return kExitOk;
}

int cmd_find_modulus(const RunConfig& cfg, std::ostream& out) {
    check_base(cfg);
    check_budget(cfg, cfg.b, cfg.m);
    const auto p = find_modulus(cfg.b, cfg.m, cfg.primitive);
    const auto format = parse_format(cfg.format);
    if (format == Format::csv) {
        out << "b,m,digits,encoding,polynomial,x_primitive\n";
        out << cfg.b << ',' << cfg.m << ',' << p.poly().to_digit_string() << ',' << p.poly().encoding() << ','
            << p.poly().to_string() << ',' << (p.x_is_primitive() ? "yes" : "no") << '\n';
    } else {
        out << p.poly().to_digit_string() << '\n';
        out << "# encoding " << p.poly().encoding() << ", " << p.poly().to_string()
            << (p.x_is_primitive() ? ", x is primitive" : ", x is not primitive") << '\n';
    }
    return kExitOk;
}

void add_rule_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("-b,--base", cfg.b, "Prime base b")->capture_default_str();
    sub->add_option_function<int>(
           "-m", [&cfg](int m) { cfg.m = m; cfg.m_given = true; }, "Digits m (N = b^m points); default 8");
    sub->add_option_function<std::size_t>(
           "-s,--dimension", [&cfg](std::size_t s) { cfg.s = s; cfg.s_given = true; }, "Dimension s; default 5");
    sub->add_option("--alpha", cfg.alpha, "Smoothness alpha in (0, 1]")->capture_default_str();
    sub->add_option("--weights", cfg.weights, "Weights: const:c, geom:c, poly:e, list:g1,g2,...")->capture_default_str();
    sub->add_option("-p,--modulus", cfg.modulus, "Modulus as digit string (MSB first) or dec:N; default smallest");
    sub->add_option("--max-log2-points", cfg.max_log2_points, "Cap on log2(b^m)")->capture_default_str();
    sub->add_option("--format", cfg.format, "Output format: text or csv")->capture_default_str();
    sub->add_option("-o,--output", cfg.output, "Output file (default stdout)");
}

void add_source_options(CLI::App* sub, RunConfig& cfg) {
    add_rule_options(sub, cfg);
    sub->add_option("-q", cfg.q, "Generating vector components (digit strings or dec:N)");
    sub->add_option("--input", cfg.input, "Construction, matrix or point file");
    sub->add_option("--kind", cfg.kind, "Input kind: auto, construction, matrices, points")->capture_default_str();
    sub->add_option("--method", cfg.method, "Construction used when no rule is given")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Polynomial lattice rules: construction, scoring and scrambling", "plr"};
    app.require_subcommand(1);

    auto* construct = app.add_subcommand("construct", "Construct a generating vector");
    add_rule_options(construct, cfg);
    construct->add_option("--method", cfg.method, "naive-cbc, fast-cbc or korobov")->capture_default_str();
    construct->add_option("-g,--generator", cfg.generator, "Primitive element for fast-cbc (default x)");
    construct->add_flag("--verify", cfg.verify, "Re-evaluate every fast-cbc prefix directly");

    auto* score = app.add_subcommand("score", "Criterion B of a rule or digital net");
    add_source_options(score, cfg);
    score->add_option("--alphas", cfg.alphas, "Several alpha values to score");
    score->add_option("--weight-list", cfg.weight_list, "Several weight specs to score");

    auto* points = app.add_subcommand("points", "Write the point set");
    add_source_options(points, cfg);

    auto* scramble = app.add_subcommand("scramble", "Write one Owen-scrambled copy of the point set");
    add_source_options(scramble, cfg);
    scramble->add_option("--seed", cfg.seed)->capture_default_str();
    scramble->add_option("--replicate", cfg.replicate)->capture_default_str();
    scramble->add_option("--depth", cfg.depth, "Scrambled digits (0 = m)")->capture_default_str();

    auto* estimate = app.add_subcommand("estimate", "Replicated scrambled estimates and their variance");
    add_source_options(estimate, cfg);
    estimate->add_option("--integrand", cfg.integrand, "prodlin, prodquad, holder[:a,c], const:v")->capture_default_str();
    estimate->add_option("-R,--R", cfg.replicates, "Replicates")->capture_default_str();
    estimate->add_option("--seed", cfg.seed)->capture_default_str();
    estimate->add_option("--depth", cfg.depth, "Scrambled digits (0 = m)")->capture_default_str();

    auto* reproduce = app.add_subcommand("reproduce-table", "Recompute a reference table with fast CBC");
    reproduce->add_option("table,--table", cfg.table, "1 (gamma=1), 2 (0.875^j) or 3 (j^-2)")->required();
    reproduce->add_option("--m-min", cfg.m_min)->capture_default_str();
    reproduce->add_option("--m-max", cfg.m_max)->capture_default_str();
    reproduce->add_option("--s-list", cfg.s_list, "Subset of 1,5,50,100")->delimiter(',');
    reproduce->add_option("--alphas", cfg.alphas, "Subset of 0.5,1")->delimiter(',');
    reproduce->add_option("--max-log2-points", cfg.max_log2_points)->capture_default_str();
    reproduce->add_option("--format", cfg.format)->capture_default_str();
    reproduce->add_option("-o,--output", cfg.output);

    auto* findmod = app.add_subcommand("find-modulus", "Smallest irreducible polynomial of degree m");
    findmod->add_option("-b,--base", cfg.b)->capture_default_str();
    findmod->add_option("-m", cfg.m)->required();
    findmod->add_flag("--primitive", cfg.primitive, "Require x to be primitive");
    findmod->add_option("--max-log2-points", cfg.max_log2_points)->capture_default_str();
    findmod->add_option("--format", cfg.format)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "plr: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (construct->parsed()) return cmd_construct(cfg, out);
        if (score->parsed()) return cmd_score(cfg, out);
        if (points->parsed()) return cmd_points(cfg, out);
        if (scramble->parsed()) return cmd_scramble(cfg, out);
        if (estimate->parsed()) return cmd_estimate(cfg, out);
        if (reproduce->parsed()) return cmd_reproduce_table(cfg, out);
        if (findmod->parsed()) return cmd_find_modulus(cfg, out);
    } catch (const ConfigError& e) {
        err << "plr: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InputError& e) {
        err << "plr: input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "plr: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace plr
