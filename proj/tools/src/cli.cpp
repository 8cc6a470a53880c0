// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#include "nhs_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "nhs/assoc_matrix.hpp"
#include "nhs/basis.hpp"
#include "nhs/errors.hpp"
#include "nhs/evolution.hpp"
#include "nhs/quantize.hpp"
#include "nhs/spectrum.hpp"
#include "nhs/symbol.hpp"
#include "nhs/transform.hpp"
#include "nhs/version.hpp"

namespace nhs::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kSubcommands[] = {
    "basis-verify", "transform",    "apply",     "matrix",   "gershgorin",
    "invertibility", "resolvent",   "compactness", "evolve", "morse",
};

// ---------------------------------------------------------------------------
// Formatting helpers. All numbers in report bodies and CSVs go through
// these so output is byte-deterministic across runs.

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "infinity" : "-infinity";
}

json json_complex(Complex z) {
    return json{{"re", json_number(z.real())}, {"im", json_number(z.imag())}};
}

json json_index(const Index& idx) {
    json out = json::array();
    for (long k : idx) out.push_back(k);
    return out;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw ConfigError("cannot open " + path.string());
        out_ << header << '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

std::string csv_index(const Index& idx) {
    std::string out;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (j) out += ' ';
        out += std::to_string(idx[j]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Configuration.

struct RunConfig {
    std::string basis_name = "torus";
    int d = 1;
    std::vector<double> h = {1.0};
    double a = 1.0;
    double b = 0.5;

    std::string symbol_kind;  // empty: infer from expression
    std::string symbol_expression;
    std::string symbol_alpha;
    std::string symbol_potential;

    long N = 16;
    int quad_order = 0;  // 0 = auto
    int threads = 1;
    std::uint64_t seed = 1;

    std::vector<double> times;
    std::vector<double> s_values;
    std::vector<double> t_grid;
    std::vector<double> shells;
    std::optional<Complex> lambda;

    std::string function_expr;
    std::string initial_expr;
    std::optional<int> initial_random_band;

    double tol_containment = 1e-8;
    double tol_compactness = 0.1;
};

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown config key '" + item.key() + "' in " +
                              where);
}

std::vector<double> read_double_array(const json& v, const std::string& where) {
    if (!v.is_array())
        throw ConfigError(where + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number())
            throw ConfigError(where + " must contain only numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

void apply_config_file(RunConfig& cfg, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error at byte " +
                          std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    require_keys(doc,
                 {"basis", "symbol", "N", "quad_order", "threads", "seed",
                  "times", "s_values", "t_grid", "shells", "lambda",
                  "function", "initial", "tolerances"},
                 "the config root");

    if (doc.contains("basis")) {
        const json& b = doc["basis"];
        if (!b.is_object()) throw ConfigError("'basis' must be an object");
        require_keys(b, {"name", "d", "h", "a", "b"}, "'basis'");
        if (!b.contains("name") || !b["name"].is_string())
            throw ConfigError("'basis.name' (string) is required");
        cfg.basis_name = b["name"].get<std::string>();
        if (b.contains("d")) cfg.d = b["d"].get<int>();
        if (b.contains("h")) {
            if (b["h"].is_number())
                cfg.h = {b["h"].get<double>()};
            else
                cfg.h = read_double_array(b["h"], "'basis.h'");
        }
        if (b.contains("a")) cfg.a = b["a"].get<double>();
        if (b.contains("b")) cfg.b = b["b"].get<double>();
    }
    if (doc.contains("symbol")) {
        const json& s = doc["symbol"];
        if (!s.is_object()) throw ConfigError("'symbol' must be an object");
        require_keys(s, {"kind", "expression", "alpha", "potential"},
                     "'symbol'");
        if (s.contains("kind")) cfg.symbol_kind = s["kind"].get<std::string>();
        if (s.contains("expression"))
            cfg.symbol_expression = s["expression"].get<std::string>();
        if (s.contains("alpha"))
            cfg.symbol_alpha = s["alpha"].get<std::string>();
        if (s.contains("potential"))
            cfg.symbol_potential = s["potential"].get<std::string>();
    }
    if (doc.contains("N")) cfg.N = doc["N"].get<long>();
    if (doc.contains("quad_order"))
        cfg.quad_order = doc["quad_order"].get<int>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("times"))
        cfg.times = read_double_array(doc["times"], "'times'");
    if (doc.contains("s_values"))
        cfg.s_values = read_double_array(doc["s_values"], "'s_values'");
    if (doc.contains("t_grid"))
        cfg.t_grid = read_double_array(doc["t_grid"], "'t_grid'");
    if (doc.contains("shells"))
        cfg.shells = read_double_array(doc["shells"], "'shells'");
    if (doc.contains("lambda")) {
        const auto pair = read_double_array(doc["lambda"], "'lambda'");
        if (pair.size() != 2)
            throw ConfigError("'lambda' must be [re, im]");
        cfg.lambda = Complex(pair[0], pair[1]);
    }
    if (doc.contains("function"))
        cfg.function_expr = doc["function"].get<std::string>();
    if (doc.contains("initial")) {
        const json& init = doc["initial"];
        if (init.is_string()) {
            cfg.initial_expr = init.get<std::string>();
        } else if (init.is_object()) {
            require_keys(init, {"random_band"}, "'initial'");
            if (!init.contains("random_band"))
                throw ConfigError("'initial' object needs 'random_band'");
            cfg.initial_random_band = init["random_band"].get<int>();
        } else {
            throw ConfigError("'initial' must be an expression string or an "
                              "object with 'random_band'");
        }
    }
    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
        require_keys(t, {"containment", "compactness"}, "'tolerances'");
        if (t.contains("containment"))
            cfg.tol_containment = t["containment"].get<double>();
        if (t.contains("compactness"))
            cfg.tol_compactness = t["compactness"].get<double>();
    }
}

json config_echo(const RunConfig& cfg) {
    json basis{{"name", cfg.basis_name}, {"d", cfg.d}};
    json h = json::array();
    for (double v : cfg.h) h.push_back(json_number(v));
    basis["h"] = h;
    basis["a"] = json_number(cfg.a);
    basis["b"] = json_number(cfg.b);

    json symbol;
    if (!cfg.symbol_kind.empty()) symbol["kind"] = cfg.symbol_kind;
    if (!cfg.symbol_expression.empty())
        symbol["expression"] = cfg.symbol_expression;
    if (!cfg.symbol_alpha.empty()) symbol["alpha"] = cfg.symbol_alpha;
    if (!cfg.symbol_potential.empty())
        symbol["potential"] = cfg.symbol_potential;

    json out{{"basis", basis}};
    if (!symbol.empty()) out["symbol"] = symbol;
    out["N"] = cfg.N;
    out["quad_order"] = cfg.quad_order;
    out["threads"] = cfg.threads;
    out["seed"] = cfg.seed;
    auto array_of = [](const std::vector<double>& v) {
        json a = json::array();
        for (double x : v) a.push_back(json_number(x));
        return a;
    };
    if (!cfg.times.empty()) out["times"] = array_of(cfg.times);
    if (!cfg.s_values.empty()) out["s_values"] = array_of(cfg.s_values);
    if (!cfg.t_grid.empty()) out["t_grid"] = array_of(cfg.t_grid);
    if (!cfg.shells.empty()) out["shells"] = array_of(cfg.shells);
    if (cfg.lambda) out["lambda"] = json_complex(*cfg.lambda);
    if (!cfg.function_expr.empty()) out["function"] = cfg.function_expr;
    if (!cfg.initial_expr.empty()) out["initial"] = cfg.initial_expr;
    if (cfg.initial_random_band)
        out["initial"] = json{{"random_band", *cfg.initial_random_band}};
    out["tolerances"] = json{{"containment", json_number(cfg.tol_containment)},
                             {"compactness", json_number(cfg.tol_compactness)}};
    return out;
}

// ---------------------------------------------------------------------------
// Builders.

SystemPtr build_system(const RunConfig& cfg) {
    return make_system(cfg.basis_name, cfg.d, cfg.h, cfg.a, cfg.b);
}

void check_expr_dims(const symexpr::Expr& e, const BiorthogonalSystem& sys,
                     const std::string& what) {
    if (e.max_x_var() > sys.dim())
        throw ConfigError(what + " uses x" + std::to_string(e.max_x_var()) +
                          " but the domain has dimension " +
                          std::to_string(sys.dim()));
    if (e.max_xi_var() > sys.lattice_dim())
        throw ConfigError(what + " uses xi" + std::to_string(e.max_xi_var()) +
                          " but the lattice has dimension " +
                          std::to_string(sys.lattice_dim()));
}

Symbol build_symbol(const RunConfig& cfg, const BiorthogonalSystem& sys) {
    if (cfg.symbol_kind.empty()) {
        if (cfg.symbol_expression.empty())
            throw ConfigError("this subcommand needs a symbol: set 'symbol' "
                              "in the config or pass --symbol");
        symexpr::Expr e = symexpr::Expr::parse(cfg.symbol_expression);
        check_expr_dims(e, sys, "the symbol expression");
        if (!e.depends_on_x()) return Symbol::multiplier(std::move(e));
        return Symbol::general(std::move(e));
    }
    if (cfg.symbol_kind == "multiplier") {
        if (cfg.symbol_expression.empty())
            throw ConfigError("a multiplier symbol needs 'expression'");
        symexpr::Expr e = symexpr::Expr::parse(cfg.symbol_expression);
        check_expr_dims(e, sys, "the symbol expression");
        return Symbol::multiplier(std::move(e));
    }
    if (cfg.symbol_kind == "separable") {
        if (cfg.symbol_alpha.empty() || cfg.symbol_potential.empty())
            throw ConfigError(
                "a separable symbol needs 'alpha' and 'potential'");
        symexpr::Expr alpha = symexpr::Expr::parse(cfg.symbol_alpha);
        symexpr::Expr pot = symexpr::Expr::parse(cfg.symbol_potential);
        check_expr_dims(alpha, sys, "the symbol frequency part");
        check_expr_dims(pot, sys, "the symbol potential");
        return Symbol::separable(std::move(alpha), std::move(pot));
    }
    if (cfg.symbol_kind == "general") {
        if (cfg.symbol_expression.empty())
            throw ConfigError("a general symbol needs 'expression'");
        symexpr::Expr e = symexpr::Expr::parse(cfg.symbol_expression);
        check_expr_dims(e, sys, "the symbol expression");
        return Symbol::general(std::move(e));
    }
    throw ConfigError("unknown symbol kind '" + cfg.symbol_kind +
                      "' (multiplier, separable, general)");
}

GridFunction sample_expression(const TransformPlan& plan,
                               const std::string& text,
                               const std::string& what) {
    symexpr::Expr e = symexpr::Expr::parse(text);
    check_expr_dims(e, *plan.system, what);
    if (e.depends_on_xi())
        throw ConfigError(what + " must depend on x variables only");
    return sample_on_plan(plan, [&](const Point& x) {
        symexpr::EvalContext ctx;
        ctx.x = std::span<const double>(x.data(), x.size());
        return Complex(e.evaluate(ctx), 0.0);
    });
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() {  // [0, 1)
        return static_cast<double>(gen() >> 11) * 0x1.0p-53;
    }
    double symmetric() { return 2.0 * uniform() - 1.0; }
};

/// Real-valued random band: Hermitian coefficient pairs c(-xi) = conj(c(xi))
/// over the plan's torus modes with max|xi_j| <= band.
SpectralCoefficients random_band_initial(const TransformPlan& plan, int band,
                                         std::uint64_t seed) {
    if (plan.system->name() != "torus")
        throw ConfigError(
            "random initial data is only defined for the torus family");
    Rng rng(seed);
    Eigen::VectorXcd dense =
        Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(plan.mode_count()));
    for (std::size_t k = 0; k < plan.mode_count(); ++k) {
        const Index& xi = plan.modes[k].index;
        long max_abs = 0;
        bool positive = false, zero = true;
        for (long v : xi) {
            max_abs = std::max(max_abs, std::labs(v));
            if (v != 0 && zero) {
                positive = v > 0;
                zero = false;
            }
        }
        if (max_abs > band) continue;
        if (zero) {
            dense[static_cast<Eigen::Index>(k)] = Complex(rng.symmetric(), 0.0);
            continue;
        }
        if (!positive) continue;
        Index neg = xi;
        for (long& v : neg) v = -v;
        const int partner = plan.mode_position(neg);
        if (partner < 0) continue;
        const Complex c(rng.symmetric(), rng.symmetric());
        dense[static_cast<Eigen::Index>(k)] = c;
        dense[partner] = std::conj(c);
    }
    return from_dense(plan, dense, CoefficientKind::Transform);
}

// ---------------------------------------------------------------------------
// Report writing.

void write_report(const fs::path& dir, const std::string& subcommand,
                  const RunConfig& cfg, const json& results) {
    fs::create_directories(dir);
    json report{{"schema", kReportSchema},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"config", config_echo(cfg)},
                {"results", results}};
    {
        std::ofstream out(dir / "report.json");
        if (!out)
            throw ConfigError("cannot write " + (dir / "report.json").string());
        out << report.dump(2) << '\n';
    }
    // Timestamps live only in the sidecar so report.json stays
    // byte-identical across reruns.
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
    json meta{{"schema", kReportSchema}, {"generated_at", stamp}};
    std::ofstream out(dir / "report.meta.json");
    out << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Subcommand handlers.

json run_basis_verify(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    if (cfg.N < 1) throw ConfigError("N must be at least 1");
    const auto count = static_cast<std::size_t>(cfg.N);
    const auto modes = enumerate_indices(*system, count);
    const long freq = max_resolution_frequency(*system, modes);
    const int order = cfg.quad_order > 0 ? cfg.quad_order
                                         : default_quad_order(2 * freq);
    const QuadPtr quad = build_quadrature(system->domain(), order);

    const double deviation = verify_biorthogonality(*system, count, *quad);
    const NormalizationReport norms =
        normalization_report(*system, count, *quad);
    const RieszEstimate riesz = estimate_riesz_constants(*system, count, *quad);
    const double growth =
        growth_check(*system, std::min<std::size_t>(count, 16), 64);
    std::vector<std::size_t> counts;
    for (std::size_t c : {count / 4, count / 2, count})
        if (c >= 1) counts.push_back(c);
    const auto sums =
        summability_partial_sums(*system, system->summability_exponent(), counts);

    CsvWriter csv(dir / "modes.csv",
                  "index,lambda_re,lambda_im,bracket,u_norm,v_norm");
    for (std::size_t k = 0; k < modes.size(); ++k)
        csv.row({csv_index(modes[k].index),
                 format_double(modes[k].lambda.real()),
                 format_double(modes[k].lambda.imag()),
                 format_double(modes[k].bracket),
                 format_double(norms.u_norms[k]),
                 format_double(norms.v_norms[k])});

    json summability{{"s", json_number(system->summability_exponent())},
                     {"counts", counts},
                     {"partial_sums", json::array()}};
    for (double v : sums) summability["partial_sums"].push_back(json_number(v));

    return json{
        {"quad_order", order},
        {"max_biorthogonality_deviation", json_number(deviation)},
        {"normalization",
         {{"max_u_deviation", json_number(norms.max_u_deviation)},
          {"max_v_deviation", json_number(norms.max_v_deviation)},
          {"note", "built-in families keep their classical scalings; "
                   "deviations from unit norm are expected and reported"}}},
        {"riesz",
         {{"k1", json_number(riesz.k1)},
          {"K1", json_number(riesz.K1)},
          {"k2", json_number(riesz.k2)},
          {"K2", json_number(riesz.K2)},
          {"truncation_level", riesz.truncation_level}}},
        {"growth",
         {{"max_sup_ratio", json_number(growth)},
          {"declared_constant", json_number(system->growth_constant())},
          {"estimator", "grid sup with golden-section refinement"}}},
        {"summability", summability},
    };
}

json sobolev_block(const TransformPlan& plan,
                   const SpectralCoefficients& f_hat,
                   const SpectralCoefficients& f_star,
                   const std::vector<double>& s_values) {
    json out = json::array();
    for (double s : s_values) {
        const SobolevNorm h = sobolev_norm(*plan.system, f_hat, f_star, s);
        out.push_back(json{{"s", json_number(s)},
                           {"value", json_number(h.value)},
                           {"imaginary_part", json_number(h.imaginary_part)},
                           {"imaginary_flag", h.imaginary_flag}});
    }
    return out;
}

json run_transform(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    if (cfg.function_expr.empty())
        throw ConfigError("'function' (an expression in x) is required");
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order, 1,
                  cfg.threads);
    const GridFunction f = sample_expression(plan, cfg.function_expr,
                                             "'function'");
    const SpectralCoefficients f_hat = forward_transform(plan, f);
    const SpectralCoefficients f_star = adjoint_transform(plan, f);

    const GridFunction back = inverse_transform_grid(plan, f_hat);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < plan.node_count(); ++q) {
        const auto i = static_cast<Eigen::Index>(q);
        num += plan.weights[i] * std::norm(back.values[i] - f.values[i]);
        den += plan.weights[i] * std::norm(f.values[i]);
    }
    const double round_trip =
        std::sqrt(num) / std::max(std::sqrt(den), 1e-300);

    const Complex mixed = parseval_mixed(f_hat, f_star);
    const Complex direct = inner_product(f, f);

    CsvWriter csv(dir / "coefficients.csv",
                  "index,bracket,re,im,star_re,star_im");
    for (const EigenData& m : plan.modes) {
        const Complex c = f_hat.at(m.index);
        const Complex cs = f_star.at(m.index);
        csv.row({csv_index(m.index), format_double(m.bracket),
                 format_double(c.real()), format_double(c.imag()),
                 format_double(cs.real()), format_double(cs.imag())});
    }

    json out{
        {"mode_count", plan.mode_count()},
        {"quad_order", plan.quad->order_per_dim},
        {"round_trip_relative_error", json_number(round_trip)},
        {"parseval_mixed", json_complex(mixed)},
        {"quadrature_inner_product", json_complex(direct)},
        {"parseval_mixed_gap", json_number(std::abs(mixed - direct))},
        {"note", "the mixed pairing equals the inner product exactly only "
                 "for functions spanned by the truncation"},
    };
    if (!cfg.s_values.empty())
        out["sobolev"] = sobolev_block(plan, f_hat, f_star, cfg.s_values);
    return out;
}

json run_apply(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    if (cfg.function_expr.empty())
        throw ConfigError("'function' (an expression in x) is required");
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order, 2,
                  cfg.threads);
    const Symbol sigma = build_symbol(cfg, *system);
    const GridFunction f = sample_expression(plan, cfg.function_expr,
                                             "'function'");
    const SpectralCoefficients f_hat = forward_transform(plan, f);
    const GridFunction g = apply_operator_grid(plan, sigma, f_hat);
    const SpectralCoefficients g_hat = forward_transform(plan, g);

    double sup = 0.0;
    for (Eigen::Index q = 0; q < g.values.size(); ++q)
        sup = std::max(sup, std::abs(g.values[q]));

    CsvWriter csv(dir / "result_coefficients.csv", "index,bracket,re,im");
    for (const EigenData& m : plan.modes) {
        const Complex c = g_hat.at(m.index);
        csv.row({csv_index(m.index), format_double(m.bracket),
                 format_double(c.real()), format_double(c.imag())});
    }

    return json{
        {"symbol", sigma.label()},
        {"symbol_kind", to_string(sigma.kind())},
        {"mode_count", plan.mode_count()},
        {"result_l2_norm", json_number(l2_norm(g))},
        {"result_sup_on_nodes", json_number(sup)},
    };
}

json invertibility_json(const InvertibilityReport& rep) {
    return json{
        {"inf_abs_diagonal", json_number(rep.inf_abs_diagonal)},
        {"argmin_index", json_index(rep.argmin_index)},
        {"a1", json_number(rep.a1)},
        {"a2", json_number(rep.a2)},
        {"contraction", json_number(rep.contraction)},
        {"condition_diag", rep.condition_diag},
        {"condition_a1", rep.condition_a1},
        {"condition_a2", rep.condition_a2},
        {"satisfied", rep.satisfied},
        {"compact_inverse_flag", rep.compact_inverse_flag},
        {"solve_residual", json_number(rep.solve_residual)},
        {"note", rep.note},
    };
}

json run_matrix(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    const Symbol sigma = build_symbol(cfg, *system);
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order, 2,
                  cfg.threads);
    const AssociatedMatrix M = build_matrix(plan, sigma, cfg.threads);
    const RieszEstimate riesz = estimate_riesz_constants(
        *system, static_cast<std::size_t>(cfg.N), *plan.quad);
    const CroneReport crone = crone_report(M, {}, riesz);
    const InvertibilityReport inv = invertibility_check(M);

    {
        CsvWriter csv(dir / "matrix.csv", "row,col,re,im");
        for (Eigen::Index r = 0; r < M.entries.rows(); ++r)
            for (Eigen::Index c = 0; c < M.entries.cols(); ++c)
                csv.row({std::to_string(r), std::to_string(c),
                         format_double(M.entries(r, c).real()),
                         format_double(M.entries(r, c).imag())});
    }
    {
        CsvWriter csv(dir / "sections.csv", "n,norm_m,norm_mstar_m");
        for (std::size_t i = 0; i < crone.section_sizes.size(); ++i)
            csv.row({std::to_string(crone.section_sizes[i]),
                     format_double(crone.norms_m[i]),
                     format_double(crone.norms_mstar_m[i])});
    }

    json crone_json{
        {"lower_bound", json_number(crone.lower_bound)},
        {"monotone", crone.monotone_m && crone.monotone_mstar_m},
        {"note", "finite-section norms are lower bounds for the operator "
                 "norm; the sandwich scales by the truncation Riesz ratio"},
    };
    if (crone.sandwich_lower) {
        crone_json["sandwich_lower"] = json_number(*crone.sandwich_lower);
        crone_json["sandwich_upper"] = json_number(*crone.sandwich_upper);
    }

    return json{
        {"symbol", sigma.label()},
        {"symbol_kind", to_string(sigma.kind())},
        {"size", M.size()},
        {"quad_order", plan.quad->order_per_dim},
        {"riesz",
         {{"k1", json_number(riesz.k1)}, {"K1", json_number(riesz.K1)}}},
        {"crone", crone_json},
        {"invertibility", invertibility_json(inv)},
    };
}

json run_gershgorin(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    const Symbol sigma = build_symbol(cfg, *system);
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order, 2,
                  cfg.threads);
    const AssociatedMatrix M = build_matrix(plan, sigma, cfg.threads);
    const auto discs = gershgorin_discs(M);
    const auto eigs = truncated_eigenvalues(M, M.size());
    const ContainmentResult containment =
        containment_check(discs, eigs, cfg.tol_containment);
    const auto components = component_multiplicity(discs, eigs);

    // Radius truncation error against a doubled truncation, skipped when the
    // doubled assembly would be disproportionate.
    json radius_delta;
    if (cfg.N * 2 <= 512) {
        const AssociatedMatrix M2 = build_matrix_default(
            system, sigma, static_cast<std::size_t>(cfg.N) * 2, cfg.quad_order,
            cfg.threads);
        const auto delta = gershgorin_radius_delta(M, M2);
        double dmax = 0.0, dsum = 0.0;
        for (double v : delta) {
            dmax = std::max(dmax, v);
            dsum += v;
        }
        radius_delta = json{
            {"larger_truncation", cfg.N * 2},
            {"max", json_number(dmax)},
            {"mean", json_number(dsum / static_cast<double>(delta.size()))},
        };
    } else {
        radius_delta = json{{"skipped", "doubled truncation exceeds 512"}};
    }

    {
        CsvWriter csv(dir / "discs.csv", "index,center_re,center_im,radius");
        for (const auto& d : discs)
            csv.row({csv_index(d.index), format_double(d.center.real()),
                     format_double(d.center.imag()),
                     format_double(d.radius)});
    }
    {
        CsvWriter csv(dir / "eigenvalues.csv",
                      "re,im,residual,nearest_disc,distance");
        for (std::size_t e = 0; e < eigs.size(); ++e)
            csv.row({format_double(eigs[e].value.real()),
                     format_double(eigs[e].value.imag()),
                     format_double(eigs[e].residual),
                     std::to_string(containment.nearest_disc[e]),
                     format_double(containment.distances[e])});
    }

    bool all_contained = true;
    for (bool c : containment.contained) all_contained = all_contained && c;

    json comp_json = json::array();
    for (const auto& comp : components)
        comp_json.push_back(json{{"disc_count", comp.disc_count},
                                 {"eigenvalue_count", comp.eigenvalue_count},
                                 {"count_matches", comp.count_matches}});

    return json{
        {"symbol", sigma.label()},
        {"size", M.size()},
        {"disc_count", discs.size()},
        {"eigenvalue_count", eigs.size()},
        {"radius_truncated", true},
        {"containment",
         {{"all_contained", all_contained},
          {"max_violation", json_number(containment.max_violation)},
          {"tolerance", json_number(containment.tolerance)},
          {"note", "violations beyond tolerance indicate a software fault; "
                   "they are reported, not thrown"}}},
        {"components", comp_json},
        {"radius_delta", radius_delta},
        {"invertibility", invertibility_json(invertibility_check(M))},
    };
}

json run_invertibility(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    const Symbol sigma = build_symbol(cfg, *system);
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order, 2,
                  cfg.threads);
    const AssociatedMatrix M = build_matrix(plan, sigma, cfg.threads);
    const InvertibilityReport rep = invertibility_check(M);

    CsvWriter csv(dir / "diagonal.csv", "index,re,im,abs");
    for (Eigen::Index k = 0; k < M.entries.rows(); ++k)
        csv.row({csv_index(M.order[static_cast<std::size_t>(k)].index),
                 format_double(M.entries(k, k).real()),
                 format_double(M.entries(k, k).imag()),
                 format_double(std::abs(M.entries(k, k)))});

    return json{
        {"symbol", sigma.label()},
        {"size", M.size()},
        {"invertibility", invertibility_json(rep)},
    };
}

json run_resolvent(const RunConfig& cfg, const fs::path&) {
    const SystemPtr system = build_system(cfg);
    const Symbol sigma = build_symbol(cfg, *system);
    if (!cfg.lambda)
        throw ConfigError("'lambda' ([re, im]) is required for resolvent");
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order, 2,
                  cfg.threads);
    const InvertibilityReport rep =
        resolvent_membership(plan, sigma, *cfg.lambda, cfg.threads);
    return json{
        {"symbol", sigma.label()},
        {"lambda", json_complex(*cfg.lambda)},
        {"verdict", rep.satisfied ? "resolvent-indicated" : "no-conclusion"},
        {"invertibility", invertibility_json(rep)},
        {"note", "section-level evidence at this truncation only"},
    };
}

json run_compactness(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    const Symbol sigma = build_symbol(cfg, *system);
    const std::vector<double> shells =
        cfg.shells.empty() ? default_shell_bounds() : cfg.shells;
    const CompactnessReport rep = compactness_verdict(
        *system, sigma, shells, cfg.tol_compactness);

    CsvWriter csv(dir / "shells.csv", "lower,upper,value,population");
    for (std::size_t k = 0; k < rep.evidence.shell_values.size(); ++k)
        csv.row({format_double(rep.evidence.shell_bounds[k]),
                 format_double(rep.evidence.shell_bounds[k + 1]),
                 format_double(rep.evidence.shell_values[k]),
                 std::to_string(rep.evidence.shell_populations[k])});

    json values = json::array();
    for (double v : rep.evidence.shell_values) values.push_back(json_number(v));
    json bounds = json::array();
    for (double v : rep.evidence.shell_bounds) bounds.push_back(json_number(v));

    return json{
        {"symbol", sigma.label()},
        {"verdict", to_string(rep.verdict)},
        {"d_hat", json_number(rep.evidence.d_hat)},
        {"diverging", rep.evidence.diverging},
        {"tolerance", json_number(rep.tolerance)},
        {"multiplier_criterion", rep.multiplier_criterion},
        {"shell_bounds", bounds},
        {"shell_values", values},
        {"explanation", rep.explanation},
        {"note", rep.evidence.note},
    };
}

json run_evolve(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    const Symbol sigma = build_symbol(cfg, *system);
    if (cfg.initial_expr.empty())
        throw ConfigError("'initial' (an expression in x) is required");
    if (cfg.times.empty())
        throw ConfigError("'times' is required for evolve");
    const int factor = sigma.depends_on_x() ? 2 : 1;
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order,
                  factor, cfg.threads);
    const GridFunction f0 = sample_expression(plan, cfg.initial_expr,
                                              "'initial'");
    const HeatTrajectory traj = heat_solve(plan, sigma, f0, cfg.times);

    json residuals = json::array();
    constexpr double kDt = 1e-5;
    for (double t : traj.times) {
        if (t - kDt < 0.0) continue;
        residuals.push_back(json{
            {"t", json_number(t)},
            {"dt", json_number(kDt)},
            {"l2_residual", json_number(residual_check(plan, traj, sigma, t))},
        });
    }

    json stability = json::array();
    if (!cfg.s_values.empty()) {
        const RieszEstimate riesz = estimate_riesz_constants(
            *system, static_cast<std::size_t>(cfg.N), *plan.quad);
        for (double s : cfg.s_values) {
            const StabilityReport rep = sobolev_stability(plan, traj, s, riesz);
            json norms = json::array();
            for (double v : rep.hs_norms) norms.push_back(json_number(v));
            stability.push_back(json{{"s", json_number(s)},
                                     {"bounded", rep.bounded},
                                     {"max_ratio", json_number(rep.max_ratio)},
                                     {"riesz_factor",
                                      json_number(rep.riesz_factor)},
                                     {"hs_norms", norms}});
        }
    }

    CsvWriter csv(dir / "norms.csv", "t,l2_norm");
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        csv.row({format_double(traj.times[i]),
                 format_double(traj.l2_norms[i])});

    json times = json::array(), l2 = json::array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        times.push_back(json_number(traj.times[i]));
        l2.push_back(json_number(traj.l2_norms[i]));
    }

    return json{
        {"symbol", sigma.label()},
        {"eigen_source",
         traj.source == EigenSource::Multiplier ? "multiplier" : "section"},
        {"eigenvector_condition", json_number(traj.eigenvector_condition)},
        {"min_re_chi", json_number(traj.min_re_chi)},
        {"expansion_residual", json_number(traj.expansion_residual)},
        {"times", times},
        {"l2_norms", l2},
        {"residual_checks", residuals},
        {"stability", stability},
    };
}

json run_morse(const RunConfig& cfg, const fs::path& dir) {
    const SystemPtr system = build_system(cfg);
    const Symbol sigma = build_symbol(cfg, *system);
    const int factor = sigma.depends_on_x() ? 2 : 1;
    const TransformPlan plan =
        make_plan(system, static_cast<std::size_t>(cfg.N), cfg.quad_order,
                  factor, cfg.threads);

    SpectralCoefficients f0;
    double projection_defect = 0.0;
    std::string initial_desc;
    if (!cfg.initial_expr.empty()) {
        const GridFunction g = sample_expression(plan, cfg.initial_expr,
                                                 "'initial'");
        f0 = forward_transform(plan, g);
        const GridFunction back = inverse_transform_grid(plan, f0);
        double num = 0.0, den = 0.0;
        for (Eigen::Index q = 0; q < g.values.size(); ++q) {
            num += plan.weights[q] * std::norm(back.values[q] - g.values[q]);
            den += plan.weights[q] * std::norm(g.values[q]);
        }
        projection_defect = std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
        initial_desc = cfg.initial_expr;
    } else if (cfg.initial_random_band) {
        f0 = random_band_initial(plan, *cfg.initial_random_band, cfg.seed);
        initial_desc = "random band " +
                       std::to_string(*cfg.initial_random_band) + ", seed " +
                       std::to_string(cfg.seed) + " (mt19937_64)";
    } else {
        throw ConfigError("'initial' (expression or {\"random_band\": B}) is "
                          "required for morse");
    }

    const MorseEmergence emergence =
        morse_emergence(plan, sigma, f0, cfg.t_grid);

    CsvWriter csv(dir / "emergence.csv",
                  "t,count,is_morse,distinct_values,min_value_gap");
    for (std::size_t i = 0; i < emergence.t_grid.size(); ++i) {
        const MorseReport& r = emergence.reports[i];
        csv.row({format_double(emergence.t_grid[i]), std::to_string(r.count),
                 r.is_morse ? "1" : "0", r.distinct_values ? "1" : "0",
                 format_double(r.min_value_gap)});
    }

    json per_time = json::array();
    for (std::size_t i = 0; i < emergence.t_grid.size(); ++i) {
        const MorseReport& r = emergence.reports[i];
        per_time.push_back(json{{"t", json_number(emergence.t_grid[i])},
                                {"count", r.count},
                                {"is_morse", r.is_morse},
                                {"distinct_values", r.distinct_values},
                                {"min_value_gap",
                                 json_number(r.min_value_gap)}});
    }

    json out{
        {"symbol", sigma.label()},
        {"initial", initial_desc},
        {"initial_projection_defect", json_number(projection_defect)},
        {"found", emergence.found},
        {"per_time", per_time},
        {"degeneracy_tolerance", json_number(1e-8)},
        {"value_tolerance", json_number(1e-8)},
    };
    if (emergence.found) {
        out["T"] = json_number(emergence.T);
        out["persistent_count"] = emergence.persistent_count;
    } else {
        out["diagnostics"] = emergence.diagnostics;
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    std::string subcommand;
    RunConfig cfg;
    fs::path output_dir = ".";

    try {
        if (args.empty())
            throw ConfigError(
                "usage: nhs <subcommand> [flags]; subcommands: basis-verify, "
                "transform, apply, matrix, gershgorin, invertibility, "
                "resolvent, compactness, evolve, morse");
        subcommand = args[0];
        if (std::find(std::begin(kSubcommands), std::end(kSubcommands),
                      subcommand) == std::end(kSubcommands))
            throw ConfigError("unknown subcommand '" + subcommand + "'");

        CLI::App app{"nonharmonic spectral toolkit", "nhs " + subcommand};
        std::string config_path, basis_flag, symbol_flag, symbol_kind_flag;
        std::string alpha_flag, potential_flag, output_flag = ".";
        long n_flag = -1;
        int quad_flag = -1, threads_flag = -1;
        std::int64_t seed_flag = -1;
        app.add_option("--config", config_path, "JSON config file");
        app.add_option("--output", output_flag, "output directory");
        app.add_option("--threads", threads_flag, "worker thread cap");
        app.add_option("--seed", seed_flag, "random seed");
        app.add_option("--basis", basis_flag, "basis family name");
        app.add_option("--symbol", symbol_flag,
                       "symbol expression (kind inferred)");
        app.add_option("--symbol-kind", symbol_kind_flag,
                       "multiplier|separable|general");
        app.add_option("--alpha", alpha_flag, "separable frequency part");
        app.add_option("--potential", potential_flag, "separable potential");
        app.add_option("--N", n_flag, "truncation size");
        app.add_option("--quad-order", quad_flag, "quadrature order per dim");

        std::vector<std::string> rest(args.begin() + 1, args.end());
        std::vector<const char*> argv;
        argv.push_back("nhs");
        for (const auto& a : rest) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }

        if (!config_path.empty()) apply_config_file(cfg, config_path);
        if (!basis_flag.empty()) cfg.basis_name = basis_flag;
        if (!symbol_flag.empty()) {
            cfg.symbol_kind.clear();
            cfg.symbol_expression = symbol_flag;
            cfg.symbol_alpha.clear();
            cfg.symbol_potential.clear();
        }
        if (!symbol_kind_flag.empty()) cfg.symbol_kind = symbol_kind_flag;
        if (!alpha_flag.empty()) cfg.symbol_alpha = alpha_flag;
        if (!potential_flag.empty()) cfg.symbol_potential = potential_flag;
        if (n_flag >= 0) cfg.N = n_flag;
        if (quad_flag >= 0) cfg.quad_order = quad_flag;
        if (threads_flag >= 0) cfg.threads = threads_flag;
        if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
        output_dir = output_flag;

        fs::create_directories(output_dir);
        json results;
        if (subcommand == "basis-verify")
            results = run_basis_verify(cfg, output_dir);
        else if (subcommand == "transform")
            results = run_transform(cfg, output_dir);
        else if (subcommand == "apply")
            results = run_apply(cfg, output_dir);
        else if (subcommand == "matrix")
            results = run_matrix(cfg, output_dir);
        else if (subcommand == "gershgorin")
            results = run_gershgorin(cfg, output_dir);
        else if (subcommand == "invertibility")
            results = run_invertibility(cfg, output_dir);
        else if (subcommand == "resolvent")
            results = run_resolvent(cfg, output_dir);
        else if (subcommand == "compactness")
            results = run_compactness(cfg, output_dir);
        else if (subcommand == "evolve")
            results = run_evolve(cfg, output_dir);
        else if (subcommand == "morse")
            results = run_morse(cfg, output_dir);

        write_report(output_dir, subcommand, cfg, results);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violation: " << e.what() << '\n';
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace nhs::cli
