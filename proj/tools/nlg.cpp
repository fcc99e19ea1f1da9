// nlg: noise-robustness analysis of non-local games.

#include "nlg/commands.hpp"
#include "nlg/errors.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlg::ArgumentError;

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) throw ArgumentError(what + ": not a number: '" + text + "'");
    return v;
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) throw ArgumentError(what + ": not an integer: '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

nlg::EtaGrid parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ArgumentError("--eta-grid expects START:STOP:STEP, got '" + text + "'");
    nlg::EtaGrid g{parse_double(parts[0], "--eta-grid"), parse_double(parts[1], "--eta-grid"),
                   parse_double(parts[2], "--eta-grid")};
    return g;
}

nlg::CurveMode parse_mode(const std::string& text) {
    if (text == "det") return nlg::CurveMode::exact();
    if (text.rfind("mc:", 0) == 0) {
        const auto parts = split(text.substr(3), 'x');
        if (parts.size() == 2) {
            const auto s = parse_int(parts[0], "--mode"), d = parse_int(parts[1], "--mode");
            if (s >= 1 && d >= 1 && s <= 1'000'000 && d <= 1'000'000)
                return nlg::CurveMode::monte_carlo(static_cast<int>(s), static_cast<int>(d), 0);
        }
    }
    throw ArgumentError("--mode expects det or mc:SxD with S, D >= 1, got '" + text + "'");
}

struct RawOptions {
    std::string games;
    std::string n_res;
    std::vector<std::string> overrides;
    double alpha = 0.05;
    std::string grid = "0:1:0.01";
    std::string mode = "det";
    std::uint64_t seed = 0;
    std::string out = "nlg-out";
    std::string config_dir = "nlg-configs";
    bool solve_missing = false;
    std::string sense = "at-most";
    double eta_prime = -1.0;
};

nlg::RunConfig to_config(const RawOptions& raw, std::vector<std::int64_t> default_n_res) {
    nlg::RunConfig cfg;
    if (!raw.games.empty())
        for (auto& g : split(raw.games, ',')) cfg.games.push_back(nlg::GameId::parse(g).str());
    cfg.n_res = std::move(default_n_res);
    if (!raw.n_res.empty()) {
        cfg.n_res.clear();
        for (const auto& n : split(raw.n_res, ',')) cfg.n_res.push_back(parse_int(n, "--n-res"));
    }
    for (const auto& o : raw.overrides) {
        const auto eq = o.rfind('=');
        if (eq == std::string::npos) throw ArgumentError("--n-res-override expects GAME=N, got '" + o + "'");
        cfg.n_res_override[nlg::GameId::parse(o.substr(0, eq)).str()] =
            parse_int(o.substr(eq + 1), "--n-res-override");
    }
    cfg.alpha = raw.alpha;
    cfg.eta_grid = parse_grid(raw.grid);
    cfg.mode = parse_mode(raw.mode);
    cfg.seed = raw.seed;
    cfg.out_dir = raw.out;
    cfg.config_dir = raw.config_dir;
    cfg.solve_missing = raw.solve_missing;
    if (raw.sense == "at-most")
        cfg.sense = nlg::VertexSense::AtMost;
    else if (raw.sense == "at-least")
        cfg.sense = nlg::VertexSense::AtLeast;
    else
        throw ArgumentError("--lp-sense expects at-most or at-least");
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* sub, RawOptions& raw, bool analysis) {
    sub->add_option("--games", raw.games,
                    "comma separated game ids: chsh, 2chsh, msg, opt2chsh:<eta'>");
    sub->add_option("--out", raw.out, "output directory")->capture_default_str();
    sub->add_option("--config-dir", raw.config_dir, "cache directory for solved opt2chsh configs")
        ->capture_default_str();
    sub->add_flag("--solve-missing", raw.solve_missing, "solve opt2chsh configs that are not cached yet");
    sub->add_option("--lp-sense", raw.sense, "vertex constraint sense of the LP: at-most | at-least")
        ->capture_default_str();
    if (!analysis) return;
    sub->add_option("--n-res", raw.n_res, "resource budget(s) N[,N...]");
    sub->add_option("--n-res-override", raw.overrides, "per-game budget GAME=N (repeatable)");
    sub->add_option("--alpha", raw.alpha, "significance level")->capture_default_str();
    sub->add_option("--eta-grid", raw.grid, "visibility grid START:STOP:STEP")->capture_default_str();
    sub->add_option("--mode", raw.mode, "det | mc:SxD (S seeds, D draws per seed)")->capture_default_str();
    sub->add_option("--seed", raw.seed, "base seed; run i uses seed + i")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlg: noise robustness of non-local games under depolarizing noise.\n"
                 "Every table is written as CSV (with '# key: value' metadata lines) and a JSON mirror."};
    app.require_subcommand(1);
    app.set_version_flag("--version", nlg::kToolVersion);

    RawOptions raw;
    auto* bounds = app.add_subcommand("bounds", "local and quantum bounds per game.\n"
                                                "bounds.csv columns: game,local_bound,quantum_bound");
    add_common(bounds, raw, false);

    auto* curves = app.add_subcommand(
        "curves", "convincingness p-value against visibility.\n"
                  "curves.csv columns: kind,game,n_res,n_rounds,eta,p_value\n"
                  "  kind=curve: one row per grid point; kind=crossing: eta_dagger and the p-value there.\n"
                  "Also writes curves.svg (or curves_<N>.svg for several budgets).");
    add_common(curves, raw, true);

    auto* table2 = app.add_subcommand(
        "table2", "predictor table. Defaults: built-in games, --n-res 1000,10000.\n"
                  "table2.csv columns: game,n_res,local_bound,quantum_bound,kappa,ratio,raw_gap,\n"
                  "  delta_const,delta_eta2,delta_eta4,delta_sq_const,delta_sq_eta2,delta_sq_eta4,\n"
                  "  delta_sq_eta6,delta_sq_eta8,one_minus_eta_dagger");
    add_common(table2, raw, true);

    auto* optimize = app.add_subcommand(
        "optimize", "solve the Bell-coefficient LP for opt2chsh at one visibility.\n"
                    "Writes the JSON config into --config-dir and a copy into --out.");
    add_common(optimize, raw, false);
    optimize->add_option("--eta-prime", raw.eta_prime, "visibility the coefficients are optimized for")
        ->required();

    auto* tolerance = app.add_subcommand(
        "tolerance", "score against visibility and the noise tolerance eta*.\n"
                     "tolerance.csv columns: kind,game,eta,value\n"
                     "  kind in score | local_bound | quantum_bound | eta_star | eta_star_bisect.\n"
                     "Also writes tolerance.svg.");
    add_common(tolerance, raw, true);

    auto* crossings = app.add_subcommand(
        "crossings", "significance crossings over several budgets and the kappa order check.\n"
                     "Defaults: built-in games, --n-res 100,200,500,1000,2000,5000,10000.\n"
                     "crossings.csv columns: game,n_res,kappa,eta_dagger,one_minus_eta_dagger\n"
                     "  metadata lines carry order_matches[N] and stability_onset.");
    add_common(crossings, raw, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        nlg::CommandOutput out;
        if (bounds->parsed()) {
            out = nlg::cmd_bounds(to_config(raw, {1000}));
        } else if (curves->parsed()) {
            out = nlg::cmd_curves(to_config(raw, {1000}));
        } else if (table2->parsed()) {
            out = nlg::cmd_table2(to_config(raw, {1000, 10000}));
        } else if (optimize->parsed()) {
            out = nlg::cmd_optimize(to_config(raw, {1000}), raw.eta_prime);
        } else if (tolerance->parsed()) {
            out = nlg::cmd_tolerance(to_config(raw, {1000}));
        } else if (crossings->parsed()) {
            out = nlg::cmd_crossings(to_config(raw, {100, 200, 500, 1000, 2000, 5000, 10000}));
        }
        std::cout << out.summary;
        for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
        return 0;
    } catch (const nlg::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << " (iterations " << e.iterations()
                  << ", worst violation " << e.worst_violation() << ")\n";
        return 4;
    } catch (const nlg::IntegrityError& e) {
        std::cerr << "numeric integrity error: " << e.what() << '\n';
        return 3;
    } catch (const nlg::ModelMismatchError& e) {
        std::cerr << "numeric integrity error: " << e.what() << '\n';
        return 3;
    } catch (const nlg::MissingConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlg::ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const nlg::DimensionError& e) {
        std::cerr << "numeric integrity error: " << e.what() << '\n';
        return 3;
    } catch (const nlg::DegenerateConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
