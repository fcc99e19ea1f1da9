#include "nlg/commands.hpp"

#include "nlg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace nlg {

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ArgumentError("--alpha must lie in (0,1), got " + format_double(alpha));
    (void)eta_grid.points();
    if (n_res.empty()) throw ArgumentError("--n-res needs at least one value");
    for (auto n : n_res)
        if (n < 2) throw ArgumentError("--n-res values must be at least 2, got " + std::to_string(n));
    for (const auto& [game, n] : n_res_override) {
        (void)GameId::parse(game);
        if (n < 2) throw ArgumentError("resource override for " + game + " must be at least 2");
    }
    if (!mode.deterministic() && (mode.seeds < 1 || mode.draws_per_seed < 1))
        throw ArgumentError("--mode mc:SxD needs S >= 1 and D >= 1");
    for (const auto& g : games) (void)GameId::parse(g);
}

std::int64_t RunConfig::budget(const std::string& game, std::int64_t n) const {
    const auto it = n_res_override.find(game);
    return it == n_res_override.end() ? n : it->second;
}

OptConfigStore RunConfig::store() const {
    LpOptions opts;
    opts.sense = sense;
    return OptConfigStore(config_dir, opts);
}

namespace {

const std::vector<std::string> kAnalyticGames{"chsh", "2chsh", "msg"};

std::vector<std::string> games_or(const RunConfig& cfg, const std::vector<std::string>& fallback) {
    return cfg.games.empty() ? fallback : cfg.games;
}

std::vector<CatalogEntry> resolve(const RunConfig& cfg, const std::vector<std::string>& ids) {
    const auto store = cfg.store();
    std::vector<CatalogEntry> out;
    for (const auto& id : ids) out.push_back(make_entry(GameId::parse(id), store, cfg.solve_missing));
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

CurveMode run_mode(const RunConfig& cfg) {
    CurveMode m = cfg.mode;
    m.seed_base = cfg.seed;
    return m;
}

std::string mode_descriptor(const CurveMode& m) {
    if (m.deterministic()) return "det (exact binomial tail at round(n * score))";
    std::ostringstream os;
    os << m.describe() << " (averaged over " << m.seeds << " runs, each run the mean of "
       << m.draws_per_seed << " sampled p-values; seed_i = " << m.seed_base
       << " + i; mt19937_64 with boost binomial_distribution)";
    return os.str();
}

void common_meta(CsvTable& t, const RunConfig& cfg, const std::string& command,
                 const std::vector<std::string>& games) {
    t.meta("generator", kToolVersion);
    t.meta("schema_version", std::to_string(kReportSchemaVersion));
    t.meta("command", command);
    t.meta("games", join(games));
    std::vector<std::string> ns;
    for (auto n : cfg.n_res) ns.push_back(std::to_string(n));
    t.meta("n_res", join(ns));
    std::vector<std::string> ov;
    for (const auto& [g, n] : cfg.n_res_override) ov.push_back(g + "=" + std::to_string(n));
    if (!ov.empty()) t.meta("n_res_override", join(ov));
    t.meta("alpha", format_double(cfg.alpha));
    t.meta("eta_grid", format_double(cfg.eta_grid.start) + ":" + format_double(cfg.eta_grid.stop) + ":" +
                           format_double(cfg.eta_grid.step));
    t.meta("mode", mode_descriptor(run_mode(cfg)));
    t.meta("seed", std::to_string(cfg.seed));
    t.meta("solver_version", kSolverVersion);
}

std::string opt_or(const std::optional<double>& v, const char* empty) {
    return v ? format_double(*v) : std::string(empty);
}

// Writes stem.csv plus a stem.json mirror; returns both paths.
std::vector<std::filesystem::path> write_table(const std::filesystem::path& dir, const std::string& stem,
                                               const CsvTable& t) {
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : t.metadata()) meta[k] = v;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows()) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < r.size(); ++i) obj[t.columns()[i]] = r[i];
        rows.push_back(std::move(obj));
    }
    nlohmann::json doc{{"schema_version", kReportSchemaVersion},
                       {"metadata", meta},
                       {"columns", t.columns()},
                       {"rows", rows}};
    const auto csv = dir / (stem + ".csv");
    const auto js = dir / (stem + ".json");
    write_text(csv, t.str());
    write_text(js, doc.dump(2) + "\n");
    return {csv, js};
}

std::optional<double> kappa_of(const CatalogEntry& e, std::int64_t n_res, double alpha) {
    if (e.degenerate) return std::nullopt;
    try {
        return gapped_score(e.gap, n_res, alpha);
    } catch (const DegenerateConfigError&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<BoundsRow> compute_bounds(const RunConfig& cfg) {
    std::vector<BoundsRow> rows;
    for (const auto& e : resolve(cfg, games_or(cfg, kAnalyticGames)))
        rows.push_back({e.id.str(), e.model.local_bound, e.model.score(1.0)});
    return rows;
}

CommandOutput cmd_bounds(const RunConfig& cfg) {
    cfg.validate();
    const auto games = games_or(cfg, kAnalyticGames);
    CsvTable t({"game", "local_bound", "quantum_bound"});
    common_meta(t, cfg, "bounds", games);
    std::ostringstream os;
    for (const auto& r : compute_bounds(cfg)) {
        t.add_row({r.game, format_double(r.local_bound), format_double(r.quantum_bound)});
        char line[128];
        std::snprintf(line, sizeof line, "%-16s omega_c = %.7f  omega_q = %.7f\n", r.game.c_str(),
                      r.local_bound, r.quantum_bound);
        os << line;
    }
    return {write_table(cfg.out_dir, "bounds", t), os.str()};
}

CommandOutput cmd_curves(const RunConfig& cfg) {
    cfg.validate();
    const auto games = games_or(cfg, kAnalyticGames);
    const auto entries = resolve(cfg, games);
    const CurveMode mode = run_mode(cfg);

    CsvTable t({"kind", "game", "n_res", "n_rounds", "eta", "p_value"});
    common_meta(t, cfg, "curves", games);
    t.meta("columns", "kind=curve rows sample C(eta); kind=crossing rows give eta_dagger and C there");
    CommandOutput out;
    std::ostringstream os;
    for (auto base : cfg.n_res) {
        Plot plot{"Convincingness, N_res = " + std::to_string(base), "visibility eta",
                  "p-value (convincingness)", true, {}, {{cfg.alpha, "alpha = " + format_double(cfg.alpha)}}, {}};
        for (const auto& e : entries) {
            const auto id = e.id.str();
            const auto n = cfg.budget(id, base);
            const auto curve = convincingness_curve(e.model, n, cfg.eta_grid, mode);
            PlotSeries series{e.model.name, {}};
            for (const auto& [eta, p] : curve.points) {
                t.add_row({"curve", id, std::to_string(n), std::to_string(curve.n_rounds), format_double(eta),
                           format_double(p)});
                series.points.emplace_back(eta, p);
            }
            plot.series.push_back(std::move(series));
            const auto cross = significance_crossing(e.model, n, cfg.alpha, mode);
            if (cross.crossed()) {
                const double p = convincingness_at(e.model, n, *cross.eta_dagger, mode);
                t.add_row({"crossing", id, std::to_string(n), std::to_string(curve.n_rounds),
                           format_double(*cross.eta_dagger), format_double(p)});
                plot.markers.push_back({*cross.eta_dagger, p, e.model.name});
                os << id << " @ N_res=" << n << ": eta_dagger = " << format_double(*cross.eta_dagger)
                   << " (1 - eta_dagger = " << format_double(1.0 - *cross.eta_dagger) << ")\n";
            } else {
                os << id << " @ N_res=" << n << ": no significance crossing\n";
            }
        }
        const auto svg = cfg.out_dir / (cfg.n_res.size() == 1 ? std::string("curves.svg")
                                                                : "curves_" + std::to_string(base) + ".svg");
        write_text(svg, render_svg(plot));
        out.files.push_back(svg);
    }
    const auto tables = write_table(cfg.out_dir, "curves", t);
    out.files.insert(out.files.begin(), tables.begin(), tables.end());
    out.summary = os.str();
    return out;
}

CommandOutput cmd_table2(const RunConfig& cfg) {
    cfg.validate();
    const auto games = games_or(cfg, builtin_game_ids());
    const auto entries = resolve(cfg, games);
    const CurveMode mode = run_mode(cfg);

    CsvTable t({"game", "n_res", "local_bound", "quantum_bound", "kappa", "ratio", "raw_gap",
                "delta_const", "delta_eta2", "delta_eta4", "delta_sq_const", "delta_sq_eta2",
                "delta_sq_eta4", "delta_sq_eta6", "delta_sq_eta8", "one_minus_eta_dagger"});
    common_meta(t, cfg, "table2", games);
    std::ostringstream os;
    for (auto base : cfg.n_res) {
        for (const auto& e : entries) {
            const auto id = e.id.str();
            const auto n = cfg.budget(id, base);
            PredictorInput in{id, e.gap, e.model.quantum_bound, std::nullopt};
            if (!e.degenerate) {
                const auto cross = significance_crossing(e.model, n, cfg.alpha, mode);
                if (cross.crossed()) in.crossing = 1.0 - *cross.eta_dagger;
            }
            const auto row = predictor_table({in}, n, cfg.alpha).front();
            t.add_row({id, std::to_string(n), format_double(e.model.local_bound),
                       format_double(e.model.quantum_bound), opt_or(row.kappa, "undefined"),
                       format_double(row.ratio), format_double(row.raw_gap), format_double(row.delta_const),
                       format_double(row.delta_eta2), format_double(row.delta_eta4),
                       format_double(row.delta_sq_const), format_double(row.delta_sq_eta2),
                       format_double(row.delta_sq_eta4), format_double(row.delta_sq_eta6),
                       format_double(row.delta_sq_eta8), opt_or(row.crossing, "none")});
            char line[160];
            std::snprintf(line, sizeof line, "%-16s N_res=%-8lld kappa=%-10s ratio=%.3f 1-eta_dagger=%s\n",
                          id.c_str(), static_cast<long long>(n),
                          row.kappa ? format_double(std::round(*row.kappa * 100) / 100).c_str() : "undefined",
                          row.ratio, row.crossing ? format_double(std::round(*row.crossing * 1000) / 1000).c_str() : "none");
            os << line;
        }
    }
    return {write_table(cfg.out_dir, "table2", t), os.str()};
}

CommandOutput cmd_optimize(const RunConfig& cfg, double eta_prime) {
    if (!(eta_prime >= 0.0 && eta_prime <= 1.0))
        throw ArgumentError("--eta-prime must lie in [0,1], got " + format_double(eta_prime));
    const auto store = cfg.store();
    LpOptions opts = store.options();
    const OptConfig solved = make_opt_config(eta_prime, opts);
    const auto cached = store.save(solved);
    char name[48];
    std::snprintf(name, sizeof name, "opt2chsh-%.4f.json", eta_prime);
    const auto copy = cfg.out_dir / name;
    write_text(copy, nlohmann::json(solved).dump(2) + "\n");

    std::ostringstream os;
    os << "eta' = " << format_double(eta_prime) << ": local bound " << format_double(solved.local_bound)
       << ", quantum bound " << format_double(solved.quantum_bound) << "\n"
       << "gap: " << format_double(solved.gap_poly.c1) << " eta^2 + " << format_double(solved.gap_poly.c2)
       << " eta^4 + " << format_double(solved.gap_poly.d) << " - " << format_double(solved.gap_poly.omega_c)
       << "\n"
       << (solved.degenerate ? "degenerate: zero gap, never convincing\n" : "")
       << "LP: " << solved.lp_rounds << " cut rounds, " << solved.lp_pivots << " pivots\n";
    return {{cached, copy}, os.str()};
}

CommandOutput cmd_tolerance(const RunConfig& cfg) {
    cfg.validate();
    const auto games = games_or(cfg, kAnalyticGames);
    const auto entries = resolve(cfg, games);

    CsvTable t({"kind", "game", "eta", "value"});
    common_meta(t, cfg, "tolerance", games);
    t.meta("columns", "kind=score: score(eta); kind=eta_star: closed-form root; kind=eta_star_bisect: "
                      "root by bisection on the score; kind=local_bound/quantum_bound: bound lines");
    Plot plot{"Noise tolerance", "visibility eta", "score", false, {}, {}, {}};
    std::ostringstream os;
    for (const auto& e : entries) {
        const auto id = e.id.str();
        PlotSeries series{e.model.name, {}};
        for (double eta : cfg.eta_grid.points()) {
            const double s = e.model.score(eta);
            t.add_row({"score", id, format_double(eta), format_double(s)});
            series.points.emplace_back(eta, s);
        }
        plot.series.push_back(std::move(series));
        t.add_row({"local_bound", id, "", format_double(e.model.local_bound)});
        t.add_row({"quantum_bound", id, "", format_double(e.model.score(1.0))});
        plot.hlines.push_back({e.model.local_bound, e.model.name + " local"});
        const auto closed = noise_tolerance(e.gap);
        const auto bisect = noise_tolerance_bisect(e.model);
        t.add_row({"eta_star", id, opt_or(closed, "none"), format_double(e.model.local_bound)});
        t.add_row({"eta_star_bisect", id, opt_or(bisect, "none"), format_double(e.model.local_bound)});
        if (closed) plot.markers.push_back({*closed, e.model.local_bound, "eta* " + format_double(std::round(*closed * 1e4) / 1e4)});
        os << id << ": eta* = " << opt_or(closed, "undefined") << " (bisection " << opt_or(bisect, "undefined")
           << ")\n";
    }
    auto files = write_table(cfg.out_dir, "tolerance", t);
    files.push_back(cfg.out_dir / "tolerance.svg");
    write_text(files.back(), render_svg(plot));
    return {files, os.str()};
}

StabilityReport compute_crossings(const RunConfig& cfg) {
    cfg.validate();
    const auto entries = resolve(cfg, games_or(cfg, builtin_game_ids()));
    const CurveMode mode = run_mode(cfg);
    StabilityReport rep;
    auto bases = cfg.n_res;
    std::sort(bases.begin(), bases.end());
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
    for (auto base : bases) {
        std::vector<OrderItem> items;
        int crossed = 0;
        for (const auto& e : entries) {
            const auto id = e.id.str();
            const auto n = cfg.budget(id, base);
            CrossingRow row{id, n, kappa_of(e, n, cfg.alpha), std::nullopt};
            if (!e.degenerate) row.eta_dagger = significance_crossing(e.model, n, cfg.alpha, mode).eta_dagger;
            crossed += row.eta_dagger.has_value();
            items.push_back({id, row.kappa, row.eta_dagger});
            rep.rows.push_back(row);
        }
        rep.order_matches[base] = order_consistent(items, kOrderTieEps);
        rep.crossed[base] = crossed;
    }
    for (auto it = bases.rbegin(); it != bases.rend() && rep.order_matches[*it]; ++it) rep.onset = *it;
    return rep;
}

CommandOutput cmd_crossings(const RunConfig& cfg) {
    const auto games = games_or(cfg, builtin_game_ids());
    const auto rep = compute_crossings(cfg);
    CsvTable t({"game", "n_res", "kappa", "eta_dagger", "one_minus_eta_dagger"});
    common_meta(t, cfg, "crossings", games);
    t.meta("order_tie_eps", format_double(kOrderTieEps));
    for (const auto& [n, ok] : rep.order_matches)
        t.meta("order_matches[" + std::to_string(n) + "]",
               std::string(ok ? "yes" : "no") + ", crossing games " + std::to_string(rep.crossed.at(n)));
    t.meta("stability_onset", rep.onset ? std::to_string(*rep.onset) : "none");
    for (const auto& r : rep.rows)
        t.add_row({r.game, std::to_string(r.n_res), opt_or(r.kappa, "undefined"), opt_or(r.eta_dagger, "none"),
                   r.eta_dagger ? format_double(1.0 - *r.eta_dagger) : "none"});

    std::ostringstream os;
    for (const auto& [n, ok] : rep.order_matches)
        os << "N_res=" << n << ": " << rep.crossed.at(n) << " games cross, kappa order "
           << (ok ? "matches" : "does not match") << " crossing order\n";
    os << "stability onset: " << (rep.onset ? std::to_string(*rep.onset) : "none") << "\n";
    return {write_table(cfg.out_dir, "crossings", t), os.str()};
}

}  // namespace nlg
