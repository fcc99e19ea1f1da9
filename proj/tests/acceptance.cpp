// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "expected.hpp"
#include "nlg/catalog.hpp"
#include "nlg/errors.hpp"
#include "nlg/games.hpp"
#include "nlg/opt2chsh.hpp"
#include "nlg/robustness.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nlg;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [miss] " << what << ';';
        }
    }
    void note(const std::string& what) { detail << ' ' << what << ';'; }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Shared state: the opt configs are solved once and reused.
struct Opt {
    std::map<std::string, std::shared_ptr<const OptConfig>> configs;  // key "0.85"
    std::map<std::string, double> solve_seconds;

    CatalogEntry entry(const std::string& key) const {
        const auto& cfg = configs.at(key);
        return {GameId::parse("opt2chsh:" + key), opt_model(cfg), cfg->gap_poly, cfg->degenerate};
    }
};

CatalogEntry analytic(const std::string& id) {
    const GameId g = GameId::parse(id);
    return make_entry(g, OptConfigStore(std::filesystem::temp_directory_path()), false);
}

Outcome c1_bounds() {
    Outcome o;
    const GameSpec chsh = chsh_game(), two = two_chsh_game(), msg = msg_game();
    const double qc = score(chsh, chsh.winning_state), qt = score(two, two.winning_state),
                 qm = score(msg, msg.winning_state);
    const double lc = chsh_deterministic_value(), lm = msg_deterministic_value();
    o.check(near(lc, expected::kChshLocal, 1e-6) && near(qc, expected::kChshQuantum, 1e-6), "CHSH");
    o.check(near(two.local_bound, expected::kTwoChshLocal, 1e-6) && near(qt, expected::kTwoChshQuantum, 1e-6),
            "2-CHSH");
    o.check(near(lm, expected::kMsgLocal, 1e-6) && near(qm, expected::kMsgQuantum, 1e-6), "MSG");
    o.check(near(two.local_bound, oracle::two_chsh_local_value(), 1e-12), "2-CHSH local vs brute force");
    o.note("CHSH (" + fmt("%.7f", lc) + ", " + fmt("%.7f", qc) + ") 2-CHSH (" + fmt("%.7f", two.local_bound) +
           ", " + fmt("%.7f", qt) + ") MSG (" + fmt("%.7f", lm) + ", " + fmt("%.7f", qm) + ")");
    return o;
}

Outcome c2_table1() {
    Outcome o;
    const std::vector<std::pair<std::string, expected::Poly>> games{
        {"chsh", expected::kChshPoly}, {"2chsh", expected::kTwoChshPoly}, {"msg", expected::kMsgPoly}};
    for (const auto& [id, want] : games) {
        const auto e = analytic(id);
        const auto& g = e.gap;
        o.check(near(g.d, want.d, 1e-5) && near(g.c1, want.c1, 1e-5) && near(g.c2, want.c2, 1e-5), id);
        o.note(id + ": " + fmt("%.5f", g.c1) + " eta^2 + " + fmt("%.5f", g.c2) + " eta^4 + " + fmt("%.5f", g.d) +
               " - " + fmt("%.5f", g.omega_c));
    }
    return o;
}

Outcome c3_kappa() {
    Outcome o;
    const std::vector<std::tuple<std::string, double, double>> games{
        {"chsh", expected::kKappaChsh1k, expected::kKappaChsh10k},
        {"2chsh", expected::kKappaTwoChsh1k, expected::kKappaTwoChsh10k},
        {"msg", expected::kKappaMsg1k, expected::kKappaMsg10k}};
    for (const auto& [id, k1, k10] : games) {
        const auto e = analytic(id);
        const double a = gapped_score(e.gap, 1000, 0.05), b = gapped_score(e.gap, 10000, 0.05);
        o.check(near(a, k1, 0.5) && near(b, k10, 0.5),
                id + " expected " + fmt("%.2f", k1) + " / " + fmt("%.2f", k10));
        o.note(id + " " + fmt("%.2f", a) + " / " + fmt("%.2f", b));
    }
    return o;
}

Outcome c4_lp(Opt& opt) {
    Outcome o;
    double slowest = 0.0;
    for (const auto& [key, s] : opt.solve_seconds) slowest = std::max(slowest, s);
    o.check(slowest < 60.0, "a solve exceeded 60 s");
    o.note("slowest solve " + fmt("%.2f", slowest) + " s");

    const auto& one = *opt.configs.at("1.00");
    o.check(near(one.local_bound, expected::kOptLocalEta1, 1e-3),
            "eta'=1 local bound " + fmt("%.6f", one.local_bound) + " vs 0.546875");
    o.check(near(one.quantum_bound, expected::kOptQuantumEta1, 3e-3),
            "eta'=1 quantum bound " + fmt("%.5f", one.quantum_bound) + " vs 0.637");
    o.note("eta'=1 kappa(1K) " + fmt("%.2f", gapped_score(one.gap_poly, 1000, 0.05)));

    const auto& ref = opt.configs.at("0.85")->gap_poly;
    for (const char* key : {"0.85", "0.86", "0.87", "0.88", "0.89"}) {
        const auto& cfg = *opt.configs.at(key);
        const auto& g = cfg.gap_poly;
        o.check(!cfg.degenerate, std::string(key) + " degenerate");
        if (cfg.degenerate) continue;
        o.check(near(g.d, ref.d, 2e-3) && near(g.c1, ref.c1, 2e-3) && near(g.c2, ref.c2, 2e-3) &&
                    near(g.omega_c, ref.omega_c, 2e-3),
                std::string(key) + " polynomial differs from 0.85");
        const double k = gapped_score(g, 1000, 0.05);
        o.check(near(k, expected::kOptKappaPlateau1k, 5.0), std::string(key) + " kappa " + fmt("%.2f", k));
    }
    o.note("0.85-0.89 kappa(1K) " + fmt("%.2f", gapped_score(ref, 1000, 0.05)));
    for (const char* key : {"0.83", "0.84"}) {
        o.check(opt.configs.at(key)->degenerate, std::string(key) + " not degenerate");
    }
    o.note("0.83, 0.84 degenerate: " + std::string(opt.configs.at("0.83")->degenerate &&
                                                           opt.configs.at("0.84")->degenerate
                                                       ? "yes"
                                                       : "no"));
    return o;
}

Outcome c5_tolerance() {
    Outcome o;
    const std::vector<std::pair<std::string, double>> games{
        {"chsh", expected::kEtaStarChsh}, {"2chsh", expected::kEtaStarTwoChsh}, {"msg", expected::kEtaStarMsg}};
    for (const auto& [id, want] : games) {
        const auto e = analytic(id);
        const auto closed = noise_tolerance(e.gap);
        const auto bis = noise_tolerance_bisect(e.model);
        o.check(closed && bis, id + " root missing");
        if (!closed || !bis) continue;
        o.check(near(*closed, want, 1e-3) && near(*bis, want, 1e-3), id);
        o.check(near(*closed, *bis, 1e-8), id + " closed form and bisection disagree");
        o.note(id + " " + fmt("%.5f", *closed) + " / " + fmt("%.5f", *bis));
    }
    return o;
}

Outcome c6_difference(const Opt& opt) {
    Outcome o;
    const auto two = analytic("2chsh").gap;
    const auto d = polynomial_difference(two, opt.configs.at("1.00")->gap_poly);
    o.check(d.at_zero < 0, "D(0) >= 0");
    o.check(d.at_one > 0, "D(1) <= 0");
    o.check(d.roots.size() == 1, "expected a single root");
    if (!d.roots.empty()) {
        o.check(near(d.roots.front(), expected::kOptEta1Root, 0.01), "root off");
        o.note("root " + fmt("%.4f", d.roots.front()));
    }
    o.note("D(0) " + fmt("%.5f", d.at_zero) + ", D(1) " + fmt("%.5f", d.at_one));
    return o;
}

Outcome c7_order(const Opt& opt) {
    Outcome o;
    std::vector<CatalogEntry> games{analytic("chsh"), analytic("2chsh"), analytic("msg"), opt.entry("1.00"),
                                    opt.entry("0.95")};
    std::vector<OrderItem> items;
    std::optional<double> chsh_eta;
    double best_other = 2.0;
    for (const auto& e : games) {
        const double k = gapped_score(e.gap, 10000, 0.05);
        const auto c = significance_crossing(e.model, 10000, 0.05);
        items.push_back({e.id.str(), k, c.eta_dagger});
        if (e.id.kind == GameKind::Chsh)
            chsh_eta = c.eta_dagger;
        else
            best_other = std::min(best_other, c.eta_dagger.value_or(2.0));
        o.note(e.id.str() + " kappa " + fmt("%.2f", k) + " eta_dagger " +
               (c.eta_dagger ? fmt("%.5f", *c.eta_dagger) : std::string("none")));
    }
    o.check(order_consistent(items, 0.005), "kappa order disagrees with crossing order");
    o.check(chsh_eta && *chsh_eta < best_other, "CHSH is not the earliest crossing");
    return o;
}

Outcome c8_unequal(const Opt& opt) {
    Outcome o;
    const auto chsh = analytic("chsh");
    const auto c = significance_crossing(chsh.model, 1'000'000, 0.05);
    o.check(c.crossed(), "CHSH never crosses");
    if (!c.crossed()) return o;
    o.note("CHSH@1M " + fmt("%.5f", *c.eta_dagger));
    for (const char* key : {"0.85", "0.86", "0.87", "0.88", "0.89"}) {
        const auto e = opt.entry(key);
        const auto x = significance_crossing(e.model, 10'000'000, 0.05);
        o.check(x.crossed() && *x.eta_dagger < *c.eta_dagger, std::string(key) + " does not beat CHSH");
        o.note(std::string(key) + "@10M " + (x.crossed() ? fmt("%.5f", *x.eta_dagger) : std::string("none")));
    }
    return o;
}

Outcome c9_statistics(const Opt& opt) {
    Outcome o;
    // exact tail vs brute force
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    double worst = 0.0;
    int compared = 0;
    for (int t = 0; t < 50; ++t) {
        const double wc = u(rng), wv = u(rng);
        for (std::int64_t n = 1; n <= 500; n += (n < 20 ? 1 : 37)) {
            const auto k = oracle::round_half_away(static_cast<long double>(n) * wv);
            const long double ref = oracle::binomial_tail(n, k, wc);
            if (ref < 1e-290L) continue;
            const double got = convincingness(n, wc, wv);
            worst = std::max(worst, static_cast<double>(std::abs((got - ref) / ref)));
            ++compared;
        }
    }
    o.check(worst < 1e-12, "binomial tail relative error " + fmt("%.3g", worst));
    o.note(std::to_string(compared) + " tails, worst rel err " + fmt("%.2g", worst));

    // hoeffding domination
    std::uniform_int_distribution<int> nd(1, 20000);
    int hoeff_ok = 0, hoeff_n = 0;
    while (hoeff_n < 1000) {
        const std::int64_t n = nd(rng);
        const double wc = u(rng), wv = u(rng);
        const double frac = static_cast<double>(win_threshold(n, wv)) / static_cast<double>(n);
        if (!(frac > wc)) continue;
        ++hoeff_n;
        hoeff_ok += convincingness(n, wc, wv) <= std::exp(-2.0 * n * (frac - wc) * (frac - wc)) * (1 + 1e-12);
    }
    o.check(hoeff_ok == hoeff_n, "Hoeffding violated " + std::to_string(hoeff_n - hoeff_ok) + " times");

    // eta* < eta_dagger for every built-in game
    std::vector<CatalogEntry> games{analytic("chsh"), analytic("2chsh"), analytic("msg")};
    for (const auto& [key, cfg] : opt.configs)
        if (key != "0.83" && key != "0.84") games.push_back(opt.entry(key));
    int pairs = 0, ok = 0;
    for (const auto& e : games) {
        const auto star = noise_tolerance(e.gap);
        if (!star) continue;
        for (std::int64_t n : {100, 1000, 10'000, 100'000}) {
            const auto c = significance_crossing(e.model, n, 0.05);
            if (!c.crossed()) continue;
            ++pairs;
            ok += *star < *c.eta_dagger;
        }
    }
    o.check(ok == pairs, "eta* >= eta_dagger somewhere");
    o.note(std::to_string(pairs) + " (game, N) pairs with eta* < eta_dagger: " + std::to_string(ok));
    return o;
}

Outcome c10_invariants(const Opt& opt) {
    Outcome o;
    std::mt19937_64 rng(31415);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_state = [&](std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) m(r, c) = {g(rng), g(rng)};
        ComplexMatrix p = m * m.adjoint();
        p *= cplx(1.0 / p.trace().real());
        return DensityMatrix(p);
    };
    int bad = 0;
    double factor_err = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const bool four = t % 2 == 1;
        const DensityMatrix rho = random_state(four ? 16 : 4);
        const double eta = u(rng);
        try {
            const DensityMatrix out = apply_depolarizing({eta, four ? Arity::FourQubit : Arity::TwoQubit}, rho);
            if (std::abs(out.matrix().trace().real() - 1.0) > 1e-12) ++bad;
        } catch (const Error&) {
            ++bad;
        }
        if (four) {
            const DensityMatrix lib = apply_depolarizing({eta, Arity::FourQubit}, rho);
            oracle::Mat m(rho.matrix().entries().begin(), rho.matrix().entries().end());
            m = oracle::depolarize_pair(oracle::depolarize_pair(m, 4, 0, 1, eta), 4, 2, 3, eta);
            for (std::size_t k = 0; k < m.size(); ++k)
                factor_err = std::max(factor_err, std::abs(m[k] - lib.matrix().entries()[k]));
        }
    }
    o.check(bad == 0, std::to_string(bad) + " channel outputs failed validation");
    o.check(factor_err < 1e-13, "four-qubit channel differs from pairwise application");
    o.note("1000 channel applications, factorization error " + fmt("%.1e", factor_err));

    double worst = 0.0;
    for (const auto& [key, cfg] : opt.configs)
        for (int j = 0; j < 20; ++j) {
            const double eta = (j + 0.5) / 20;
            worst = std::max(worst, std::abs(cfg->score(eta) - cfg->gap_poly.score(eta)));
        }
    o.check(worst < 1e-9, "polynomial identity residual " + fmt("%.2g", worst));
    o.note(std::to_string(opt.configs.size()) + " opt configs, identity residual " + fmt("%.1e", worst));
    return o;
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    int failures = 0;
    auto report = [&](int id, const std::string& name, double limit_s, const std::function<Outcome()>& fn) {
        const auto t0 = clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        if (limit_s > 0 && secs > limit_s) o.check(false, "runtime over " + fmt("%.0f", limit_s) + " s");
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name << " ("
                  << fmt("%.2f", secs) << " s)" << o.detail.str() << std::endl;
    };

    Opt opt;
    const auto t0 = clock::now();
    try {
        for (const char* key : {"0.83", "0.84", "0.85", "0.86", "0.87", "0.88", "0.89", "0.90", "0.95", "1.00"}) {
            const auto s0 = clock::now();
            opt.configs[key] = std::make_shared<const OptConfig>(make_opt_config(std::stod(key)));
            opt.solve_seconds[key] = std::chrono::duration<double>(clock::now() - s0).count();
        }
    } catch (const std::exception& e) {
        std::cout << "FAIL  setup: LP solves threw: " << e.what() << std::endl;
        return 1;
    }
    std::cout << "setup: solved " << opt.configs.size() << " opt configurations in "
              << fmt("%.2f", std::chrono::duration<double>(clock::now() - t0).count()) << " s" << std::endl;

    report(1, "bounds regression", 1.0, c1_bounds);
    report(2, "gap polynomials of the analytic games", 1.0, c2_table1);
    report(3, "gapped score values", 1.0, c3_kappa);
    report(4, "LP pipeline", 0.0, [&] { return c4_lp(opt); });
    report(5, "noise tolerance two ways", 0.0, c5_tolerance);
    report(6, "polynomial comparison 2-CHSH vs OPT(1)", 0.0, [&] { return c6_difference(opt); });
    report(7, "crossing order at N_res = 10K", 30.0, [&] { return c7_order(opt); });
    report(8, "unequal-resource flip", 300.0, [&] { return c8_unequal(opt); });
    report(9, "statistical oracle suite", 30.0, [&] { return c9_statistics(opt); });
    report(10, "channel and operator invariants", 0.0, [&] { return c10_invariants(opt); });

    std::cout << (10 - failures) << "/10 criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
