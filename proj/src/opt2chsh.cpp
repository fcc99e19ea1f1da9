#include "nlg/opt2chsh.hpp"

#include "nlg/errors.hpp"
#include "nlg/qmath.hpp"
#include "nlg/robustness.hpp"
#include "nlg/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlg {

namespace {

using Projectors = std::array<std::array<ComplexMatrix, 2>, 2>;  // [setting][outcome]

Projectors make_projectors(const ComplexMatrix& o0, const ComplexMatrix& o1) {
    Projectors m;
    const std::array<const ComplexMatrix*, 2> obs{&o0, &o1};
    for (int s = 0; s < 2; ++s)
        for (int o = 0; o < 2; ++o)
            m[s][o] = (ComplexMatrix::identity(2) + *obs[s] * cplx(o == 0 ? 1.0 : -1.0)) * cplx(0.5);
    return m;
}

// Per Alice strategy (low byte), the 16 column sums she induces against
// every Bob cell (y, b): table[alpha][4y + b] = sum_x m[4x + a(x)][4y + b].
std::vector<std::array<double, kOptSide>> alice_tables(const Matrix16& m) {
    std::vector<std::array<double, kOptSide>> t(256);
    for (unsigned alpha = 0; alpha < 256; ++alpha) {
        const LocalVertex v(static_cast<std::uint16_t>(alpha));
        auto& row = t[alpha];
        row.fill(0.0);
        for (unsigned x = 0; x < 4; ++x) {
            const std::size_t i = 4 * x + v.alice_output(x);
            for (std::size_t j = 0; j < kOptSide; ++j) row[j] += m[i * kOptSide + j];
        }
    }
    return t;
}

struct Extreme {
    std::uint16_t vertex = 0;
    double value = 0.0;
};

// Best (or worst) Bob response for every Alice strategy; index = low byte.
std::vector<Extreme> scan_vertices(const Matrix16& m, bool maximize) {
    const auto tables = alice_tables(m);
    std::vector<Extreme> out(256, Extreme{0, maximize ? -1e300 : 1e300});
    for (std::uint32_t k = 0; k < LocalVertex::kCount; ++k) {
        const LocalVertex v(static_cast<std::uint16_t>(k));
        const auto& row = tables[k & 0xFFU];
        double s = 0.0;
        for (unsigned y = 0; y < 4; ++y) s += row[4 * y + v.bob_output(y)];
        auto& e = out[k & 0xFFU];
        if (maximize ? s > e.value : s < e.value) e = {v.assignment(), s};
    }
    return out;
}

Extreme extreme_vertex(const Matrix16& m, bool maximize) {
    const auto all = scan_vertices(m, maximize);
    Extreme best = all.front();
    for (const auto& e : all)
        if (maximize ? e.value > best.value : e.value < best.value) best = e;
    return best;
}

// The 256 joint measurement projectors, indexed like the probability matrix.
const std::vector<ComplexMatrix>& measurement_operators() {
    static const std::vector<ComplexMatrix> ops = [] {
        const double r = 1.0 / std::sqrt(2.0);
        const Projectors ma = make_projectors(pauli::x(), pauli::z());
        const Projectors mb = make_projectors((pauli::x() + pauli::z()) * cplx(r),
                                              (pauli::x() - pauli::z()) * cplx(r));
        std::vector<ComplexMatrix> out;
        out.reserve(kOptEntries);
        for (std::size_t i = 0; i < kOptSide; ++i) {
            const std::size_t x1 = i >> 3, x2 = (i >> 2) & 1, a1 = (i >> 1) & 1, a2 = i & 1;
            for (std::size_t j = 0; j < kOptSide; ++j) {
                const std::size_t y1 = j >> 3, y2 = (j >> 2) & 1, b1 = (j >> 1) & 1, b2 = j & 1;
                // canonical order [A1, B1, A2, B2]
                out.push_back(kron({ma[x1][a1], mb[y1][b1], ma[x2][a2], mb[y2][b2]}));
            }
        }
        return out;
    }();
    return ops;
}

DensityMatrix noisy_winning_state(double eta) {
    return apply_depolarizing(DepolarizingChannel(eta, Arity::FourQubit), tensor(epr_state(), epr_state()));
}

}  // namespace

ProbabilityMatrix build_probability_matrix(double eta) {
    const DensityMatrix rho = noisy_winning_state(eta);
    const auto& ops = measurement_operators();
    ProbabilityMatrix p;
    p.eta = eta;
    for (std::size_t k = 0; k < kOptEntries; ++k) {
        const cplx t = trace_product(rho.matrix(), ops[k]);
        if (std::abs(t.imag()) > 1e-9) throw IntegrityError("outcome probability has imaginary residue");
        p.entries[k] = t.real() / 16.0;
    }
    return p;
}

ComplexMatrix opt_score_operator(const Matrix16& normalized) {
    const auto& ops = measurement_operators();
    ComplexMatrix w(16);
    for (std::size_t k = 0; k < kOptEntries; ++k)
        if (normalized[k] != 0.0) w += ops[k] * cplx(normalized[k] / 16.0);
    return w;
}

double opt_score_via_operator(const ComplexMatrix& w, double eta) {
    const cplx t = trace_product(noisy_winning_state(eta).matrix(), w);
    if (std::abs(t.imag()) > 1e-9) throw IntegrityError("score has imaginary residue");
    return t.real();
}

BellMatrix BellMatrix::from_raw(const Matrix16& raw) {
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double range = *hi - *lo;
    if (!(range > 0.0))
        throw DegenerateConfigError("Bell matrix is constant; normalization is undefined");
    BellMatrix b;
    b.raw = raw;
    for (std::size_t k = 0; k < kOptEntries; ++k) b.normalized[k] = (raw[k] - *lo) / range;
    return b;
}

std::array<std::uint8_t, kOptEntries> LocalVertex::payoff() const {
    std::array<std::uint8_t, kOptEntries> out{};
    for (unsigned x = 0; x < 4; ++x)
        for (unsigned y = 0; y < 4; ++y)
            out[(4 * x + alice_output(x)) * kOptSide + 4 * y + bob_output(y)] = 1;
    return out;
}

double LocalVertex::value(const Matrix16& m) const {
    double s = 0.0;
    for (unsigned x = 0; x < 4; ++x)
        for (unsigned y = 0; y < 4; ++y)
            s += m[(4 * x + alice_output(x)) * kOptSide + 4 * y + bob_output(y)];
    return s;
}

std::vector<LocalVertex> enumerate_local_vertices() {
    std::vector<LocalVertex> out;
    out.reserve(LocalVertex::kCount);
    for (std::uint32_t k = 0; k < LocalVertex::kCount; ++k)
        out.emplace_back(static_cast<std::uint16_t>(k));
    return out;
}

LpSolution solve_bell_lp_raw(const ProbabilityMatrix& p, const LpOptions& opts) {
    // shift c = u - 1 so the box becomes 0 <= u <= 2 and each vertex row
    // sum(u over its 16 cells) compares against 1 + 16
    const double sign = opts.sense == VertexSense::AtMost ? 1.0 : -1.0;
    DenseSimplex lp(std::vector<double>(p.entries.begin(), p.entries.end()),
                    SimplexTolerances{1e-10, opts.feasibility, 1e-9});
    std::vector<double> row(kOptEntries, 0.0);
    for (std::size_t k = 0; k < kOptEntries; ++k) {
        row[k] = 1.0;
        lp.add_row(row, 2.0);
        row[k] = 0.0;
    }

    const bool at_most = opts.sense == VertexSense::AtMost;
    LpSolution sol;
    for (;;) {
        lp.solve();
        const auto u = lp.solution();
        for (std::size_t k = 0; k < kOptEntries; ++k)
            sol.coefficients[k] = std::clamp(u[k] - 1.0, -1.0, 1.0);

        // one candidate cut per Alice strategy, most violated first
        auto candidates = scan_vertices(sol.coefficients, at_most);
        for (auto& e : candidates) e.value = at_most ? e.value - 1.0 : 1.0 - e.value;
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Extreme& a, const Extreme& b) { return a.value > b.value; });
        const double violation = candidates.front().value;
        sol.worst_violation = std::max(violation, 0.0);
        sol.pivots = lp.pivots();
        if (violation <= opts.feasibility) break;
        if (sol.rounds >= opts.max_rounds)
            throw SolverError("constraint generation did not converge after " +
                                  std::to_string(sol.rounds) + " rounds",
                              lp.pivots(), violation);

        lp.drop_inactive(kOptEntries, 1e-6);
        for (int c = 0; c < opts.cuts_per_round && candidates[c].value > opts.feasibility; ++c) {
            const auto cells = LocalVertex(candidates[c].vertex).payoff();
            for (std::size_t k = 0; k < kOptEntries; ++k) row[k] = sign * cells[k];
            lp.add_row(row, sign * 17.0);
        }
        std::fill(row.begin(), row.end(), 0.0);
        ++sol.rounds;
    }
    sol.objective = 0.0;
    for (std::size_t k = 0; k < kOptEntries; ++k) sol.objective += p.entries[k] * sol.coefficients[k];
    return sol;
}

BellMatrix solve_bell_lp(const ProbabilityMatrix& p, const LpOptions& opts) {
    return BellMatrix::from_raw(solve_bell_lp_raw(p, opts).coefficients);
}

double opt_local_bound(const BellMatrix& b) { return extreme_vertex(b.normalized, true).value / 16.0; }

double opt_score(const Matrix16& normalized, double eta) {
    const ProbabilityMatrix p = build_probability_matrix(eta);
    double s = 0.0;
    for (std::size_t k = 0; k < kOptEntries; ++k) s += p.entries[k] * normalized[k];
    return s;
}

OptConfig opt_config_from_bell(double eta_prime, BellMatrix bell) {
    OptConfig cfg;
    cfg.eta_prime = eta_prime;
    cfg.bell = std::move(bell);
    cfg.local_bound = opt_local_bound(cfg.bell);
    cfg.quantum_bound = cfg.score(1.0);
    cfg.gap_poly = extract_gap_polynomial([&](double eta) { return cfg.score(eta); }, cfg.local_bound);
    cfg.degenerate = std::abs(cfg.gap_poly.constant()) < 1e-9;
    return cfg;
}

OptConfig make_opt_config(double eta_prime, const LpOptions& opts) {
    const LpSolution sol = solve_bell_lp_raw(build_probability_matrix(eta_prime), opts);
    OptConfig cfg = opt_config_from_bell(eta_prime, BellMatrix::from_raw(sol.coefficients));
    cfg.sense = opts.sense;
    cfg.lp_rounds = sol.rounds;
    cfg.lp_pivots = sol.pivots;
    return cfg;
}

void to_json(nlohmann::json& j, const OptConfig& cfg) {
    j = nlohmann::json{
        {"schema_version", kOptSchemaVersion},
        {"eta_prime", cfg.eta_prime},
        {"raw_bell", cfg.bell.raw},
        {"normalized_bell", cfg.bell.normalized},
        {"local_bound", cfg.local_bound},
        {"quantum_bound", cfg.quantum_bound},
        {"gap_polynomial",
         {{"d", cfg.gap_poly.d},
          {"c1", cfg.gap_poly.c1},
          {"c2", cfg.gap_poly.c2},
          {"omega_c", cfg.gap_poly.omega_c}}},
        {"degenerate", cfg.degenerate},
        {"solver_version", cfg.solver_version},
        {"vertex_sense", cfg.sense == VertexSense::AtMost ? "at_most" : "at_least"},
        {"lp_rounds", cfg.lp_rounds},
        {"lp_pivots", cfg.lp_pivots},
    };
}

void from_json(const nlohmann::json& j, OptConfig& cfg) {
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kOptSchemaVersion)
            throw ArgumentError("unsupported opt config schema_version " + std::to_string(version));
        cfg.eta_prime = j.at("eta_prime").get<double>();
        const auto raw = j.at("raw_bell").get<std::vector<double>>();
        const auto norm = j.at("normalized_bell").get<std::vector<double>>();
        if (raw.size() != kOptEntries || norm.size() != kOptEntries)
            throw ArgumentError("opt config Bell matrices must have 256 entries");
        std::copy(raw.begin(), raw.end(), cfg.bell.raw.begin());
        std::copy(norm.begin(), norm.end(), cfg.bell.normalized.begin());
        cfg.local_bound = j.at("local_bound").get<double>();
        cfg.quantum_bound = j.at("quantum_bound").get<double>();
        const auto& gp = j.at("gap_polynomial");
        cfg.gap_poly = {gp.at("d").get<double>(), gp.at("c1").get<double>(),
                        gp.at("c2").get<double>(), gp.at("omega_c").get<double>()};
        cfg.degenerate = j.at("degenerate").get<bool>();
        cfg.solver_version = j.at("solver_version").get<std::string>();
        cfg.sense = j.value("vertex_sense", std::string("at_most")) == "at_least" ? VertexSense::AtLeast
                                                                                : VertexSense::AtMost;
        cfg.lp_rounds = j.value("lp_rounds", 0);
        cfg.lp_pivots = j.value("lp_pivots", 0L);
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("malformed opt config: ") + e.what());
    }
}

}  // namespace nlg
