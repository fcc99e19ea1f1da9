#include "nlg/robustness.hpp"

#include "nlg/errors.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/random/binomial_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace nlg {

namespace {

void require_probability(double p, const char* what, bool open) {
    const bool ok = open ? (p > 0.0 && p < 1.0) : (p >= 0.0 && p <= 1.0);
    if (!ok)
        throw ArgumentError(std::string(what) + " out of range: " + std::to_string(p));
}

void require_rounds(std::int64_t n) {
    if (n < 1) throw ArgumentError("number of rounds must be positive, got " + std::to_string(n));
}

}  // namespace

double binomial_upper_tail(std::int64_t n, std::int64_t k, double p) {
    require_rounds(n);
    require_probability(p, "success probability", false);
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    // P(X >= k) = I_p(k, n - k + 1)
    return boost::math::ibeta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

std::int64_t win_threshold(std::int64_t n_rounds, double omega_v) {
    return static_cast<std::int64_t>(std::llround(static_cast<double>(n_rounds) * omega_v));
}

double convincingness(std::int64_t n_rounds, double omega_c, double omega_v) {
    require_rounds(n_rounds);
    require_probability(omega_c, "local bound", true);
    require_probability(omega_v, "observed score", false);
    return binomial_upper_tail(n_rounds, win_threshold(n_rounds, omega_v), omega_c);
}

double convincingness_mc(std::int64_t n_rounds, double omega_c, double omega_v, int seeds,
                         int draws_per_seed, std::uint64_t rng_seed_base) {
    require_rounds(n_rounds);
    require_probability(omega_c, "local bound", true);
    require_probability(omega_v, "observed score", false);
    if (seeds < 1 || draws_per_seed < 1)
        throw ArgumentError("Monte-Carlo mode needs at least one seed and one draw");

    double total = 0.0;
    for (int s = 0; s < seeds; ++s) {
        boost::random::mt19937_64 rng(rng_seed_base + static_cast<std::uint64_t>(s));
        boost::random::binomial_distribution<std::int64_t, double> wins(n_rounds, omega_v);
        double seed_sum = 0.0;
        for (int d = 0; d < draws_per_seed; ++d)
            seed_sum += binomial_upper_tail(n_rounds, wins(rng), omega_c);
        total += seed_sum / draws_per_seed;
    }
    return total / seeds;
}

ConvincingnessBound convincingness_bound(std::int64_t n_rounds, double omega_c, double omega_v) {
    require_rounds(n_rounds);
    if (omega_v == omega_c)
        throw ArgumentError("convincingness bound is undefined at zero gap");
    const double g = omega_v - omega_c;
    const double n = static_cast<double>(n_rounds);
    return {std::exp(-n * g * g), std::exp(-2.0 * n * g * g)};
}

GapPolynomial extract_gap_polynomial(const std::function<double(double)>& score_fn, double omega_c) {
    const double k_mixed = score_fn(0.0);
    const double k_ideal = score_fn(1.0);
    const double k_part = 4.0 * score_fn(std::sqrt(0.5)) - k_ideal - k_mixed;
    const auto gp = GapPolynomial::from_weights(k_ideal, k_part, k_mixed, omega_c);

    double worst = 0.0;
    for (int j = 0; j < 20; ++j) {
        const double eta = (j + 0.5) / 20.0;
        worst = std::max(worst, std::abs(score_fn(eta) - gp.score(eta)));
    }
    if (worst > 1e-9)
        throw ModelMismatchError("score is not a depolarizing polynomial (residual " +
                                 std::to_string(worst) + ")");
    return gp;
}

double gapped_score(const GapPolynomial& gp, std::int64_t n_res, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ArgumentError("alpha must lie in (0,1), got " + std::to_string(alpha));
    if (n_res < 1) throw ArgumentError("resource count must be positive");
    const double base = std::abs(gp.constant());
    if (base < 1e-9)
        throw DegenerateConfigError("gapped score undefined: constant term equals the local bound");
    const double r = (gp.c1 + gp.c2) / base;
    return r * r * static_cast<double>(n_res) / -std::log(alpha);
}

namespace {

// Real roots of a x^2 + b x + c, ascending; linear or empty when degenerate.
std::vector<double> quadratic_roots(double a, double b, double c) {
    constexpr double tiny = 1e-14;
    std::vector<double> out;
    if (std::abs(a) < tiny) {
        if (std::abs(b) >= tiny) out.push_back(-c / b);
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        if (disc > -tiny) out.push_back(-b / (2.0 * a));
        return out;
    }
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q != 0.0) {
        out.push_back(q / a);
        out.push_back(c / q);
    } else {
        out.push_back(0.0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::optional<double> noise_tolerance(const GapPolynomial& gp) {
    for (double x : quadratic_roots(gp.c2, gp.c1, gp.constant()))
        if (x > 0.0 && x < 1.0) return std::sqrt(x);
    return std::nullopt;
}

std::optional<double> noise_tolerance_bisect(const GameModel& g, double tol) {
    double lo = 0.0, hi = 1.0;
    if (!(g.score(lo) < g.local_bound) || !(g.score(hi) > g.local_bound)) return std::nullopt;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (g.score(mid) > g.local_bound ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::int64_t rounds_for(int n_qubits, std::int64_t n_res) {
    const std::int64_t rounds = n_qubits == 2 ? n_res : n_res / 2;
    if (rounds < 1)
        throw ArgumentError("resource count " + std::to_string(n_res) +
                            " affords no rounds for a " + std::to_string(n_qubits) + "-qubit game");
    return rounds;
}

std::string CurveMode::describe() const {
    if (deterministic()) return "det";
    std::ostringstream os;
    os << "mc:" << seeds << 'x' << draws_per_seed;
    return os.str();
}

std::vector<double> EtaGrid::points() const {
    if (!(step > 0.0)) throw ArgumentError("eta grid step must be positive");
    if (start < 0.0 || stop > 1.0 || start > stop)
        throw ArgumentError("eta grid must satisfy 0 <= start <= stop <= 1");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = std::min(stop, start + static_cast<double>(i) * step);
    return out;
}

double convincingness_at(const GameModel& g, std::int64_t n_res, double eta, const CurveMode& mode) {
    const std::int64_t n = rounds_for(g.n_qubits, n_res);
    const double omega_v = g.score(eta);
    if (mode.deterministic()) return convincingness(n, g.local_bound, omega_v);
    return convincingness_mc(n, g.local_bound, omega_v, mode.seeds, mode.draws_per_seed,
                             mode.seed_base);
}

ConvincingnessCurve convincingness_curve(const GameModel& g, std::int64_t n_res,
                                         const EtaGrid& grid, const CurveMode& mode) {
    ConvincingnessCurve curve{g.name, rounds_for(g.n_qubits, n_res), n_res, {}, mode};
    for (double eta : grid.points())
        curve.points.emplace_back(eta, convincingness_at(g, n_res, eta, mode));
    return curve;
}

CrossingResult significance_crossing(const GameModel& g, std::int64_t n_res, double alpha,
                                     const CurveMode& mode) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ArgumentError("alpha must lie in (0,1), got " + std::to_string(alpha));
    CrossingResult result{std::nullopt, alpha, n_res};
    auto p = [&](double eta) { return convincingness_at(g, n_res, eta, mode); };

    const int cells = static_cast<int>(std::lround(1.0 / kCrossingGridStep));
    int hit = -1;
    for (int i = 0; i <= cells; ++i)
        if (p(i * kCrossingGridStep) <= alpha) {
            hit = i;
            break;
        }
    if (hit < 0) return result;
    if (hit == 0 || !mode.deterministic()) {
        result.eta_dagger = hit * kCrossingGridStep;
        return result;
    }
    double lo = (hit - 1) * kCrossingGridStep;
    double hi = hit * kCrossingGridStep;
    while (hi - lo > kCrossingTolerance) {
        const double mid = 0.5 * (lo + hi);
        (p(mid) <= alpha ? hi : lo) = mid;
    }
    result.eta_dagger = hi;
    return result;
}

DifferenceReport polynomial_difference(const GapPolynomial& g1, const GapPolynomial& g2) {
    constexpr double tol = 1e-12;
    DifferenceReport r;
    r.e0 = g1.constant() - g2.constant();
    r.e2 = g1.c1 - g2.c1;
    r.e4 = g1.c2 - g2.c2;
    r.at_zero = r(0.0);
    r.at_one = r(1.0);
    r.identically_zero = std::abs(r.e0) < tol && std::abs(r.e2) < tol && std::abs(r.e4) < tol;

    // D'(eta) = 2 eta (e2 + 2 e4 eta^2); sign follows the linear factor in eta^2
    const double lo = r.e2, hi = r.e2 + 2.0 * r.e4;
    if (std::abs(lo) < tol && std::abs(hi) < tol)
        r.derivative_sign = Sign::Zero;
    else if (std::min(lo, hi) >= -tol)
        r.derivative_sign = Sign::Positive;
    else if (std::max(lo, hi) <= tol)
        r.derivative_sign = Sign::Negative;
    else
        r.derivative_sign = Sign::Mixed;

    if (r.identically_zero) {
        r.intervals.push_back({0.0, 1.0, 0});
        return r;
    }
    for (double x : quadratic_roots(r.e4, r.e2, r.e0)) {
        if (x < -tol || x > 1.0 + tol) continue;
        const double eta = std::sqrt(std::clamp(x, 0.0, 1.0));
        if (r.roots.empty() || eta - r.roots.back() > tol) r.roots.push_back(eta);
    }
    std::vector<double> cuts{0.0};
    for (double eta : r.roots)
        if (eta > cuts.back() + tol && eta < 1.0 - tol) cuts.push_back(eta);
    cuts.push_back(1.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double v = r(0.5 * (cuts[i] + cuts[i + 1]));
        r.intervals.push_back({cuts[i], cuts[i + 1], v > tol ? 1 : (v < -tol ? 2 : 0)});
    }
    return r;
}

bool order_consistent(const std::vector<OrderItem>& items, double eps) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (const auto& a : items)
        for (const auto& b : items) {
            if (!a.kappa || !b.kappa) continue;
            if (!(*a.kappa > *b.kappa * (1.0 + kKappaTie))) continue;
            const double ea = a.eta_dagger.value_or(inf), eb = b.eta_dagger.value_or(inf);
            if (ea == inf && eb == inf) continue;
            if (!(ea < eb + eps)) return false;
        }
    return true;
}

std::vector<PredictorRow> predictor_table(const std::vector<PredictorInput>& games,
                                          std::int64_t n_res, double alpha) {
    std::vector<PredictorRow> rows;
    rows.reserve(games.size());
    for (const auto& in : games) {
        const GapPolynomial& gp = in.gap;
        PredictorRow row;
        row.game = in.game;
        try {
            row.kappa = gapped_score(gp, n_res, alpha);
        } catch (const DegenerateConfigError&) {
            row.kappa.reset();
        }
        row.ratio = in.quantum_bound / gp.omega_c;
        row.raw_gap = in.quantum_bound - gp.omega_c;
        const double k0 = gp.constant();
        row.delta_const = k0;
        row.delta_eta2 = gp.c1;
        row.delta_eta4 = gp.c2;
        row.delta_sq_const = k0 * k0;
        row.delta_sq_eta2 = 2.0 * k0 * gp.c1;
        row.delta_sq_eta4 = gp.c1 * gp.c1 + 2.0 * k0 * gp.c2;
        row.delta_sq_eta6 = 2.0 * gp.c1 * gp.c2;
        row.delta_sq_eta8 = gp.c2 * gp.c2;
        row.crossing = in.crossing;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nlg
