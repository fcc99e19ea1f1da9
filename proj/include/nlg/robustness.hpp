#pragma once

#include "nlg/gap_polynomial.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlg {

// P(X >= k) for X ~ Binomial(n, p). k <= 0 gives exactly 1, k > n gives 0.
double binomial_upper_tail(std::int64_t n, std::int64_t k, double p);

// Wins threshold round(n * omega_v), rounding half away from zero.
std::int64_t win_threshold(std::int64_t n_rounds, double omega_v);

double convincingness(std::int64_t n_rounds, double omega_c, double omega_v);

double convincingness_mc(std::int64_t n_rounds, double omega_c, double omega_v, int seeds,
                         int draws_per_seed, std::uint64_t rng_seed_base);

struct ConvincingnessBound {
    double heuristic;  // exp(-n gap^2)
    double hoeffding;  // exp(-2 n gap^2)
};

ConvincingnessBound convincingness_bound(std::int64_t n_rounds, double omega_c, double omega_v);

// Fits d, c1, c2 from three evaluations and checks 20 more points.
GapPolynomial extract_gap_polynomial(const std::function<double(double)>& score_fn, double omega_c);

double gapped_score(const GapPolynomial& gp, std::int64_t n_res, double alpha);

// eta at which the gap vanishes; nullopt when there is no root in (0,1).
std::optional<double> noise_tolerance(const GapPolynomial& gp);

// A game reduced to what the statistics need.
struct GameModel {
    std::string name;
    int n_qubits = 2;
    double local_bound = 0.0;
    double quantum_bound = 0.0;
    std::function<double(double)> score;  // visibility -> success probability
};

// Root of score(eta) = local_bound found by bisection on the score itself.
std::optional<double> noise_tolerance_bisect(const GameModel& g, double tol = 1e-10);

// Rounds a budget of n_res noisy pairs affords: n_res for one-pair games,
// n_res / 2 for two-pair games.
std::int64_t rounds_for(int n_qubits, std::int64_t n_res);

struct CurveMode {
    int seeds = 0;  // 0 = deterministic
    int draws_per_seed = 0;
    std::uint64_t seed_base = 0;

    bool deterministic() const { return seeds == 0; }
    static CurveMode exact() { return {}; }
    static CurveMode monte_carlo(int seeds, int draws, std::uint64_t base) {
        return {seeds, draws, base};
    }
    std::string describe() const;
};

struct EtaGrid {
    double start = 0.0;
    double stop = 1.0;
    double step = 0.01;

    std::vector<double> points() const;
};

struct ConvincingnessCurve {
    std::string game;
    std::int64_t n_rounds = 0;
    std::int64_t n_res = 0;
    std::vector<std::pair<double, double>> points;  // (eta, p-value)
    CurveMode mode;
};

ConvincingnessCurve convincingness_curve(const GameModel& g, std::int64_t n_res,
                                         const EtaGrid& grid, const CurveMode& mode);

// p-value at one visibility under the given mode.
double convincingness_at(const GameModel& g, std::int64_t n_res, double eta, const CurveMode& mode);

struct CrossingResult {
    std::optional<double> eta_dagger;  // empty: the curve never reaches alpha
    double alpha = 0.05;
    std::int64_t n_res = 0;

    bool crossed() const { return eta_dagger.has_value(); }
};

inline constexpr double kCrossingGridStep = 1e-3;
inline constexpr double kCrossingTolerance = 1e-5;

CrossingResult significance_crossing(const GameModel& g, std::int64_t n_res, double alpha,
                                     const CurveMode& mode = CurveMode::exact());

enum class Sign { Positive, Negative, Zero, Mixed };

struct DominanceInterval {
    double lo;
    double hi;
    int leader;  // 1: first game has the larger gap, 2: second, 0: tie
};

struct DifferenceReport {
    // D(eta) = e0 + e2 eta^2 + e4 eta^4
    double e0 = 0.0, e2 = 0.0, e4 = 0.0;
    double at_zero = 0.0;
    double at_one = 0.0;
    Sign derivative_sign = Sign::Zero;
    bool identically_zero = false;
    std::vector<double> roots;  // eta in [0,1], ascending
    std::vector<DominanceInterval> intervals;

    double operator()(double eta) const {
        const double x = eta * eta;
        return e0 + x * (e2 + x * e4);
    }
};

DifferenceReport polynomial_difference(const GapPolynomial& g1, const GapPolynomial& g2);

struct PredictorInput {
    std::string game;
    GapPolynomial gap;
    double quantum_bound = 0.0;
    std::optional<double> crossing;  // 1 - eta_dagger, when a curve was evaluated
};

struct PredictorRow {
    std::string game;
    std::optional<double> kappa;  // empty for zero-gap configurations
    double ratio = 0.0;
    double raw_gap = 0.0;
    double delta_const = 0.0, delta_eta2 = 0.0, delta_eta4 = 0.0;
    double delta_sq_const = 0.0, delta_sq_eta2 = 0.0, delta_sq_eta4 = 0.0;
    double delta_sq_eta6 = 0.0, delta_sq_eta8 = 0.0;
    std::optional<double> crossing;  // 1 - eta_dagger when curves are supplied
};

struct OrderItem {
    std::string game;
    std::optional<double> kappa;       // empty: undefined (zero gap)
    std::optional<double> eta_dagger;  // empty: never crosses
};

// Checks kappa_i > kappa_j  =>  eta_dagger_i < eta_dagger_j + eps over every
// pair with defined kappa. Kappas within a relative kKappaTie make no
// prediction; a game that never crosses counts as eta_dagger = +inf.
inline constexpr double kKappaTie = 1e-5;  // LP-solved gaps carry ~1e-7 noise
bool order_consistent(const std::vector<OrderItem>& items, double eps);

std::vector<PredictorRow> predictor_table(const std::vector<PredictorInput>& games,
                                          std::int64_t n_res, double alpha);

}  // namespace nlg
