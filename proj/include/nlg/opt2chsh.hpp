#pragma once

#include "nlg/gap_polynomial.hpp"
#include "nlg/qmath.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace nlg {

inline constexpr std::size_t kOptSide = 16;
inline constexpr std::size_t kOptEntries = kOptSide * kOptSide;

using Matrix16 = std::array<double, kOptEntries>;  // row-major

// Entry (i, j) = (1/16) Tr(rho_eta A_i (x) B_j), i = 4x + a, j = 4y + b with
// x = 2 x1 + x2 and a = 2 a1 + a2 (likewise for Bob).
struct ProbabilityMatrix {
    Matrix16 entries{};
    double eta = 1.0;

    double operator()(std::size_t i, std::size_t j) const { return entries[i * kOptSide + j]; }
};

ProbabilityMatrix build_probability_matrix(double eta);

struct BellMatrix {
    Matrix16 raw{};
    Matrix16 normalized{};

    // Throws DegenerateConfigError when raw is constant.
    static BellMatrix from_raw(const Matrix16& raw);
};

// Deterministic strategy for both players. Bit x of the low nibble is
// Alice's first output on input x, bits 4-7 her second output, bits 8-11
// and 12-15 the same for Bob.
class LocalVertex {
public:
    static constexpr std::size_t kCount = 1U << 16;

    explicit constexpr LocalVertex(std::uint16_t assignment) : bits_(assignment) {}

    std::uint16_t assignment() const noexcept { return bits_; }
    unsigned alice_output(unsigned x) const noexcept {
        return 2U * ((bits_ >> x) & 1U) + ((bits_ >> (4 + x)) & 1U);
    }
    unsigned bob_output(unsigned y) const noexcept {
        return 2U * ((bits_ >> (8 + y)) & 1U) + ((bits_ >> (12 + y)) & 1U);
    }

    // 0/1 indicator of the 16 outcome cells this strategy produces.
    std::array<std::uint8_t, kOptEntries> payoff() const;

    // Sum of m over the strategy's 16 cells.
    double value(const Matrix16& m) const;

private:
    std::uint16_t bits_;
};

std::vector<LocalVertex> enumerate_local_vertices();

// Direction of the local-vertex constraints. AtMost reads them as Bell
// inequalities (every local strategy scores at most 1); AtLeast is the
// literal ">= 1" form, whose optimum is the constant matrix.
enum class VertexSense { AtMost, AtLeast };

struct LpOptions {
    VertexSense sense = VertexSense::AtMost;
    double feasibility = 1e-7;
    int cuts_per_round = 16;  // most violated vertices added per round, at most one per Alice strategy
    int max_rounds = 20000;
};

struct LpSolution {
    Matrix16 coefficients{};
    double objective = 0.0;  // sum P_ij c_ij
    int rounds = 0;
    long pivots = 0;
    double worst_violation = 0.0;
};

// Constraint-generation LP over the 2^16 local vertices.
LpSolution solve_bell_lp_raw(const ProbabilityMatrix& p, const LpOptions& opts = {});
BellMatrix solve_bell_lp(const ProbabilityMatrix& p, const LpOptions& opts = {});

// (1/16) max over deterministic strategies of the normalized Bell sum.
double opt_local_bound(const BellMatrix& b);

double opt_score(const Matrix16& normalized, double eta);

// Sum of b_ij times the joint projector of cell (i,j), over 16: the 16x16
// operator whose expectation on the noisy winning state is the score.
ComplexMatrix opt_score_operator(const Matrix16& normalized);
double opt_score_via_operator(const ComplexMatrix& w, double eta);

inline constexpr int kOptSchemaVersion = 1;
inline constexpr const char* kSolverVersion = "dense-bland-cg-1";

struct OptConfig {
    double eta_prime = 1.0;
    BellMatrix bell;
    double local_bound = 0.0;
    double quantum_bound = 0.0;
    GapPolynomial gap_poly;
    bool degenerate = false;  // zero gap: the configuration is never convincing
    std::string solver_version = kSolverVersion;
    VertexSense sense = VertexSense::AtMost;
    int lp_rounds = 0;
    long lp_pivots = 0;

    double score(double eta) const { return opt_score(bell.normalized, eta); }
};

OptConfig make_opt_config(double eta_prime, const LpOptions& opts = {});

// Completes an OptConfig from an existing Bell matrix.
OptConfig opt_config_from_bell(double eta_prime, BellMatrix bell);

void to_json(nlohmann::json& j, const OptConfig& cfg);
void from_json(const nlohmann::json& j, OptConfig& cfg);

}  // namespace nlg
