#include "nlg/games.hpp"

#include "nlg/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace nlg {

namespace {

constexpr double kClampTolerance = 1e-6;

// Register order [A1, A2, B1, B2] -> canonical [A1, B1, A2, B2].
constexpr std::array<std::size_t, 4> kPartyToCanonical{0, 2, 1, 3};

ComplexMatrix projector(const ComplexMatrix& observable, int outcome) {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return (ComplexMatrix::identity(observable.dim()) + observable * cplx(sign)) * cplx(0.5);
}

struct ChshObservables {
    std::array<ComplexMatrix, 2> alice;
    std::array<ComplexMatrix, 2> bob;
};

ChshObservables chsh_observables() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{pauli::z(), pauli::x()},
            {(pauli::z() + pauli::x()) * cplx(r), (pauli::z() - pauli::x()) * cplx(r)}};
}

bool chsh_wins(int a, int b, int x, int y) { return (a ^ b) == (x & y); }

}  // namespace

ComplexMatrix chsh_operator() {
    const auto [A, B] = chsh_observables();
    return kron(A[0], B[0]) + kron(A[0], B[1]) + kron(A[1], B[0]) - kron(A[1], B[1]);
}

GameSpec chsh_game() {
    return GameSpec{
        .name = "CHSH",
        .n_qubits = 2,
        .local_bound = 0.75,
        .quantum_bound = (2.0 + std::sqrt(2.0)) / 4.0,
        .score_operator = {chsh_operator(), 1.0 / 8.0, 0.5},
        .winning_state = epr_state(),
    };
}

GameSpec two_chsh_game() {
    const auto [A, B] = chsh_observables();
    std::array<std::array<ComplexMatrix, 2>, 2> ma, mb;  // [setting][outcome]
    for (int s = 0; s < 2; ++s)
        for (int o = 0; o < 2; ++o) {
            ma[s][o] = projector(A[s], o);
            mb[s][o] = projector(B[s], o);
        }

    ComplexMatrix op(16);
    for (int q = 0; q < 256; ++q) {
        const int x1 = q & 1, x2 = (q >> 1) & 1, y1 = (q >> 2) & 1, y2 = (q >> 3) & 1;
        const int a1 = (q >> 4) & 1, a2 = (q >> 5) & 1, b1 = (q >> 6) & 1, b2 = (q >> 7) & 1;
        if (!chsh_wins(a1, b1, x1, y1) || !chsh_wins(a2, b2, x2, y2)) continue;
        op += kron({ma[x1][a1], ma[x2][a2], mb[y1][b1], mb[y2][b2]});
    }
    op *= cplx(1.0 / 16.0);
    const double q = (2.0 + std::sqrt(2.0)) / 4.0;
    return GameSpec{
        .name = "2-CHSH",
        .n_qubits = 4,
        .local_bound = 0.625,
        .quantum_bound = q * q,
        .score_operator = {permute_qubits(op, kPartyToCanonical), 1.0, 0.0},
        .winning_state = tensor(epr_state(), epr_state()),
    };
}

namespace {

// Two-qubit observables of the magic square, first factor on the party's
// first qubit. Index 0..8 = O1..O9.
std::array<ComplexMatrix, 9> msg_observables() {
    const auto I = pauli::i(), X = pauli::x(), Y = pauli::y(), Z = pauli::z();
    return {kron(I, Z), kron(Z, I), kron(Z, Z), kron(X, I), kron(I, X),
            kron(X, X), kron(X, Z), kron(Z, X), kron(Y, Y)};
}

// Blocks 1..6: three rows then three columns of the grid.
constexpr std::array<std::array<int, 3>, 6> kMsgBlocks{{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8},
}};

constexpr std::array<int, 6> kMsgParity{1, 1, 1, 1, 1, -1};

}  // namespace

GameSpec msg_game() {
    const auto obs = msg_observables();
    const auto i4 = ComplexMatrix::identity(4);
    auto half_proj = [&](const ComplexMatrix& o, int sign) {
        return (i4 + o * cplx(sign)) * cplx(0.5);
    };

    ComplexMatrix op(16);
    for (const auto& block : kMsgBlocks) {
        for (int bits = 0; bits < 8; ++bits) {
            std::array<int, 3> a{};
            for (int k = 0; k < 3; ++k) a[k] = ((bits >> k) & 1) ? -1 : 1;
            // joint eigenprojector; vanishes when a violates the block parity
            ComplexMatrix alice = half_proj(obs[block[0]], a[0]) *
                                  half_proj(obs[block[1]], a[1]) *
                                  half_proj(obs[block[2]], a[2]);
            ComplexMatrix bob(4);
            for (int k = 0; k < 3; ++k) bob += half_proj(obs[block[k]].transpose(), a[k]);
            op += kron(alice, bob);
        }
    }
    op *= cplx(1.0 / 18.0);
    return GameSpec{
        .name = "MSG",
        .n_qubits = 4,
        .local_bound = 17.0 / 18.0,
        .quantum_bound = 1.0,
        .score_operator = {permute_qubits(op, kPartyToCanonical), 1.0, 0.0},
        .winning_state = tensor(epr_state(), epr_state()),
    };
}

double score(const GameSpec& g, const DensityMatrix& rho) {
    const std::size_t want = std::size_t{1} << g.n_qubits;
    if (rho.dim() != want)
        throw DimensionError(g.name + " expects a " + std::to_string(want) + "-dim state, got " +
                             std::to_string(rho.dim()));
    const cplx t = trace_product(rho.matrix(), g.score_operator.op);
    if (std::abs(t.imag()) > kClampTolerance)
        throw IntegrityError(g.name + " expectation has imaginary residue " + std::to_string(t.imag()));
    const double v = g.score_operator.scale * t.real() + g.score_operator.offset;
    if (v < -kClampTolerance || v > 1.0 + kClampTolerance)
        throw IntegrityError(g.name + " score " + std::to_string(v) + " outside [0,1]");
    return std::clamp(v, 0.0, 1.0);
}

double score_at_visibility(const GameSpec& g, double eta) {
    const DepolarizingChannel ch(eta, g.n_qubits == 2 ? Arity::TwoQubit : Arity::FourQubit);
    return score(g, apply_depolarizing(ch, g.winning_state));
}

double chsh_deterministic_value() {
    int best = 0;
    for (int s = 0; s < 16; ++s) {
        const int a[2] = {s & 1, (s >> 1) & 1};
        const int b[2] = {(s >> 2) & 1, (s >> 3) & 1};
        int wins = 0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) wins += chsh_wins(a[x], b[y], x, y);
        best = std::max(best, wins);
    }
    return best / 4.0;
}

double msg_deterministic_value() {
    int best = 0;
    for (int grid = 0; grid < 512; ++grid) {
        auto cell = [&](int k) { return ((grid >> k) & 1) ? -1 : 1; };
        int wins = 0;
        for (std::size_t x = 0; x < kMsgBlocks.size(); ++x) {
            int block_best = 0;
            for (int bits = 0; bits < 8; ++bits) {
                int prod = 1, agree = 0;
                for (int k = 0; k < 3; ++k) {
                    const int a = ((bits >> k) & 1) ? -1 : 1;
                    prod *= a;
                    agree += a == cell(kMsgBlocks[x][k]);
                }
                if (prod == kMsgParity[x]) block_best = std::max(block_best, agree);
            }
            wins += block_best;
        }
        best = std::max(best, wins);
    }
    return best / 18.0;
}

}  // namespace nlg
