#pragma once

#include "nlg/qmath.hpp"

#include <string>

namespace nlg {

// Success probability = scale * Tr(rho op) + offset.
struct ScoreOperator {
    ComplexMatrix op;
    double scale = 1.0;
    double offset = 0.0;
};

struct GameSpec {
    std::string name;
    int n_qubits = 2;
    double local_bound = 0.0;
    double quantum_bound = 0.0;
    ScoreOperator score_operator;
    DensityMatrix winning_state;
};

GameSpec chsh_game();
GameSpec two_chsh_game();
GameSpec msg_game();

// Success probability of g on rho; tolerates excursions outside [0,1] of at
// most 1e-6 (clamped), anything larger is an IntegrityError.
double score(const GameSpec& g, const DensityMatrix& rho);

// Score of the winning state pushed through the depolarizing channel.
double score_at_visibility(const GameSpec& g, double eta);

// CHSH observables used by the optimal strategy.
ComplexMatrix chsh_operator();

// Best deterministic strategy value of the magic square game, by enumerating
// Bob's 2^9 grid assignments against Alice's best response per block.
double msg_deterministic_value();

// Same for CHSH over all 16 deterministic strategy pairs.
double chsh_deterministic_value();

}  // namespace nlg
