#pragma once

#include "nlg/errors.hpp"
#include "nlg/opt2chsh.hpp"
#include "nlg/robustness.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nlg {

// Requested an opt configuration that has not been solved yet.
class MissingConfigError : public Error {
public:
    using Error::Error;
};

enum class GameKind { Chsh, TwoChsh, Msg, Opt };

struct GameId {
    GameKind kind = GameKind::Chsh;
    double eta_prime = 1.0;  // Opt only

    // chsh | 2chsh | msg | opt2chsh:<eta'>; throws ArgumentError otherwise.
    static GameId parse(const std::string& text);
    std::string str() const;
};

std::string valid_game_ids();

// Flat-file cache of solved opt configs, one JSON file per (eta', solver
// version, vertex sense) key.
class OptConfigStore {
public:
    explicit OptConfigStore(std::filesystem::path dir, LpOptions opts = {});

    std::filesystem::path path_for(double eta_prime) const;
    std::optional<OptConfig> load(double eta_prime) const;
    std::filesystem::path save(const OptConfig& cfg) const;

    // Loads a cached config or, when allowed, solves and stores it.
    OptConfig get(double eta_prime, bool solve_missing) const;

    const std::filesystem::path& dir() const noexcept { return dir_; }
    const LpOptions& options() const noexcept { return opts_; }

private:
    std::filesystem::path dir_;
    LpOptions opts_;
};

struct CatalogEntry {
    GameId id;
    GameModel model;
    GapPolynomial gap;
    bool degenerate = false;
};

// Score functions go through the operator path (density matrix or
// probability matrix); the gap polynomial is extracted from them.
CatalogEntry make_entry(const GameId& id, const OptConfigStore& store, bool solve_missing);

GameModel chsh_model();
GameModel two_chsh_model();
GameModel msg_model();
GameModel opt_model(std::shared_ptr<const OptConfig> cfg);

// chsh, 2chsh, msg and the eight opt configurations the comparison table uses.
std::vector<std::string> builtin_game_ids();

}  // namespace nlg
