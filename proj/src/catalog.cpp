#include "nlg/catalog.hpp"

#include "nlg/games.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlg {

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

GameModel from_spec(std::shared_ptr<const GameSpec> spec) {
    return GameModel{spec->name, spec->n_qubits, spec->local_bound, spec->quantum_bound,
                     [spec](double eta) { return score_at_visibility(*spec, eta); }};
}

}  // namespace

GameId GameId::parse(const std::string& text) {
    if (text == "chsh") return {GameKind::Chsh, 1.0};
    if (text == "2chsh") return {GameKind::TwoChsh, 1.0};
    if (text == "msg") return {GameKind::Msg, 1.0};
    const std::string prefix = "opt2chsh:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string tail = text.substr(prefix.size());
        double eta = 0.0;
        const auto res = std::from_chars(tail.data(), tail.data() + tail.size(), eta);
        if (res.ec == std::errc{} && res.ptr == tail.data() + tail.size() && eta >= 0.0 && eta <= 1.0)
            return {GameKind::Opt, eta};
    }
    throw ArgumentError("unknown game id '" + text + "'; valid ids: " + valid_game_ids());
}

std::string GameId::str() const {
    switch (kind) {
        case GameKind::Chsh: return "chsh";
        case GameKind::TwoChsh: return "2chsh";
        case GameKind::Msg: return "msg";
        case GameKind::Opt: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "opt2chsh:%.2f", eta_prime);
            return buf;
        }
    }
    return {};
}

std::string valid_game_ids() { return "chsh, 2chsh, msg, opt2chsh:<eta' in [0,1]>"; }

OptConfigStore::OptConfigStore(std::filesystem::path dir, LpOptions opts)
    : dir_(std::move(dir)), opts_(opts) {}

std::filesystem::path OptConfigStore::path_for(double eta_prime) const {
    const std::string key = "eta_prime=" + shortest(eta_prime) + ";solver=" + kSolverVersion +
                            ";sense=" + (opts_.sense == VertexSense::AtMost ? "at_most" : "at_least");
    char name[96];
    std::snprintf(name, sizeof name, "opt2chsh-%.4f-%016llx.json", eta_prime,
                  static_cast<unsigned long long>(fnv1a(key)));
    return dir_ / name;
}

std::optional<OptConfig> OptConfigStore::load(double eta_prime) const {
    const auto path = path_for(eta_prime);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("cannot parse " + path.string() + ": " + e.what());
    }
    return j.get<OptConfig>();
}

std::filesystem::path OptConfigStore::save(const OptConfig& cfg) const {
    std::filesystem::create_directories(dir_);
    const auto path = path_for(cfg.eta_prime);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ArgumentError("cannot write " + tmp);
        out << nlohmann::json(cfg).dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
    return path;
}

OptConfig OptConfigStore::get(double eta_prime, bool solve_missing) const {
    if (auto cfg = load(eta_prime)) return *cfg;
    if (!solve_missing) {
        const std::string id = GameId{GameKind::Opt, eta_prime}.str();
        const std::string value = id.substr(id.find(':') + 1);
        std::ostringstream os;
        os << "no solved configuration for " << id << " in " << dir_.string()
           << "; run `nlg optimize --eta-prime " << value << " --config-dir " << dir_.string()
           << "` first";
        throw MissingConfigError(os.str());
    }
    OptConfig cfg = make_opt_config(eta_prime, opts_);
    save(cfg);
    return cfg;
}

GameModel chsh_model() { return from_spec(std::make_shared<const GameSpec>(chsh_game())); }
GameModel two_chsh_model() { return from_spec(std::make_shared<const GameSpec>(two_chsh_game())); }
GameModel msg_model() { return from_spec(std::make_shared<const GameSpec>(msg_game())); }

GameModel opt_model(std::shared_ptr<const OptConfig> cfg) {
    char name[32];
    std::snprintf(name, sizeof name, "2-CHSH-OPT(%.2f)", cfg->eta_prime);
    auto w = std::make_shared<const ComplexMatrix>(opt_score_operator(cfg->bell.normalized));
    return GameModel{name, 4, cfg->local_bound, cfg->quantum_bound,
                     [w](double eta) { return opt_score_via_operator(*w, eta); }};
}

CatalogEntry make_entry(const GameId& id, const OptConfigStore& store, bool solve_missing) {
    CatalogEntry e{id, {}, {}, false};
    switch (id.kind) {
        case GameKind::Chsh: e.model = chsh_model(); break;
        case GameKind::TwoChsh: e.model = two_chsh_model(); break;
        case GameKind::Msg: e.model = msg_model(); break;
        case GameKind::Opt: {
            auto cfg = std::make_shared<const OptConfig>(store.get(id.eta_prime, solve_missing));
            e.model = opt_model(cfg);
            e.gap = cfg->gap_poly;
            e.degenerate = cfg->degenerate;
            return e;
        }
    }
    e.gap = extract_gap_polynomial(e.model.score, e.model.local_bound);
    return e;
}

std::vector<std::string> builtin_game_ids() {
    return {"chsh",          "2chsh",         "msg",           "opt2chsh:0.85",
            "opt2chsh:0.86", "opt2chsh:0.87", "opt2chsh:0.88", "opt2chsh:0.89",
            "opt2chsh:0.90", "opt2chsh:0.95", "opt2chsh:1.00"};
}

}  // namespace nlg
