#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "expected.hpp"
#include "nlg/commands.hpp"
#include "nlg/errors.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <sys/wait.h>

using namespace nlg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(NLG_TEST_SCRATCH) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int run(const std::string& args) {
    const std::string cmd = std::string(NLG_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig base_config(const fs::path& dir) {
    RunConfig cfg;
    cfg.out_dir = dir / "out";
    cfg.config_dir = dir / "configs";
    return cfg;
}

}  // namespace

TEST_CASE("game ids") {
    CHECK(GameId::parse("chsh").kind == GameKind::Chsh);
    CHECK(GameId::parse("2chsh").kind == GameKind::TwoChsh);
    CHECK(GameId::parse("msg").kind == GameKind::Msg);
    const auto opt = GameId::parse("opt2chsh:0.87");
    CHECK(opt.kind == GameKind::Opt);
    CHECK(opt.eta_prime == doctest::Approx(0.87));
    CHECK(opt.str() == "opt2chsh:0.87");
    CHECK_THROWS_AS(GameId::parse("opt2chsh:1.5"), ArgumentError);
    CHECK_THROWS_AS(GameId::parse("opt2chsh:"), ArgumentError);
    try {
        GameId::parse("bogus");
        FAIL("expected an error");
    } catch (const ArgumentError& e) {
        CHECK(std::string(e.what()).find("chsh, 2chsh, msg") != std::string::npos);
    }
}

TEST_CASE("run config validation") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = RunConfig{};
    cfg.n_res = {1};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = RunConfig{};
    cfg.eta_grid = {0.0, 1.1, 0.1};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = RunConfig{};
    cfg.eta_grid = {0.0, 1.0, -0.1};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = RunConfig{};
    cfg.games = {"nope"};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = RunConfig{};
    cfg.n_res_override["chsh"] = 5000;
    CHECK(cfg.budget("chsh", 1000) == 5000);
    CHECK(cfg.budget("msg", 1000) == 1000);
}

TEST_CASE("bounds command") {
    const auto dir = scratch("bounds");
    const auto rows = compute_bounds(base_config(dir));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].local_bound == doctest::Approx(0.75));
    CHECK(rows[0].quantum_bound == doctest::Approx(0.853553).epsilon(1e-6));
    CHECK(rows[1].local_bound == doctest::Approx(0.625));
    CHECK(rows[1].quantum_bound == doctest::Approx(0.728553).epsilon(1e-6));
    CHECK(rows[2].local_bound == doctest::Approx(0.944444).epsilon(1e-6));
    CHECK(rows[2].quantum_bound == doctest::Approx(1.0));
    const auto out = cmd_bounds(base_config(dir));
    CHECK(fs::exists(dir / "out" / "bounds.csv"));
    CHECK(fs::exists(dir / "out" / "bounds.json"));
}

TEST_CASE("curves: rows per game, crossing rows, svg data, determinism") {
    const auto dir = scratch("curves");
    RunConfig cfg = base_config(dir);
    cmd_curves(cfg);
    const std::string csv = slurp(dir / "out" / "curves.csv");
    const std::string svg = slurp(dir / "out" / "curves.svg");

    std::map<std::string, int> curve_rows;
    std::map<std::string, std::string> crossing;
    std::vector<std::vector<std::string>> data;
    for (const auto& line : lines_of(csv)) {
        if (line.empty() || line[0] == '#' || line.rfind("kind,", 0) == 0) continue;
        const auto cells = split(line, ',');
        REQUIRE(cells.size() == 6);
        if (cells[0] == "curve") {
            ++curve_rows[cells[1]];
            data.push_back(cells);
        } else {
            crossing[cells[1]] = cells[4];
        }
    }
    CHECK(curve_rows["chsh"] == 101);
    CHECK(curve_rows["2chsh"] == 101);
    CHECK(curve_rows["msg"] == 101);

    // crossing row agrees with the robustness module
    const auto direct = significance_crossing(chsh_model(), 1000, 0.05);
    REQUIRE(direct.crossed());
    CHECK(crossing["chsh"] == format_double(*direct.eta_dagger));

    // every csv curve point shows up as an svg data comment
    int found = 0;
    for (const auto& c : data) {
        const std::string label = c[1] == "chsh" ? "CHSH" : (c[1] == "2chsh" ? "2-CHSH" : "MSG");
        found += svg.find("<!-- data: " + label + "," + c[4] + "," + c[5] + " -->") != std::string::npos;
    }
    CHECK(found == static_cast<int>(data.size()));
    CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    CHECK(svg.find("alpha = 0.05") != std::string::npos);

    // byte-identical on a rerun
    cmd_curves(cfg);
    CHECK(slurp(dir / "out" / "curves.csv") == csv);
    CHECK(slurp(dir / "out" / "curves.svg") == svg);
}

TEST_CASE("curves in monte carlo mode record their methodology") {
    const auto dir = scratch("curves_mc");
    RunConfig cfg = base_config(dir);
    cfg.games = {"chsh"};
    cfg.eta_grid = {0.8, 1.0, 0.05};
    cfg.mode = CurveMode::monte_carlo(10, 3, 0);
    cfg.seed = 7;
    cmd_curves(cfg);
    const std::string csv = slurp(dir / "out" / "curves.csv");
    CHECK(csv.find("# mode: mc:10x3 (averaged over 10 runs") != std::string::npos);
    CHECK(csv.find("seed_i = 7 + i") != std::string::npos);
    cmd_curves(cfg);
    CHECK(slurp(dir / "out" / "curves.csv") == csv);
}

TEST_CASE("tolerance command") {
    const auto dir = scratch("tolerance");
    const auto out = cmd_tolerance(base_config(dir));
    const std::string csv = slurp(dir / "out" / "tolerance.csv");
    std::map<std::string, double> star;
    std::map<std::string, double> last_score;
    for (const auto& line : lines_of(csv)) {
        if (line.empty() || line[0] == '#') continue;
        const auto c = split(line, ',');
        if (c[0] == "eta_star") star[c[1]] = std::stod(c[2]);
        if (c[0] == "score" && c[2] == "1") last_score[c[1]] = std::stod(c[3]);
    }
    CHECK(star["chsh"] == doctest::Approx(expected::kEtaStarChsh).epsilon(1e-3));
    CHECK(star["chsh"] < star["2chsh"]);
    CHECK(star["2chsh"] < star["msg"]);
    CHECK(last_score["chsh"] == doctest::Approx(0.8535534));
    CHECK(last_score["msg"] == doctest::Approx(1.0));
    CHECK(fs::exists(dir / "out" / "tolerance.svg"));
}

TEST_CASE("table2 needs solved configs") {
    const auto dir = scratch("table2_missing");
    RunConfig cfg = base_config(dir);
    cfg.games = {"chsh", "opt2chsh:1.00"};
    try {
        cmd_table2(cfg);
        FAIL("expected a missing config error");
    } catch (const MissingConfigError& e) {
        CHECK(std::string(e.what()).find("nlg optimize --eta-prime 1.00") != std::string::npos);
    }
}

TEST_CASE("optimize then table2") {
    const auto dir = scratch("table2");
    RunConfig cfg = base_config(dir);
    const auto opt = cmd_optimize(cfg, 1.0);
    REQUIRE(opt.files.size() == 2);
    CHECK(fs::exists(opt.files[0]));
    CHECK_THROWS_AS(cmd_optimize(cfg, 1.2), ArgumentError);

    cfg.games = {"chsh", "2chsh", "msg", "opt2chsh:1.00"};
    cfg.n_res = {1000, 10000};
    cmd_table2(cfg);
    const std::string csv = slurp(dir / "out" / "table2.csv");
    std::map<std::string, std::vector<std::string>> rows;
    for (const auto& line : lines_of(csv)) {
        if (line.empty() || line[0] == '#' || line.rfind("game,", 0) == 0) continue;
        const auto c = split(line, ',');
        rows[c[0] + "@" + c[1]] = c;
    }
    CHECK(std::abs(std::stod(rows["chsh@10000"][4]) - expected::kKappaChsh10k) < 0.5);
    CHECK(std::abs(std::stod(rows["2chsh@1000"][5]) - expected::kRatioTwoChsh) < 1e-3);
    CHECK(rows.count("opt2chsh:1.00@1000") == 1);
    CHECK(fs::exists(dir / "out" / "table2.json"));
}

TEST_CASE("optimize marks the zero-gap configurations") {
    const auto dir = scratch("degenerate");
    const auto out = cmd_optimize(base_config(dir), 0.83);
    const auto j = nlohmann::json::parse(slurp(out.files[0]));
    CHECK(j["degenerate"] == true);
    CHECK(out.summary.find("degenerate") != std::string::npos);
}

TEST_CASE("crossings: stability report") {
    const auto dir = scratch("crossings");
    RunConfig cfg = base_config(dir);
    cfg.games = {"chsh", "2chsh", "msg"};
    cfg.n_res = {100, 1000, 2000, 10000};
    const auto rep = compute_crossings(cfg);
    CHECK(rep.rows.size() == 12);
    REQUIRE(rep.onset);
    CHECK(*rep.onset <= 2000);
    CHECK(rep.crossed.at(100) <= rep.crossed.at(2000));
    cmd_crossings(cfg);
    const std::string csv = slurp(dir / "out" / "crossings.csv");
    CHECK(csv.find("# stability_onset: ") != std::string::npos);
}

TEST_CASE("executable exit codes") {
    const auto dir = scratch("exe");
    const std::string out = " --out " + (dir / "out").string() + " --config-dir " + (dir / "cfg").string();
    CHECK(run("bounds" + out) == 0);
    CHECK(run("--help") == 0);
    CHECK(run("curves --help") == 0);
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("curves --games nope" + out) == 2);
    CHECK(run("curves --alpha 1.5" + out) == 2);
    CHECK(run("curves --eta-grid 0:1" + out) == 2);
    CHECK(run("curves --mode mc:0x3" + out) == 2);
    CHECK(run("table2 --games opt2chsh:0.86" + out) == 2);
    CHECK(run("optimize --eta-prime 2" + out) == 2);
    CHECK(run("tolerance --games chsh" + out) == 0);
}
