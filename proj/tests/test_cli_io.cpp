#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bhcav/config.hpp"
#include "bhcav/output.hpp"
#include "bhcav/run.hpp"

using namespace bhcav;
namespace fs = std::filesystem;

namespace {

const char* kFig7Config = R"(# fig7 preset parameters
[run]
variant = cavity

[scaled]
u = 250
u_eg = 15
F = 25
eps_c = 100
eps_e = 100   ; resonant excited level

[occupations]
list = "1,1,1"
)";

int line_of(const std::string& text, const ParseOptions& opts = {}) {
    try {
        parse_config(text, opts);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

const OutputFile* find_file(const RunResult& r, const std::string& name) {
    for (const auto& f : r.files)
        if (f.name == name) return &f;
    return nullptr;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("bhcav_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_exe(const std::string& args) {
    const std::string cmd = std::string(PHASES_EXE) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config(kFig7Config);
    REQUIRE(cfg.variant.has_value());
    CHECK(*cfg.variant == ModelVariant::cavity);
    const auto sp = cfg.resolved_params();
    CHECK(sp.u_g == 250.0);
    CHECK(sp.u_e == 250.0);
    CHECK(sp.u_eg_e == 15.0);
    CHECK(sp.eps_c_g == 100.0);
    CHECK(sp.eps_e_s == 100.0);
    REQUIRE(cfg.occupations.size() == 1);
    CHECK(cfg.occupations[0] == Occupation{1, 1, 1.0});

    // Species-specific keys override shared ones regardless of order.
    const auto o = parse_config("[run]\nvariant=two\n[scaled]\nu_eg_e = 20\nu_eg = 15\nu = 30\n"
                                "[occupations]\nlist=\"1,1,0\"\n");
    CHECK(o.resolved_params().u_eg_g == 15.0);
    CHECK(o.resolved_params().u_eg_e == 20.0);

    CHECK(parse_occupation_list("1,1,1; 2,0,1").size() == 2);
    CHECK_THROWS_AS(parse_occupation_list("1,1"), ValidationError);
    CHECK_THROWS_AS(parse_occupation_list("1,-1,0"), ValidationError);
}

TEST_CASE("config errors name the line") {
    CHECK(line_of("[run]\nvariant = cavity\n[bogus]\n") == 3);
    CHECK(line_of("[run]\nvariant = cavity\n[scaled]\nu = 1\nfoo = 2\n") == 5);
    CHECK(line_of("[scaled]\nu = 1\nu = 2\n") == 3);
    CHECK(line_of("[scaled]\nu = abc\n") == 2);
    CHECK(line_of("u = 1\n") == 1);
    CHECK(line_of("[scaled]\nnot an entry\n") == 2);
    CHECK_THROWS_AS(parse_config("[run]\nvariant = quantum\n"), ConfigError);
}

TEST_CASE("physical block rules") {
    const std::string phys = "[run]\nvariant = cavity\n[physical]\nJ_g = 1\nJ_e = 1\nU_g = 250\n"
                             "U_e = 250\nU_eg = 15\nf_sq = 25\neps_c = 100\neps_e = 100\nz = 1\n"
                             "[occupations]\nlist = \"1,1,1\"\n";
    CHECK_THROWS_AS(parse_config(phys), ConfigError);
    ParseOptions allow;
    allow.allow_physical = true;
    const auto cfg = parse_config(phys, allow);
    CHECK(cfg.resolved_params().u_g == 250.0);
    CHECK(cfg.resolved_params().F == 25.0);

    const std::string both = phys + "[scaled]\nu = 3\n";
    CHECK_THROWS_AS(parse_config(both, allow), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\npreset = fig7\n" + phys.substr(phys.find("[physical]")), allow),
                    ConfigError);
}

TEST_CASE("a preset expands to its parameters") {
    const auto cfg = parse_config("[run]\npreset = fig7\n");
    REQUIRE(cfg.variant.has_value());
    CHECK(*cfg.variant == ModelVariant::cavity);
    CHECK(cfg.resolved_params().F == 25.0);
    CHECK(cfg.resolved_params().u_eg_g == 15.0);
    REQUIRE(cfg.occupations.size() == 1);
    CHECK(cfg.occupations[0] == Occupation{1, 1, 1.0});

    const auto over = parse_config("[run]\npreset = fig7\n[scaled]\nF = 10\n");
    CHECK(over.resolved_params().F == 10.0);
    CHECK(over.resolved_params().u_eg_g == 15.0);
    CHECK_THROWS_AS(parse_config("[run]\npreset = fig99\n"), ValidationError);
}

TEST_CASE("execute produces the fig7 windows") {
    CliOptions o;
    o.command = "cavity";
    o.config_text = kFig7Config;
    const auto r = execute(o);
    REQUIRE(r.exit_code == kExitOk);
    const auto* f = find_file(r, "windows.csv");
    REQUIRE(f != nullptr);
    CHECK(f->content.rfind("# schema_version=1\n", 0) == 0);
    CHECK(f->content.find("\nvariant,species,n_g,n_e,n_c,axis_name,axis_value,mu_minus,mu_plus,present\n") !=
          std::string::npos);
    CHECK(f->content.find("cavity,ground,1,1,1,u,250,165,240,true\n") != std::string::npos);
    CHECK(f->content.find("cavity,excited,1,1,1,u,250,84.0983005625,195.901699437,true\n") !=
          std::string::npos);

    // Absent windows keep their row.
    o.u = 100.0;
    const auto absent = execute(o);
    REQUIRE(absent.exit_code == kExitOk);
    CHECK(find_file(absent, "windows.csv")->content.find("cavity,ground,1,1,1,u,100,,,false\n") !=
          std::string::npos);

    o.format = "json";
    const auto j = execute(o);
    REQUIRE(j.exit_code == kExitOk);
    const auto parsed = nlohmann::json::parse(find_file(j, "windows.json")->content);
    CHECK(parsed["header"]["schema_version"] == 1);
    CHECK(parsed["windows"].size() == 2);
}

TEST_CASE("exit codes") {
    CliOptions bad;
    bad.command = "cavity";
    bad.config_text = "[scaled]\nu = \n";
    CHECK(execute(bad).exit_code == kExitValidation);

    CliOptions unequal;
    unequal.command = "cavity";
    std::string text = kFig7Config;
    text.insert(text.find("[occupations]"), "hopping_ratio = 2\n");
    unequal.config_text = text;
    const auto r = execute(unequal);
    CHECK(r.exit_code != kExitOk);
    CHECK(r.files.empty());

    CliOptions oracle;
    oracle.command = "oracle";
    oracle.seeds = 20;
    const auto ok = execute(oracle);
    CHECK(ok.exit_code == kExitOk);
    REQUIRE(find_file(ok, "oracle_report.txt") != nullptr);

    CliOptions unknown;
    unknown.command = "figure";
    unknown.figure_id = "fig2";
    CHECK(execute(unknown).exit_code == kExitValidation);

    CliOptions single;
    single.command = "single";
    single.n = 1;
    single.u = 1.0;
    const auto s = execute(single);
    CHECK(s.exit_code == kExitOk);
    CHECK(find_file(s, "windows.csv")->content.find(",false\n") != std::string::npos);
    single.n = 0;
    CHECK(execute(single).exit_code == kExitValidation);
}

TEST_CASE("command-line tool writes byte-identical files") {
    const auto a = scratch("a");
    const auto b = scratch("b");
    REQUIRE(run_exe("figure fig7 --out " + a.string()) == 0);
    REQUIRE(run_exe("figure fig7 --out " + b.string()) == 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto other = b / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        CHECK(entry.path().extension() != ".tmp");
        ++compared;
    }
    CHECK(compared >= 3);
    const auto summary = slurp(a / "summary.json");
    CHECK(summary.find("165") != std::string::npos);
    CHECK(summary.find("84.0983005625") != std::string::npos);
    const auto grid = slurp(a / "grid_1_1_1.csv");
    CHECK(grid.find("\naxis1,axis2,label\n") != std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("command-line tool exit codes and no partial output") {
    const auto dir = scratch("bad");
    CHECK(run_exe("figure nope --out " + dir.string()) == 1);
    CHECK_FALSE(fs::exists(dir));
    CHECK(run_exe("--no-such-flag") == 1);
    CHECK(run_exe("oracle --seeds 5 --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "oracle_report.txt"));
    fs::remove_all(dir);
}

TEST_CASE("number formatting") {
    CHECK(fmt12(-0.0) == "0");
    CHECK(fmt12(0.1 + 0.2) == "0.3");
    CHECK(fmt12(165.0) == "165");
    CHECK(fmt12(1e-13) == "1e-13");
    CHECK(round12(0.1 + 0.2) == 0.3);
}
