#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "netblow/cli.hpp"
#include "netblow/config.hpp"

using namespace netblow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("netblow_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
};

const char* kP3Graph =
    "vertex a boundary\nvertex b interior\nvertex c boundary\n"
    "edge a b 1\nedge b c 1\n";

const char* kP4Graph =
    "vertex a boundary\nvertex b interior\nvertex c interior\nvertex d boundary\n"
    "edge a b 1\nedge b c 1\nedge c d 1\n";

}  // namespace

TEST_CASE("config: parsing and typed access") {
    auto cfg = RunConfig::parse(
        "# a run\n"
        "network = g.txt\n"
        "f = power:2\n"
        "alpha = 3\n"
        "gamma = 0.1\n"
        "u0 = const:4\n"
        "t_end = 2.5   # horizon\n",
        "test");
    REQUIRE(cfg.network_path() == "g.txt");
    REQUIRE(cfg.alpha() == 3.0);
    REQUIRE(cfg.gamma() == 0.1);
    REQUIRE_FALSE(cfg.beta().has_value());
    REQUIRE(cfg.init_mode() == RunConfig::InitMode::Const);
    REQUIRE(cfg.init_const() == 4.0);
    REQUIRE(cfg.solve_config().t_end == 2.5);
    REQUIRE(cfg.solve_config().rel_tol == 1e-8);  // default
    REQUIRE(cfg.u_max() == 100.0);                // default

    REQUIRE_THROWS_WITH(RunConfig::parse("horizon = 2\n", "test"),
                        Catch::Matchers::ContainsSubstring("unknown key"));
    REQUIRE_THROWS_WITH(RunConfig::parse("alpha = 3\nalpha = 4\n", "test"),
                        Catch::Matchers::ContainsSubstring("duplicate key"));
    REQUIRE_THROWS_WITH(RunConfig::parse("alpha\n", "test"),
                        Catch::Matchers::ContainsSubstring("key = value"));
    REQUIRE_THROWS_AS(RunConfig::parse("alpha = x\n", "test").alpha(), Error);
    REQUIRE_THROWS_AS(RunConfig::parse("f = power:2\n", "test").alpha(), Error);

    auto list = RunConfig::parse("u0 = list:b=4,c=0.5\n", "test");
    REQUIRE(list.init_mode() == RunConfig::InitMode::List);
    REQUIRE(list.init_list().size() == 2);
    REQUIRE(RunConfig::parse("u0 = auto\n", "test").init_mode() == RunConfig::InitMode::Auto);
    REQUIRE_THROWS_AS(RunConfig::parse("u0 = whatever\n", "test").init_mode(), Error);
}

TEST_CASE("config: explicit initial data against a network") {
    Network p4 = Network::parse(kP4Graph);
    auto cfg = RunConfig::parse("u0 = list:b=1.5\n", "test");
    NodeField u = cfg.explicit_initial_data(p4);
    REQUIRE(u[p4.index_of("b")] == 1.5);
    REQUIRE(u[p4.index_of("c")] == 0.0);

    auto bad = RunConfig::parse("u0 = list:a=1\n", "test");
    REQUIRE_THROWS_WITH(bad.explicit_initial_data(p4),
                        Catch::Matchers::ContainsSubstring("boundary"));

    auto cst = RunConfig::parse("u0 = const:2\n", "test");
    NodeField uc = cst.explicit_initial_data(p4);
    REQUIRE(uc[p4.index_of("b")] == 2.0);
    REQUIRE(uc[p4.index_of("a")] == 0.0);
}

TEST_CASE("config: load reports missing files with their path") {
    REQUIRE_THROWS_WITH(RunConfig::load("/no/such/config.cfg"),
                        Catch::Matchers::ContainsSubstring("/no/such/config.cfg"));
    TempDir dir;
    const std::string path = dir.file("run.cfg", "gamma = 0.25\n");
    REQUIRE(RunConfig::load(path).gamma() == 0.25);
}

TEST_CASE("config: NETBLOW_OUT overrides the output directory") {
    auto cfg = RunConfig::parse("out = run.csv\n", "test");
    ::unsetenv("NETBLOW_OUT");
    REQUIRE(cfg.out_path() == "run.csv");
    ::setenv("NETBLOW_OUT", "/tmp/netblow_outdir", 1);
    REQUIRE(cfg.out_path() == "/tmp/netblow_outdir/run.csv");
    auto abs = RunConfig::parse("out = /explicit/run.csv\n", "test");
    REQUIRE(abs.out_path() == "/explicit/run.csv");
    ::unsetenv("NETBLOW_OUT");
}

TEST_CASE("cmd_spectrum: P4 prints lambda0 = 1 and the phi0 table") {
    TempDir dir;
    const std::string graph = dir.file("p4.graph", kP4Graph);
    std::ostringstream out, err;
    REQUIRE(cmd_spectrum(graph, out, err) == 0);
    const std::string text = out.str();
    REQUIRE(text.find("# lambda0=1\n") != std::string::npos);
    REQUIRE(text.find("vertex,label,value") != std::string::npos);
    REQUIRE(text.find(",b,0.7071067811865") != std::string::npos);

    const std::string broken = dir.file("broken.graph", "vertex a interior\nedge a q 1\n");
    std::ostringstream out2, err2;
    REQUIRE(cmd_spectrum(broken, out2, err2) == 1);
    REQUIRE(err2.str().find("line 2") != std::string::npos);
}

TEST_CASE("cmd_check: verdicts are data, structural violations are errors") {
    TempDir dir;
    const std::string graph = dir.file("p3.graph", kP3Graph);
    const std::string cfg_text = "network = " + graph +
                                 "\nf = power:2\nalpha = 3\ngamma = 0.1\nu0 = const:4\n";
    std::ostringstream out, err;
    REQUIRE(cmd_check(RunConfig::parse(cfg_text, "cfg"), out, err) == 0);
    const std::string text = out.str();
    REQUIRE(text.find("condition_A,holds") != std::string::npos);
    REQUIRE(text.find("condition_A_analytic,holds") != std::string::npos);
    REQUIRE(text.find("beta_constraint,ok") != std::string::npos);
    REQUIRE(text.find("minorant,found") != std::string::npos);
    REQUIRE(text.find("osgood,converges") != std::string::npos);

    // a failing condition is still exit 0
    const std::string cfg_lin = "network = " + graph +
                                "\nf = linear:3\nalpha = 3\ngamma = 0.1\nu0 = const:4\n";
    std::ostringstream out2, err2;
    REQUIRE(cmd_check(RunConfig::parse(cfg_lin, "cfg"), out2, err2) == 0);
    REQUIRE(out2.str().find("condition_C,fails") != std::string::npos);
    REQUIRE(out2.str().find("condition_C_analytic,fails") != std::string::npos);
    REQUIRE(out2.str().find("osgood,diverges") != std::string::npos);

    // negative polynomial coefficient violates the f > 0 structure
    const std::string cfg_bad = "network = " + graph +
                                "\nf = poly:1,-1\nalpha = 3\ngamma = 0.1\nu0 = const:4\n";
    std::ostringstream out3, err3;
    REQUIRE(cmd_check(RunConfig::parse(cfg_bad, "cfg"), out3, err3) == 1);

    // pure diffusion: the Osgood probe is undefined but the report succeeds
    const std::string cfg_diff = "network = " + graph +
                                 "\nf = linear:0\nalpha = 3\ngamma = 0.1\nu0 = const:1\n";
    std::ostringstream out4, err4;
    REQUIRE(cmd_check(RunConfig::parse(cfg_diff, "cfg"), out4, err4) == 0);
    REQUIRE(out4.str().find("osgood,undefined") != std::string::npos);
}

TEST_CASE("cmd_find_initial: found and absent cases") {
    TempDir dir;
    const std::string graph = dir.file("p3.graph", kP3Graph);
    std::ostringstream out, err;
    const std::string found = "network = " + graph + "\nf = power:2\ngamma = 0.1\nu0 = auto\n";
    REQUIRE(cmd_find_initial(RunConfig::parse(found, "cfg"), out, err) == 0);
    REQUIRE(out.str().find("# result=found") != std::string::npos);
    REQUIRE(out.str().find("# J0=") != std::string::npos);

    std::ostringstream out2, err2;
    const std::string absent = "network = " + graph + "\nf = linear:1.8\ngamma = 0.1\nu0 = auto\n";
    REQUIRE(cmd_find_initial(RunConfig::parse(absent, "cfg"), out2, err2) == 0);
    REQUIRE(out2.str().find("# result=absent") != std::string::npos);
}

TEST_CASE("cmd_simulate: blow-up exits 2 with the bound check; decay exits 0") {
    TempDir dir;
    const std::string graph = dir.file("p3.graph", kP3Graph);
    const std::string csv = (dir.path / "traj.csv").string();
    const std::string blowup_cfg = "network = " + graph +
                                   "\nf = power:2\nalpha = 3\ngamma = 0.1\nu0 = const:4\n"
                                   "t_end = 20\nout = " + csv + "\n";
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(RunConfig::parse(blowup_cfg, "cfg"), out, err) == 2);
    const std::string text = out.str();
    REQUIRE(text.find("# outcome=blowup_detected") != std::string::npos);
    REQUIRE(text.find("# T_num_le_bound=true") != std::string::npos);
    REQUIRE(text.find("# J0=5.0333333") != std::string::npos);

    std::ifstream csv_in(csv);
    REQUIRE(csv_in.good());
    std::string header;
    std::getline(csv_in, header);
    REQUIRE(header == "t,a,b,c,sum_u2,J,I,Iprime,Iprimeprime,certificate_margin");
    std::string rest((std::istreambuf_iterator<char>(csv_in)),
                     std::istreambuf_iterator<char>());
    REQUIRE(rest.find("# outcome=blowup_detected") != std::string::npos);

    const std::string decay_cfg = "network = " + graph +
                                  "\nf = linear:1\nalpha = 3\ngamma = 0.1\nu0 = const:1\n"
                                  "t_end = 2\nout = " + (dir.path / "decay.csv").string() + "\n";
    std::ostringstream out2, err2;
    REQUIRE(cmd_simulate(RunConfig::parse(decay_cfg, "cfg"), out2, err2) == 0);
    REQUIRE(out2.str().find("# outcome=completed_horizon") != std::string::npos);

    // auto initial data that cannot qualify is a valid empty answer
    const std::string no_data_cfg = "network = " + graph +
                                    "\nf = linear:1\nalpha = 3\ngamma = 0.1\nu0 = auto\n"
                                    "out = " + (dir.path / "none.csv").string() + "\n";
    std::ostringstream out3, err3;
    REQUIRE(cmd_simulate(RunConfig::parse(no_data_cfg, "cfg"), out3, err3) == 0);
    REQUIRE(out3.str().find("no qualifying initial data") != std::string::npos);
}

TEST_CASE("cmd_simulate: trajectory bytes are deterministic") {
    TempDir dir;
    const std::string graph = dir.file("p3.graph", kP3Graph);
    auto run = [&](const std::string& name) {
        const std::string csv = (dir.path / name).string();
        const std::string cfg = "network = " + graph +
                                "\nf = power:2\nalpha = 3\ngamma = 0.1\nu0 = const:4\n"
                                "t_end = 20\nout = " + csv + "\n";
        std::ostringstream out, err;
        REQUIRE(cmd_simulate(RunConfig::parse(cfg, "cfg"), out, err) == 2);
        return read_file(csv);
    };
    REQUIRE(run("a.csv") == run("b.csv"));
}

TEST_CASE("cmd_verify: deterministic per seed, exit 0 when all suites pass") {
    auto cfg = RunConfig::parse("f = power:2\n", "cfg");
    std::ostringstream out1, err1, out2, err2;
    REQUIRE(cmd_verify(cfg, 25, 7, out1, err1) == 0);
    REQUIRE(cmd_verify(cfg, 25, 7, out2, err2) == 0);
    REQUIRE(out1.str() == out2.str());
    REQUIRE(out1.str().find("suite,trials,failures,worst_margin") != std::string::npos);
    REQUIRE(out1.str().find("pairing_identity,25,0,") != std::string::npos);
    REQUIRE(out1.str().find("# overall=pass") != std::string::npos);

    std::ostringstream out3, err3;
    REQUIRE(cmd_verify(cfg, 25, 11, out3, err3) == 0);
    REQUIRE(out1.str() != out3.str());  // seed matters
}
