// Black-box tests of the installed CLI binary (path injected by CMake).
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, bool raw_command = false) {
    static int counter = 0;
    const std::string base = "/tmp/stj_cli_test_" + std::to_string(counter++);
    const std::string out_path = base + ".out";
    const std::string err_path = base + ".err";
    const std::string cmd = (raw_command ? args : std::string(STJ_CLI_PATH) + " " + args) + " >" +
                            out_path + " 2>" + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

} // namespace

TEST_CASE("constant prints the closed-form value") {
    const RunResult r = run_cli("constant --f t --g t --a 0 --b 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "0.5\n");
}

TEST_CASE("equalize emits the breakpoint CSV") {
    const RunResult r = run_cli("equalize --w 1 --h 1 --a 0 --b 1 --n 4");
    CHECK(r.exit_code == 0);

    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "i,t");
    int i = 0;
    for (std::string line; std::getline(in, line); ++i) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stoi(line.substr(0, comma)) == i);
        CHECK(std::stod(line.substr(comma + 1)) == doctest::Approx(0.25 * i).epsilon(1e-12));
    }
    CHECK(i == 5);
    CHECK(r.err.find("J = 0.25") != std::string::npos);
    CHECK(r.err.find("converged = yes") != std::string::npos);
}

TEST_CASE("equalize accepts the fixed-point method") {
    const RunResult r =
        run_cli("equalize --w \"sqrt(2*t)\" --h 1 --a 0 --b 1 --n 2 --method fixed-point");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.56984029") != std::string::npos);
}

TEST_CASE("optimize reports the partition and the gap") {
    const RunResult r = run_cli("optimize --f t --g t --a 0 --b 1 --n 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 4) == "i,t\n");
    CHECK(r.err.find("gap = 0.125") != std::string::npos);
    CHECK(r.err.find("method = equalized-init local search") != std::string::npos);

    const RunResult dp = run_cli("optimize --f t --g t --a 0 --b 1 --n 2 --grid 101");
    CHECK(dp.exit_code == 0);
    CHECK(dp.err.find("method = grid DP oracle") != std::string::npos);
}

TEST_CASE("rate produces the documented CSV header and preset constant") {
    const RunResult r = run_cli("rate --preset quad-linear --n 4,8 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 26) == "n,gap,n_gap,C,extrapolated");
    CHECK(r.out.find("0.4444444444444") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical CSV") {
    const std::string args = "rate --preset quad-linear --seed 1 --n 2,4,8";
    const RunResult first = run_cli(args);
    const RunResult second = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(second.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(!first.out.empty());
}

TEST_CASE("the thread cap does not change the bytes") {
    const std::string args = "rate --preset sin-linear --n 2,4,8,16";
    const RunResult serial = run_cli("env STIELTJES_THREADS=1 " + std::string(STJ_CLI_PATH) +
                                             " " + args,
                                     true);
    const RunResult wide = run_cli("env STIELTJES_THREADS=4 " + std::string(STJ_CLI_PATH) + " " +
                                           args,
                                   true);
    CHECK(serial.exit_code == 0);
    CHECK(wide.exit_code == 0);
    CHECK(serial.out == wide.out);
}

TEST_CASE("rate accepts explicit expressions") {
    const RunResult r = run_cli("rate --f \"t^2\" --g t --a 0 --b 1 --n 4,8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.4444444444444") != std::string::npos);
}

TEST_CASE("an exhausted iteration budget exits 3") {
    const RunResult r = run_cli(
        "equalize --w \"sqrt(2*t)\" --h 1 --a 0 --b 1 --n 8 --method fixed-point --max-iter 2");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("converged = no") != std::string::npos);
}

TEST_CASE("--out writes the same bytes to a file") {
    const std::string path = "/tmp/stj_cli_out.csv";
    const RunResult direct = run_cli("rate --preset linear-linear --n 1,2");
    const RunResult filed = run_cli("rate --preset linear-linear --n 1,2 --out " + path);
    CHECK(filed.exit_code == 0);
    CHECK(slurp(path) == direct.out);
    std::remove(path.c_str());
}

TEST_CASE("check passes on good pairs and fails validation on bad ones") {
    const RunResult good = run_cli("check --f t --g t --a 0 --b 1 --seed 1 --cases 10");
    CHECK(good.exit_code == 0);
    CHECK(good.out.find("gap-bound: 10/10 passed") != std::string::npos);

    const RunResult sine = run_cli("check --preset sin-linear --seed 7 --cases 5");
    CHECK(sine.exit_code == 0);

    // g' < 0 violates the pair contract
    const RunResult bad = run_cli("check --f t --g \"0 - t\" --a 0 --b 1 --seed 1");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("validation") != std::string::npos);
}

TEST_CASE("validation and usage errors exit 2") {
    CHECK(run_cli("constant --f \"t^\" --g t --a 0 --b 1").exit_code == 2);
    CHECK(run_cli("constant --f t --g t --a 1 --b 0").exit_code == 2);
    CHECK(run_cli("rate --preset no-such-preset").exit_code == 2);
    CHECK(run_cli("optimize --f t --g t --a 0 --b 1 --n 0").exit_code == 2);
    CHECK(run_cli("optimize --f t --g t --a 0 --b 1 --n 2,4").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("help is available") {
    const RunResult r = run_cli("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("equalize") != std::string::npos);
    CHECK(r.out.find("rate") != std::string::npos);
}
