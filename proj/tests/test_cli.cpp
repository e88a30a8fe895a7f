#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string data(const std::string& name) { return std::string(TOA_DATA_DIR) + "/potentials/" + name; }

Run run(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / ("toa_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string("\"") + TOA_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("kernel lattice") {
    const auto r = run("kernel --potential " + data("quartic.json") + " --nmax 3 --u 0:1:0.1 --v 0:1:0.1");
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 122);
    CHECK(rows[0] == std::vector<std::string>{"u", "v", "T0", "T1", "T2", "T3", "sum"});
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double u = std::stod(rows[k][0]), v = std::stod(rows[k][1]);
        if (v == 0.0) {
            CHECK(std::stod(rows[k][2]) == u / 4.0);
            for (int n = 3; n <= 5; ++n) CHECK(std::stod(rows[k][static_cast<std::size_t>(n)]) == 0.0);
        }
    }
    CHECK(std::stod(rows.back()[0]) == 1.0);
    CHECK(std::stod(rows.back()[2]) == doctest::Approx(0.25629354214526930509).epsilon(1e-12));
}

TEST_CASE("kernel of a linear potential has no corrections") {
    const auto r = run("kernel --potential " + data("linear.json") + " --nmax 3 --u 0:1:0.25 --v 0:1:0.25");
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 26);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        for (int n = 3; n <= 5; ++n) CHECK(std::stod(rows[k][static_cast<std::size_t>(n)]) == 0.0);
    }
}

TEST_CASE("output is byte identical across runs") {
    const std::string args = "kernel --potential " + data("quartic.json") + " --nmax 2 --u -1:1:0.5 --v 0:1:0.5";
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("wigner rows") {
    const auto f = run("wigner --potential " + data("free.json") + " --nmax 1 --q -2 --p 0.5");
    REQUIRE(f.code == 0);
    auto rows = csv(f.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][2] == "tau_classical");
    CHECK(std::stod(rows[1][2]) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::stod(rows[1][3]) == doctest::Approx(4.0).epsilon(1e-14));

    const auto h = run("wigner --potential " + data("harmonic.json") + " --nmax 0 --q -1 --p 1");
    REQUIRE(h.code == 0);
    rows = csv(h.out);
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.785398163397448).epsilon(1e-12));

    const auto q = run("wigner --potential " + data("quartic.json") + " --nmax 2 --q -1 --p 10 --format json");
    REQUIRE(q.code == 0);
    const auto doc = nlohmann::json::parse(q.out);
    const auto row = doc["rows"][0];
    CHECK(row[2].get<double>() == doctest::Approx(row[4].get<double>()).epsilon(1e-10));
    CHECK(row[5].get<double>() == doctest::Approx(0.000018793467054884340219).epsilon(1e-10));
    CHECK(row[7].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(row[8].get<double>() == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("operator matrix and expectation") {
    const auto r = run("operator --potential " + data("free.json") + " --nmax 0 --L 1 --N 4");
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == std::vector<std::string>{"i", "j", "re", "im"});
    CHECK(std::stod(rows[2][3]) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));

    const fs::path dir = fs::temp_directory_path() / ("toa_cli_psi_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path psi = dir / "psi.csv";
    {
        std::ofstream f(psi);
        f << "q,re,im\n";
        for (int k = -200; k <= 200; ++k) {
            const double q = 0.01 * k;
            const double g = std::exp(-q * q / 0.08);
            f << q << ',' << g << ",0\n";
        }
    }
    const auto missing = run("operator --potential " + data("quartic.json") + " --L 1 --N 20 --psi " + psi.string());
    CHECK(missing.code == 2);
    const auto e = run("operator --potential " + data("quartic.json") + " --L 1 --N 20 --format json --psi " +
                       psi.string());
    REQUIRE(e.code == 0);
    const auto doc = nlohmann::json::parse(e.out);
    CHECK(doc["entries"].size() == 400);
    CHECK(std::abs(doc["expectation"]["value"].get<double>()) < 1e-14);
    CHECK(doc["expectation"]["hermiticity_defect"].get<double>() <= 1e-14);
}

TEST_CASE("verify filters and reports") {
    const auto r = run("verify --only tke-residual");
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["checks"].size() == 1);
    const auto& c = doc["checks"][0];
    CHECK(c["name"] == "tke-residual");
    for (const char* key : {"measured", "expected", "tol", "passed"}) CHECK(c.contains(key));
    CHECK(doc["passed"].get<bool>());
    CHECK(r.err.find("PASS tke-residual") != std::string::npos);
}

TEST_CASE("exit codes and error json") {
    const auto bad_flag = run("kernel --potential " + data("quartic.json") + " --format xml");
    CHECK(bad_flag.code == 2);
    const auto missing = run("kernel --potential /nonexistent/potential.json");
    CHECK(missing.code == 2);
    CHECK(nlohmann::json::parse(missing.err)["error"] == "InvalidArgument");
    const auto bad_range = run("kernel --potential " + data("quartic.json") + " --u 1:0:0.1");
    CHECK(bad_range.code == 2);
    const auto bad_check = run("verify --only no-such-check");
    CHECK(bad_check.code == 2);
    const fs::path strong = fs::temp_directory_path() / ("toa_cli_strong_" + std::to_string(::getpid()) + ".json");
    std::ofstream(strong) << R"({"coeffs":[0,0,0,1e12]})";
    const auto overflow = run("kernel --potential " + strong.string() + " --nmax 0 --u 0:2:1 --v 0:2:1");
    CHECK(overflow.code == 3);
    const auto err = nlohmann::json::parse(overflow.err);
    CHECK(err["error"] == "NonConvergence");
    CHECK(err.contains("message"));
}
