#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int status;
    std::string out;
};

// Runs the CLI with stderr discarded.
Run run(const std::string& args) {
    const std::string cmd = std::string(SELBERG_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string column(const std::string& csv_row, int k) {
    std::size_t pos = 0;
    for (int i = 0; i < k; ++i) pos = csv_row.find(',', pos) + 1;
    return csv_row.substr(pos, csv_row.find_first_of(",\n", pos) - pos);
}

}  // namespace

TEST_CASE("check poisson passes and reports the field names") {
    const auto r = run("check poisson --beta 1");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("formula,parameters,spectral,spectral_im,geometric,geometric_im,abs_diff,rel_diff,tail_bound\n", 0) == 0);
    const std::string row = r.out.substr(r.out.find('\n') + 1);
    CHECK(std::stod(column(row, 6)) < 1e-10);
}

TEST_CASE("length spectrum below the second length has one row") {
    const auto r = run("length-spectrum --group groups/octagon --max-length 3.1");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("length,multiplicity\n", 0) == 0);
    const std::string row = r.out.substr(r.out.find('\n') + 1);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
    CHECK(std::abs(std::stod(column(row, 0)) - 2 * std::acosh(1 + std::sqrt(2.0))) < 1e-9);
    CHECK(column(row, 1) == "24");
}

TEST_CASE("exit codes") {
    CHECK(run("zeta --group groups/does-not-exist --s 2 --max-length 8").status == 2);
    CHECK(run("check").status == 2);
    CHECK(run("check poisson --beta nope").status == 2);
    CHECK(run("check poisson --format xml").status == 2);
    CHECK(run("zeta --group groups/octagon --s 0.5 --max-length 4").status == 2);
    CHECK(run("trace-surface --group groups/octagon --max-length 6").status == 1);
    CHECK(run("check poisson --beta 1 --tol 0").status == 1);
    CHECK(run("--help").status == 0);
}

TEST_CASE("output is byte-identical across thread counts") {
    for (const char* cmd : {"length-spectrum --group groups/octagon --max-length 7.5",
                            "zeta --group groups/octagon --s 2 --max-length 7",
                            "geodesic-count --group groups/octagon"}) {
        const auto a = run(std::string(cmd) + " --threads 1");
        const auto b = run(std::string(cmd) + " --threads 4");
        CHECK(a.status == 0);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("structured text output") {
    const auto r = run("check cylinder --ell 2 --beta 1 --format text");
    CHECK(r.status == 0);
    CHECK(r.out.front() == '[');
    CHECK(r.out.find("\"formula\": \"cylinder\"") != std::string::npos);
}
