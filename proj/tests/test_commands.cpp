#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "izeno/commands.hpp"
#include "izeno/self_energy.hpp"

using namespace izeno;

namespace {

// Data rows of a command's CSV output, header dropped.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    bool header = true;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

std::string body(const std::string& csv) {
    std::string out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

RunConfig small() {
    RunConfig c = default_config();
    c.gamma_scan.points = 6;
    c.gamma_scan.j_values = {1, 2, 3};
    c.spectrum.points = 51;
    c.multilevel.points = 6;
    return c;
}

}  // namespace

TEST_CASE("linspace") {
    CHECK(linspace(0.0, 1.0, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
}

TEST_CASE("gamma scan structure") {
    const auto r = rows(cmd_gamma_scan(small()));
    REQUIRE(r.size() == 18);
    for (const auto& row : r) {
        REQUIRE(row.size() == 6);
        const double b = std::stod(row[2]);
        if (row[0] == "1" && b < 1.0) {
            CHECK(std::stod(row[3]) == doctest::Approx(1.0));
            CHECK(std::stod(row[4]) == doctest::Approx(1.0).epsilon(1e-2));
        }
        if (b == 0.0)
            for (int k = 3; k < 6; ++k) CHECK(std::stod(row[static_cast<std::size_t>(k)]) == doctest::Approx(1.0));
        if (b == 1.0) CHECK(row[4] == "nan");
    }
}

TEST_CASE("output does not depend on the thread count") {
    RunConfig c = small();
    const std::string one = cmd_gamma_scan(c);
    c.threads = 2;
    CHECK(cmd_gamma_scan(c) == one);
    c.ladder.entries = {{0.5, 3.0}, {0.3, 5.0}};
    const std::string m2 = cmd_multilevel(c);
    c.threads = 1;
    CHECK(cmd_multilevel(c) == m2);
    CHECK(cmd_spectrum(c) == cmd_spectrum(c));
}

TEST_CASE("empty ladder reproduces gamma(B)") {
    RunConfig c = small();
    c.ladder.entries.clear();
    for (const auto& row : rows(cmd_multilevel(c))) {
        const double b = std::stod(row[0]);
        // The exact column uses the pure power law, the B* column the full form factor.
        CHECK(std::stod(row[1]) == doctest::Approx(gamma_ratio_closed_form(3, b)).epsilon(1e-12));
        CHECK(std::stod(row[4]) ==
              doctest::Approx(gamma_of_B(c.system, b) / golden_rule_gamma(c.system)).epsilon(1e-12));
        CHECK(row[5] == "0");
    }
}

TEST_CASE("dressed table") {
    const auto r = rows(cmd_dressed(small()));
    for (const auto& row : r) {
        CHECK(std::stod(row[6]) == doctest::Approx(std::stod(row[7])));
        CHECK(std::stod(row[3]) == doctest::Approx(2.0 * std::stod(row[1])));
    }
}

TEST_CASE("estimate-b at unit power") {
    RunConfig c = default_config();
    c.laser = lab::PowerDrive{1.0, 1.0, 1.0, 1.0};
    const auto r = rows(cmd_estimate_b(c));
    REQUIRE(r[0][0] == "B");
    const double B = std::stod(r[0][1]);
    CHECK(std::abs(B * B / 132.0 - 1.0) < 0.01);
}

TEST_CASE("spectrum header and columns") {
    const std::string out = cmd_spectrum(small());
    CHECK(out.find("# normalization_B = ") != std::string::npos);
    const auto r = rows(out);
    CHECK(r.size() == 51);
    CHECK(std::stod(r.front()[0]) == doctest::Approx(0.5));
}

TEST_CASE("short evolve run") {
    RunConfig c = small();
    c.evolve.modes = 300;
    c.evolve.t_final = 2.0;
    c.evolve.samples = 10;
    const std::string out = cmd_evolve(c);
    CHECK(out.find("# gamma_fit") == std::string::npos);
    const auto r = rows(out);
    REQUIRE(r.size() == 11);
    CHECK(std::stod(r[0][1]) == 1.0);
    CHECK(std::stod(r.back()[1]) < 1.0);
    CHECK(body(out) == body(cmd_evolve(c)));
}
