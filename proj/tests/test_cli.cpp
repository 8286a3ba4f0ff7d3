// End-to-end checks of the rabi binary (path injected via RABI_CLI_PATH).

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(RABI_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

}  // namespace

TEST_CASE("exit code contract") {
    CHECK(run_cli("spectrum --delta 0.7").exit_code == 0);
    CHECK(run_cli("").exit_code == 1);               // missing subcommand
    CHECK(run_cli("spectrum --bogus").exit_code == 1);
    CHECK(run_cli("gfun --delta 0.7").exit_code == 1);  // --x required
    // pole guard rejection surfaces as a computational failure
    CHECK(run_cli("spectrum --delta 1e-9 --g 0.5 --count 2").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("g = 0 spectrum emits the closed form") {
    const auto res = run_cli("spectrum --delta 0.7 --count 4");
    REQUIRE(res.exit_code == 0);
    const auto rows = data_lines(res.output);
    REQUIRE(rows.size() == 5);  // header + 4 levels
    CHECK(rows[0] == "level,energy,root_x,source");
    const double want[] = {-0.7, 0.3, 0.7, 1.3};
    for (int i = 0; i < 4; ++i) {
        int level;
        double energy;
        REQUIRE(std::sscanf(rows[i + 1].c_str(), "%d,%lf", &level, &energy) == 2);
        CHECK(level == i);
        CHECK(energy == doctest::Approx(want[i]).epsilon(1e-12));
        CHECK(rows[i + 1].find("closed_form_g0") != std::string::npos);
    }
}

TEST_CASE("empty sweep range is not an error") {
    const auto res = run_cli("spectrum --delta 0.7 --sweep g=1:0:0.1");
    CHECK(res.exit_code == 0);
    CHECK(data_lines(res.output).size() == 1);  // header only
}

TEST_CASE("range endpoint clamps instead of overshooting") {
    const auto res = run_cli("gfun --delta 0.7 --x 0.2:0.5:0.15");
    REQUIRE(res.exit_code == 0);
    const auto rows = data_lines(res.output);
    // 0.2, 0.35, 0.5 — the last step lands on the endpoint, no extra point
    REQUIRE(rows.size() == 4);
    CHECK(rows.back().rfind("0.5,", 0) == 0);
}

TEST_CASE("mirror planes produce identical cone inventories") {
    const auto plus = run_cli("cones --delta 0.7 --plane 1 --gmax 1.0 --sheets 2");
    const auto minus = run_cli("cones --delta 0.7 --plane -1 --gmax 1.0 --sheets 2");
    REQUIRE(plus.exit_code == 0);
    REQUIRE(minus.exit_code == 0);
    // identical except the signed plane index and its epsilon
    std::string flipped = minus.output;
    auto replace_all = [&](const std::string& from, const std::string& to) {
        for (std::string::size_type p = 0; (p = flipped.find(from, p)) != std::string::npos;
             p += to.size())
            flipped.replace(p, from.size(), to);
    };
    replace_all("\"plane_n\": -1", "\"plane_n\": 1");
    replace_all("\"epsilon\": -0.5", "\"epsilon\": 0.5");
    CHECK(flipped == plus.output);
}

TEST_CASE("reruns are byte-identical") {
    const std::string args = "landscape --delta 0.7 --g 0:0.6:0.2 --epsilon -0.4:0.4:0.2 "
                             "--sheets 3 --threads 4";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(data_lines(a.output).size() == 1 + 4 * 5 * 3);  // header + rows
}

TEST_CASE("--out writes the same bytes as stdout") {
    const auto path = (std::filesystem::temp_directory_path() / "rabi_cli_out.csv").string();
    const std::string args = "spectrum --delta 0.7 --g 0.4 --epsilon 0.25 --count 3";
    const auto direct = run_cli(args);
    const auto to_file = run_cli(args + " --out " + path);
    REQUIRE(direct.exit_code == 0);
    REQUIRE(to_file.exit_code == 0);
    CHECK(to_file.output.empty());
    std::ifstream f(path);
    std::stringstream file_bytes;
    file_bytes << f.rdbuf();
    CHECK(file_bytes.str() == direct.output);
    std::filesystem::remove(path);
}

TEST_CASE("config file supplies defaults, flags win on conflict") {
    const auto path = (std::filesystem::temp_directory_path() / "rabi_cli.cfg").string();
    {
        std::ofstream f(path);
        f << "delta=0.5\nepsilon=0.25\ncount=2\n";
    }
    const auto from_file = run_cli("spectrum --config " + path);
    REQUIRE(from_file.exit_code == 0);
    CHECK(from_file.output.find("delta=0.5") != std::string::npos);
    CHECK(from_file.output.find("epsilon=0.25") != std::string::npos);
    CHECK(data_lines(from_file.output).size() == 3);  // header + 2 levels

    const auto overridden = run_cli("spectrum --config " + path + " --delta 0.7");
    REQUIRE(overridden.exit_code == 0);
    CHECK(overridden.output.find("delta=0.69999999999999996") != std::string::npos);
    CHECK(overridden.output.find("epsilon=0.25") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("landscape JSON format round-trips through the library reader") {
    const auto res = run_cli("landscape --delta 0.7 --g 0:0.4:0.2 --epsilon 0:0.2:0.1 "
                             "--sheets 2 --format json");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("\"g_axis\"") != std::string::npos);
    CHECK(res.output.find("\"sheets\"") != std::string::npos);
}
