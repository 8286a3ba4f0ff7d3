#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "rabi/oracle.hpp"

using namespace rabi;
using namespace rabi::oracle;

TEST_CASE("2x2 off-diagonal matrix has eigenvalues ±Δ") {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, 0.7, 0.7, 0.0;
    const auto ev = jacobi_eigenvalues(m);
    CHECK(ev[0] == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("diagonal matrix returns its sorted diagonal") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m.diagonal() << 3.0, -1.0, 2.5, 0.0;
    const auto ev = jacobi_eigenvalues(m);
    CHECK(ev == std::vector<double>{-1.0, 0.0, 2.5, 3.0});
}

TEST_CASE("hamiltonian assembly is symmetric with the expected elements") {
    const ModelParams p{1.0, 0.4, 0.7, 0.25};
    const auto h = build_hamiltonian(p, 5);
    CHECK(h.matrix.rows() == 12);
    CHECK((h.matrix - h.matrix.transpose()).norm() == 0.0);
    // |n=2, s=+1⟩ diagonal and its couplings
    CHECK(h.matrix(4, 4) == doctest::Approx(2.0 + 0.25));
    CHECK(h.matrix(4, 6) == doctest::Approx(0.4 * std::sqrt(3.0)));
    CHECK(h.matrix(4, 5) == doctest::Approx(0.7));
    CHECK(h.matrix(5, 5) == doctest::Approx(2.0 - 0.25));
}

TEST_CASE("g = 0 block-diagonal case reproduces the closed form") {
    const auto ev = lowest_eigenvalues({1.0, 0.0, 0.7, 0.0}, 4, 1);
    CHECK(ev[0] == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(ev[3] == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("Δ = 0 displaced oscillator: E = N omega - g²/omega ± ε") {
    const ModelParams p{1.0, 0.5, 0.0, 0.3};
    const auto ev = lowest_eigenvalues(p, 6, 60);
    int i = 0;
    for (int n = 0; n < 3; ++n)
        for (double s : {-0.3, 0.3})
            CHECK(ev[i++] == doctest::Approx(n - 0.25 + s).epsilon(1e-10));
}

TEST_CASE("M = 60 is truncation-converged against M = 80") {
    const ModelParams p{1.0, 0.4, 0.7, 0.25};
    const auto a = lowest_eigenvalues(p, 4, 60);
    const auto b = lowest_eigenvalues(p, 4, 80);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("eigenvalues invariant under ε -> -ε") {
    const auto a = lowest_eigenvalues({1.0, 0.6, 0.7, 0.4}, 8, 50);
    const auto b = lowest_eigenvalues({1.0, 0.6, 0.7, -0.4}, 8, 50);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("variational monotonicity: larger M never raises low eigenvalues") {
    const ModelParams p{1.0, 1.2, 1.1, 0.8};
    const auto a = lowest_eigenvalues(p, 6, 40);
    const auto b = lowest_eigenvalues(p, 6, 55);
    for (int i = 0; i < 6; ++i) CHECK(b[i] <= a[i] + 1e-10);
}

TEST_CASE("trace and Gershgorin checks") {
    const ModelParams p{1.0, 0.7, 0.9, 0.35};
    const auto h = build_hamiltonian(p, 30);
    const int dim = static_cast<int>(h.matrix.rows());
    const auto ev = jacobi_eigenvalues(h.matrix);

    double sum = 0.0;
    for (double e : ev) sum += e;
    CHECK(std::abs(sum - h.matrix.trace()) < 1e-8 * dim);

    // every eigenvalue inside the union of Gershgorin discs
    for (double e : ev) {
        bool inside = false;
        for (int i = 0; i < dim && !inside; ++i) {
            const double radius = h.matrix.row(i).lpNorm<1>() - std::abs(h.matrix(i, i));
            inside = std::abs(e - h.matrix(i, i)) <= radius + 1e-10;
        }
        CHECK(inside);
    }
}

TEST_CASE("reference fixture for the spectrum tests, M = 60") {
    // lowest 8 eigenvalues at (omega, g, delta, epsilon) = (1, 0.4, 0.7, 0.25),
    // frozen from this oracle
    const std::vector<double> frozen = {
        -0.82239711695120066, -0.045144578378087517, 0.729074088326498,
        0.97734096599612053,  1.6301252402651842,    2.0960141092467341,
        2.5463003589859308,   3.1717490009383376};
    const auto ev = lowest_eigenvalues({1.0, 0.4, 0.7, 0.25}, 8, 60);
    for (int i = 0; i < 8; ++i) CHECK(ev[i] == doctest::Approx(frozen[i]).epsilon(1e-10));
}

TEST_CASE("fixture CSV round trip") {
    const ModelParams p{1.0, 0.4, 0.7, 0.25};
    const auto ev = lowest_eigenvalues(p, 8, 60);
    std::vector<FixtureEntry> entries;
    for (int i = 0; i < 8; ++i)
        entries.push_back({p.omega, p.g, p.delta, p.epsilon, 60, i, ev[i]});

    const auto path =
        (std::filesystem::temp_directory_path() / "rabi_oracle_fixture.csv").string();
    write_fixture_csv(path, entries);
    const auto back = read_fixture_csv(path);
    REQUIRE(back.size() == entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        CHECK(back[i].energy == entries[i].energy);
        CHECK(back[i].g == entries[i].g);
        CHECK(back[i].level_index == entries[i].level_index);
    }
    std::filesystem::remove(path);
}
