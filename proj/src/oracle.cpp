#include "rabi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rabi::oracle {

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, int M) {
    params.validate();
    if (M < 1) throw InvalidParams("build_hamiltonian: M must be >= 1");

    const int dim = 2 * (M + 1);
    TruncatedHamiltonian h{params, M, Eigen::MatrixXd::Zero(dim, dim)};

    // index(n, s): s = +1 -> 2n, s = -1 -> 2n + 1
    auto idx = [](int n, int s) { return 2 * n + (s > 0 ? 0 : 1); };

    for (int n = 0; n <= M; ++n) {
        for (int s : {+1, -1}) {
            const int i = idx(n, s);
            h.matrix(i, i) = params.omega * n + s * params.epsilon;
            if (n < M) {
                const int j = idx(n + 1, s);
                const double v = s * params.g * std::sqrt(n + 1.0);
                h.matrix(i, j) = v;
                h.matrix(j, i) = v;
            }
        }
        h.matrix(idx(n, +1), idx(n, -1)) = params.delta;
        h.matrix(idx(n, -1), idx(n, +1)) = params.delta;
    }
    return h;
}

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps, double off_tol) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw InvalidParams("jacobi_eigenvalues: matrix must be square");

    const double frob = a.norm();
    auto off_norm = [&]() {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
        return std::sqrt(2.0 * s);
    };

    bool converged = frob == 0.0 || off_norm() <= off_tol * frob;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- J^T A J with the Givens rotation in the (p, q) plane
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
        converged = off_norm() <= off_tol * frob;
    }
    if (!converged)
        throw NonConvergence("jacobi_eigenvalues: sweep limit exceeded");

    std::vector<double> evals(n);
    for (int i = 0; i < n; ++i) evals[i] = a(i, i);
    std::sort(evals.begin(), evals.end());
    return evals;
}

std::vector<double> eigenvalues(const TruncatedHamiltonian& h, int count) {
    const int dim = static_cast<int>(h.matrix.rows());
    if (count < 1 || count > dim)
        throw InvalidParams("eigenvalues: count must be in [1, 2(M+1)]");
    std::vector<double> all = jacobi_eigenvalues(h.matrix);
    all.resize(count);
    return all;
}

std::vector<double> lowest_eigenvalues(const ModelParams& params, int count, int M) {
    return eigenvalues(build_hamiltonian(params, M), count);
}

// ------------------------------ Fixture I/O ---------------------------------

void write_fixture_csv(const std::string& path, const std::vector<FixtureEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw SolverError("write_fixture_csv: cannot open " + path);
    out << "omega,g,delta,epsilon,M,level_index,energy\n";
    char buf[512];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g\n", e.omega, e.g,
                      e.delta, e.epsilon, e.M, e.level_index, e.energy);
        out << buf;
    }
    if (!out) throw SolverError("write_fixture_csv: write failed for " + path);
}

std::vector<FixtureEntry> read_fixture_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError("read_fixture_csv: cannot open " + path);
    std::vector<FixtureEntry> entries;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        FixtureEntry e{};
        std::istringstream ss(line);
        std::string tok;
        double* fields[4] = {&e.omega, &e.g, &e.delta, &e.epsilon};
        for (double* f : fields) {
            if (!std::getline(ss, tok, ',')) throw SolverError("read_fixture_csv: bad row");
            *f = std::stod(tok);
        }
        if (!std::getline(ss, tok, ',')) throw SolverError("read_fixture_csv: bad row");
        e.M = std::stoi(tok);
        if (!std::getline(ss, tok, ',')) throw SolverError("read_fixture_csv: bad row");
        e.level_index = std::stoi(tok);
        if (!std::getline(ss, tok, ',')) throw SolverError("read_fixture_csv: bad row");
        e.energy = std::stod(tok);
        entries.push_back(e);
    }
    return entries;
}

}  // namespace rabi::oracle
