// params.hpp — model parameters, series configuration and solver error types

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabi {

// ---------------------------------- Errors ----------------------------------

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation point is inside the guard radius of a series pole.
struct PoleProximity : SolverError {
    using SolverError::SolverError;
};

// g = 0 has no G-function representation; use the closed-form spectrum.
struct DegenerateCoupling : SolverError {
    using SolverError::SolverError;
};

struct NonConvergence : SolverError {
    using SolverError::SolverError;
};

struct BracketInvalid : SolverError {
    using SolverError::SolverError;
};

// Delta/omega sits on a crossing-count band boundary.
struct BoundaryValue : SolverError {
    using SolverError::SolverError;
};

struct InvalidParams : SolverError {
    using SolverError::SolverError;
};

// -------------------------------- Parameters --------------------------------

// Physical parameters of the driven Rabi hamiltonian
//   H = omega a†a + g σx (a† + a) + Δ σz + ε σx.
struct ModelParams {
    double omega{1.0};    // mode frequency, > 0
    double g{0.0};        // spin-boson coupling, >= 0
    double delta{0.0};    // level splitting Δ, >= 0 (spectrum depends on Δ²)
    double epsilon{0.0};  // bias ε, any sign

    void validate() const {
        if (!(std::isfinite(omega) && std::isfinite(g) && std::isfinite(delta) &&
              std::isfinite(epsilon)))
            throw InvalidParams("ModelParams: all fields must be finite");
        if (!(omega > 0.0)) throw InvalidParams("ModelParams: omega must be > 0");
        if (g < 0.0) throw InvalidParams("ModelParams: g must be >= 0");
        if (delta < 0.0) throw InvalidParams("ModelParams: delta must be >= 0");
    }

    ModelParams with_g(double g_new) const {
        ModelParams p = *this;
        p.g = g_new;
        return p;
    }
    ModelParams with_epsilon(double eps_new) const {
        ModelParams p = *this;
        p.epsilon = eps_new;
        return p;
    }
};

// Truncation policy for the K-coefficient series.
struct SeriesConfig {
    int max_terms{200};          // hard cap on the series index n
    double rel_tol{1e-14};       // relative truncation tolerance
    int consecutive_small{3};    // negligible terms required before stopping
    double pole_guard{1e-8};     // minimum |x - pole| in units of omega

    void validate() const {
        if (max_terms < 8) throw InvalidParams("SeriesConfig: max_terms must be >= 8");
        if (!(rel_tol > 0.0)) throw InvalidParams("SeriesConfig: rel_tol must be > 0");
        if (consecutive_small < 1)
            throw InvalidParams("SeriesConfig: consecutive_small must be >= 1");
        if (!(pole_guard > 0.0)) throw InvalidParams("SeriesConfig: pole_guard must be > 0");
    }

    SeriesConfig with_pole_guard(double guard) const {
        SeriesConfig c = *this;
        c.pole_guard = guard;
        return c;
    }
};

}  // namespace rabi
