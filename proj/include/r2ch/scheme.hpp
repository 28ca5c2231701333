#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "r2ch/grid.hpp"
#include "r2ch/operators.hpp"

namespace r2ch {

/// Physical constants of the system.
struct Parameters {
    double A = 0.0;      // linear dispersion
    double mu = 0.0;     // third-order dispersion
    double sigma = 1.0;  // convection weight; conservation holds for sigma = 1
    double Omega = 0.0;  // rotation speed, must lie in [0, 1/4)

    void validate() const {
        if (!(Omega >= 0.0 && Omega < 0.25))
            throw std::invalid_argument("Parameters: Omega must lie in [0, 1/4)");
    }

    friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// One accepted time level. m tracks apply_helmholtz(u) at every level.
struct State {
    double t = 0.0;
    GridFunction u;
    GridFunction rho;
    GridFunction m;
};

struct SolverConfig {
    double tau = 0.0;                // time step
    double tol = 1e-12;              // fixed-point stop on ||u^{*,l+1} - u^{*,l}||_inf
    int max_iter = 200;              // sweeps before declaring non-convergence
    bool viscosity_enabled = false;
    double epsilon = 1e-5;           // viscosity threshold
    bool residual_check = false;     // also require small scheme residuals at exit
    bool lopsided_rho_flux = false;  // test hook: first-order rho*rho_x stencil

    void validate() const {
        if (!(tau > 0.0)) throw std::invalid_argument("SolverConfig: tau must be positive");
        if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
        if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
        if (!(epsilon >= 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be >= 0");
    }

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Observability record for one accepted step.
struct StepReport {
    int iterations = 0;
    double final_increment = 0.0;  // last ||u^{*,l+1} - u^{*,l}||_inf
    double residual_m = 0.0;       // ||momentum residual||_inf at the accepted star state
    double residual_rho = 0.0;
    int viscosity_active_nodes = 0;  // fired u-indicators plus fired rho-indicators
};

/// Midpoint-level unknowns returned by the fixed-point solve.
struct StarState {
    GridFunction u;
    GridFunction rho;
    GridFunction m;
    StepReport report;
};

/// Fixed-point iteration exhausted max_iter or produced non-finite values.
/// Signals blow-up or a too-large time step; this code aborts the run.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& msg, double time, int iters)
        : std::runtime_error(msg), t(time), iterations(iters) {}
    double t;
    int iterations;
};

/// Threshold viscosity terms R^u, R^rho: the scaled second difference
/// w_{i+1} - 2 w_i + w_{i-1} over 2h wherever its magnitude reaches
/// epsilon * h, zero elsewhere.
std::pair<GridFunction, GridFunction> viscosity_terms(const GridFunction& ustar,
                                                      const GridFunction& rhostar,
                                                      double epsilon);

/// Residual of the discrete momentum equation at the star level, all terms
/// moved to the left-hand side; identically zero at the exact star solution.
GridFunction momentum_residual(const GridFunction& ustar, const GridFunction& rhostar,
                               const GridFunction& mstar, const State& prev,
                               const Parameters& p, const SolverConfig& cfg);

/// Residual of the discrete continuity equation at the star level.
GridFunction density_residual(const GridFunction& ustar, const GridFunction& rhostar,
                              const State& prev, const SolverConfig& cfg);

/// Solves the implicit star-variable system by Picard sweeps:
/// rho update from the continuity equation at the previous iterate, momentum
/// update next (already using the fresh rho), then u = B^{-1} m. Starts from
/// the previous time level and stops when the u-increment drops below tol
/// (and, with residual_check, when both scheme residuals are below 10 tol/tau).
StarState picard_solve(const State& prev, const Parameters& p, const SolverConfig& cfg,
                       const HelmholtzSolver& solver);

/// One full step: star solve, midpoint extrapolation w^{n+1} = 2 w^* - w^n,
/// and m^{n+1} recomputed as B u^{n+1} (equal to 2 m^* - m^n by linearity).
std::pair<State, StepReport> step(const State& prev, const Parameters& p,
                                  const SolverConfig& cfg, const HelmholtzSolver& solver);

using StateObserver = std::function<void(const State&, const StepReport&)>;

struct Trajectory {
    std::vector<State> states;        // every level when stored; else initial and final
    std::vector<StepReport> reports;  // one entry per step taken
};

/// Advances from initial.t to t_end in N = (t_end - initial.t)/tau steps.
/// t_end must be an integer number of steps away; backward stepping is not
/// supported. Observers see every accepted state, the initial one included.
Trajectory run(const State& initial, const Parameters& p, const SolverConfig& cfg,
               double t_end, const std::vector<StateObserver>& observers = {},
               bool store_all_levels = true);

}  // namespace r2ch
