#pragma once

#include <array>
#include <string>
#include <vector>

#include "r2ch/scheme.hpp"

namespace r2ch {

enum class ScenarioKind {
    DamBreak,       // u = 0, rho = bg + tanh(x+a) - tanh(x-a)
    ThreePeakonCH,  // CH reduction: three cosh-profile peakons, rho = 0
    SinglePeakon,   // u = e^{-|x-x0|} over a constant rho background
    PiecewiseSinh,  // three sinh branches on [0,1], jump-discontinuous u
    TwoPeakon       // peakon anti-peakon pair over a constant rho background
};

/// Initial-data description plus the physical parameters of one experiment.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::DamBreak;
    double xmin = -6.0;
    double xmax = 6.0;
    Parameters params;
    double rho_background = 1.0;

    double a = 0.1;  // dam-break width parameter

    double x0 = 10.0;  // single-peakon center

    double p1 = 1.0, p2 = -1.0;  // two-peakon amplitudes
    double x1 = -5.0, x2 = 5.0;  // two-peakon centers

    std::array<double, 3> peakon_c{2.0, 1.0, 0.8};     // three-peakon amplitudes
    std::array<double, 3> peakon_x{-5.0, -3.0, -1.0};  // three-peakon centers

    double domain_length() const { return xmax - xmin; }

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Two-branch periodic cosh profile
///   phi(x) = c cosh(x - xc)/cosh(L/2)        for |x - xc| <= L/2,
///   phi(x) = c cosh(L - (x - xc))/cosh(L/2)  otherwise,
/// with x - xc first reduced modulo L into [-L/2, L/2). As written the
/// profile attains c at distance L/2 from xc and its minimum at xc.
double periodic_peakon(double c, double x_center, double L, double x);

/// Shortest distance between x and y on the circle of circumference L.
double periodic_distance(double x, double y, double L);

State dam_break_init(double a, const PeriodicGrid& grid, double rho_background = 1.0);
State three_peakon_init(const PeriodicGrid& grid,
                        const std::array<double, 3>& c = {2.0, 1.0, 0.8},
                        const std::array<double, 3>& xc = {-5.0, -3.0, -1.0});
State single_peakon_init(double x0, const PeriodicGrid& grid, double rho_background = 0.5);
State piecewise_sinh_init(const PeriodicGrid& grid, double rho_background = 1.5);
State two_peakon_init(double p1, double p2, double x1, double x2, const PeriodicGrid& grid,
                      double rho_background = 0.5);

/// Samples the scenario's initial data at t = 0; m = B u by construction.
State build_initial_state(const ScenarioSpec& spec, const PeriodicGrid& grid);

class UnknownPreset : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A named, fully populated experiment: scenario, solver settings, and the
/// grid/step resolution the benchmark is usually run at.
struct Preset {
    std::string name;
    std::string note;
    ScenarioSpec scenario;
    SolverConfig solver;
    int M = 0;
    long N = 0;
    double t_end = 0.0;
};

const std::vector<Preset>& preset_catalog();

/// Looks a preset up by name; throws UnknownPreset otherwise.
const Preset& preset(const std::string& name);

}  // namespace r2ch
