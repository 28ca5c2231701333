#include "r2ch/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace r2ch {

double periodic_peakon(double c, double x_center, double L, double x) {
    // Reduce x - xc into [-L/2, L/2); after the reduction the first branch
    // always applies, and it agrees with the second branch evaluated on the
    // unreduced argument.
    double d = std::fmod(x - x_center, L);
    if (d < -L / 2.0) d += L;
    if (d >= L / 2.0) d -= L;
    const double scale = c / std::cosh(L / 2.0);
    if (std::abs(d) <= L / 2.0) return scale * std::cosh(d);
    return scale * std::cosh(L - d);
}

double periodic_distance(double x, double y, double L) {
    double d = std::abs(x - y);
    d = std::fmod(d, L);
    return std::min(d, L - d);
}

State dam_break_init(double a, const PeriodicGrid& grid, double rho_background) {
    State s;
    s.t = 0.0;
    s.u = GridFunction(grid);
    // The tanh difference is grouped so it cancels exactly when a = 0.
    s.rho = GridFunction::sample(grid, [&](double x) {
        return rho_background + (std::tanh(x + a) - std::tanh(x - a));
    });
    s.m = apply_helmholtz(s.u);
    return s;
}

State three_peakon_init(const PeriodicGrid& grid, const std::array<double, 3>& c,
                        const std::array<double, 3>& xc) {
    const double L = grid.length();
    State s;
    s.t = 0.0;
    s.u = GridFunction::sample(grid, [&](double x) {
        return periodic_peakon(c[0], xc[0], L, x) + periodic_peakon(c[1], xc[1], L, x) +
               periodic_peakon(c[2], xc[2], L, x);
    });
    s.rho = GridFunction(grid);
    s.m = apply_helmholtz(s.u);
    return s;
}

State single_peakon_init(double x0, const PeriodicGrid& grid, double rho_background) {
    const double L = grid.length();
    State s;
    s.t = 0.0;
    // Periodic distance keeps the sampled profile continuous at the domain
    // seam; the raw |x - x0| would leave an O(e^{-L/2}) jump there.
    s.u = GridFunction::sample(
        grid, [&](double x) { return std::exp(-periodic_distance(x, x0, L)); });
    s.rho = GridFunction(grid, rho_background);
    s.m = apply_helmholtz(s.u);
    return s;
}

State piecewise_sinh_init(const PeriodicGrid& grid, double rho_background) {
    if (grid.xmin != 0.0 || grid.xmax != 1.0)
        throw std::invalid_argument("piecewise_sinh_init: grid domain must be [0, 1]");
    const double denom_outer = 2.0 * std::sinh(0.25);
    const double denom_inner = std::sinh(-0.5);
    State s;
    s.t = 0.0;
    // Branch intervals are closed exactly as printed: [0, 1/4], (1/4, 3/4], (3/4, 1).
    s.u = GridFunction::sample(grid, [&](double x) {
        if (x <= 0.25) return std::sinh(x) / denom_outer;
        if (x <= 0.75) return std::sinh(x - 0.5) / denom_inner;
        return std::sinh(x - 1.0) / denom_outer;
    });
    s.rho = GridFunction(grid, rho_background);
    s.m = apply_helmholtz(s.u);
    return s;
}

State two_peakon_init(double p1, double p2, double x1, double x2, const PeriodicGrid& grid,
                      double rho_background) {
    const double L = grid.length();
    State s;
    s.t = 0.0;
    s.u = GridFunction::sample(grid, [&](double x) {
        return p1 * std::exp(-periodic_distance(x, x1, L)) +
               p2 * std::exp(-periodic_distance(x, x2, L));
    });
    s.rho = GridFunction(grid, rho_background);
    s.m = apply_helmholtz(s.u);
    return s;
}

State build_initial_state(const ScenarioSpec& spec, const PeriodicGrid& grid) {
    spec.params.validate();
    switch (spec.kind) {
        case ScenarioKind::DamBreak:
            return dam_break_init(spec.a, grid, spec.rho_background);
        case ScenarioKind::ThreePeakonCH:
            return three_peakon_init(grid, spec.peakon_c, spec.peakon_x);
        case ScenarioKind::SinglePeakon:
            return single_peakon_init(spec.x0, grid, spec.rho_background);
        case ScenarioKind::PiecewiseSinh:
            return piecewise_sinh_init(grid, spec.rho_background);
        case ScenarioKind::TwoPeakon:
            return two_peakon_init(spec.p1, spec.p2, spec.x1, spec.x2, grid,
                                   spec.rho_background);
    }
    throw std::logic_error("build_initial_state: unhandled scenario kind");
}

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

Parameters params(double A, double mu, double sigma, double Omega) {
    Parameters p;
    p.A = A;
    p.mu = mu;
    p.sigma = sigma;
    p.Omega = Omega;
    return p;
}

SolverConfig solver_defaults(double tau, bool viscosity) {
    SolverConfig c;
    c.tau = tau;
    c.tol = 1e-12;
    c.max_iter = 200;
    c.viscosity_enabled = viscosity;
    c.epsilon = 1e-5;
    return c;
}

ScenarioSpec dam_break_spec(double xmin, double xmax, double a, const Parameters& p) {
    ScenarioSpec s;
    s.kind = ScenarioKind::DamBreak;
    s.xmin = xmin;
    s.xmax = xmax;
    s.a = a;
    s.params = p;
    s.rho_background = 1.0;
    return s;
}

Preset make(const std::string& name, const std::string& note, const ScenarioSpec& spec,
            int M, long N, double t_end, bool viscosity) {
    Preset pr;
    pr.name = name;
    pr.note = note;
    pr.scenario = spec;
    pr.M = M;
    pr.N = N;
    pr.t_end = t_end;
    pr.solver = solver_defaults(t_end / static_cast<double>(N), viscosity);
    return pr;
}

std::vector<Preset> build_catalog() {
    std::vector<Preset> cat;

    // Smooth dam-break parameter cases.
    const Parameters smoothI = params(0.0, 0.0, 1.0, 0.0);
    const Parameters smoothII = smoothI;
    const Parameters smoothIII = params(0.1, 0.1, 1.0, 73e-6);
    const Parameters smoothIV = params(1.0, 1.0, 1.0, 73e-6);
    const double twelve_pi = 12.0 * kPi;

    cat.push_back(make("smooth-I", "dam break, a=0.1 on [-6,6], no dispersion/rotation",
                       dam_break_spec(-6.0, 6.0, 0.1, smoothI), 100, 2000, 20.0, false));
    cat.push_back(make("smooth-II", "dam break, a=4 on [-12pi,12pi], no dispersion/rotation",
                       dam_break_spec(-twelve_pi, twelve_pi, 4.0, smoothII), 150, 400, 2.0,
                       false));
    cat.push_back(make("smooth-III", "dam break, a=0.1 on [-8,8], A=mu=0.1, Omega=73e-6",
                       dam_break_spec(-8.0, 8.0, 0.1, smoothIII), 100, 400, 1.0, false));
    cat.push_back(make("smooth-IV", "dam break, a=4 on [-12pi,12pi], A=mu=1, Omega=73e-6",
                       dam_break_spec(-twelve_pi, twelve_pi, 4.0, smoothIV), 170, 800, 2.0,
                       false));

    // Conservation-table resolutions for the same four cases.
    cat.push_back(make("smooth-I-table5", "conservation audit grid: h=0.06, tau=0.01",
                       dam_break_spec(-6.0, 6.0, 0.1, smoothI), 200, 1000, 10.0, false));
    cat.push_back(make("smooth-II-table5", "conservation audit grid: h~0.5, tau=0.005",
                       dam_break_spec(-twelve_pi, twelve_pi, 4.0, smoothII), 150, 2000, 10.0,
                       false));
    cat.push_back(make("smooth-III-table5", "conservation audit grid: h=0.16, tau=0.0025",
                       dam_break_spec(-8.0, 8.0, 0.1, smoothIII), 100, 2000, 5.0, false));
    cat.push_back(make("smooth-IV-table5", "conservation audit grid: h~0.45, tau=0.0025",
                       dam_break_spec(-twelve_pi, twelve_pi, 4.0, smoothIV), 170, 2000, 5.0,
                       false));

    // Nonsmooth parameter cases.
    const Parameters nsI = params(0.0, 0.0, 1.0, 0.0);
    const Parameters nsII = params(0.0, 0.0, 1.0, 0.1);
    const Parameters nsIII = params(1.0, 1.0, 1.0, 73e-6);

    {
        ScenarioSpec s;
        s.kind = ScenarioKind::ThreePeakonCH;
        s.xmin = 0.0;
        s.xmax = 30.0;
        s.params = nsI;
        s.rho_background = 0.0;
        cat.push_back(make("three-peakon", "CH reduction: three peakons on [0,30], h=30/2048",
                           s, 2048, 100000, 10.0, true));
    }

    auto single_peakon_spec = [&](const Parameters& p) {
        ScenarioSpec s;
        s.kind = ScenarioKind::SinglePeakon;
        s.xmin = 0.0;
        s.xmax = 20.0;
        s.x0 = 10.0;
        s.params = p;
        s.rho_background = 0.5;
        return s;
    };
    cat.push_back(make("single-peakon-I", "single peakon on [0,20], h=0.025, tau=0.0005",
                       single_peakon_spec(nsI), 800, 10000, 5.0, true));
    cat.push_back(make("single-peakon-III", "single peakon with A=mu=1, Omega=73e-6",
                       single_peakon_spec(nsIII), 800, 10000, 5.0, true));

    auto piecewise_spec = [&](const Parameters& p) {
        ScenarioSpec s;
        s.kind = ScenarioKind::PiecewiseSinh;
        s.xmin = 0.0;
        s.xmax = 1.0;
        s.params = p;
        s.rho_background = 1.5;
        return s;
    };
    cat.push_back(make("piecewise-I", "piecewise sinh on [0,1], h=0.002, tau=0.001",
                       piecewise_spec(nsI), 500, 3000, 3.0, true));
    cat.push_back(make("piecewise-II", "piecewise sinh with Omega=0.1, tau=0.0005",
                       piecewise_spec(nsII), 500, 6000, 3.0, true));
    cat.push_back(make("piecewise-I-coarse", "piecewise sinh at the coarser h=0.02 grid",
                       piecewise_spec(nsI), 50, 6000, 3.0, true));

    auto two_peakon_spec = [&](const Parameters& p) {
        ScenarioSpec s;
        s.kind = ScenarioKind::TwoPeakon;
        s.xmin = -20.0;
        s.xmax = 20.0;
        s.p1 = 1.0;
        s.p2 = -1.0;
        s.x1 = -5.0;
        s.x2 = 5.0;
        s.params = p;
        s.rho_background = 0.5;
        return s;
    };
    cat.push_back(make("two-peakon-I", "peakon anti-peakon on [-20,20], h=0.05, tau=0.0005",
                       two_peakon_spec(nsI), 800, 20000, 10.0, true));
    cat.push_back(make("two-peakon-III", "peakon anti-peakon with A=mu=1, Omega=73e-6",
                       two_peakon_spec(nsIII), 800, 20000, 10.0, true));

    // Aliases for the bare nonsmooth parameter cases.
    {
        Preset a = *std::find_if(cat.begin(), cat.end(),
                                 [](const Preset& p) { return p.name == "piecewise-I"; });
        a.name = "nonsmooth-I";
        a.note = "alias of piecewise-I";
        cat.push_back(a);
        Preset b = *std::find_if(cat.begin(), cat.end(),
                                 [](const Preset& p) { return p.name == "piecewise-II"; });
        b.name = "nonsmooth-II";
        b.note = "alias of piecewise-II";
        cat.push_back(b);
        Preset c = *std::find_if(cat.begin(), cat.end(), [](const Preset& p) {
            return p.name == "single-peakon-III";
        });
        c.name = "nonsmooth-III";
        c.note = "alias of single-peakon-III";
        cat.push_back(c);
    }

    // Third-order functional monitoring runs.
    cat.push_back(make("h-dambreak-I", "third-order functional monitor: dam break, h=0.5",
                       dam_break_spec(-6.0, 6.0, 0.1, smoothI), 24, 4000, 20.0, false));
    cat.push_back(make("h-dambreak-II", "third-order functional monitor: dam break, a=4",
                       dam_break_spec(-twelve_pi, twelve_pi, 4.0, smoothII), 150, 400, 2.0,
                       false));
    cat.push_back(make("h-piecewise-I", "third-order functional monitor: piecewise, h=0.2",
                       piecewise_spec(nsI), 5, 1200, 3.0, true));
    cat.push_back(make("h-two-peakon-I", "third-order functional monitor: two peakons, h=0.2",
                       two_peakon_spec(nsI), 200, 4000, 10.0, true));

    return cat;
}

}  // namespace

const std::vector<Preset>& preset_catalog() {
    static const std::vector<Preset> catalog = build_catalog();
    return catalog;
}

const Preset& preset(const std::string& name) {
    for (const Preset& p : preset_catalog())
        if (p.name == name) return p;
    throw UnknownPreset("unknown preset '" + name + "'; run the presets command for the catalog");
}

}  // namespace r2ch
