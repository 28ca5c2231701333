#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "r2ch/diagnostics.hpp"
#include "r2ch/scheme.hpp"

using namespace r2ch;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

GridFunction from_vec(const PeriodicGrid& g, const std::vector<double>& v) {
    GridFunction w(g);
    for (int i = 0; i < g.M; ++i) w[i] = v[static_cast<std::size_t>(i)];
    return w;
}

State make_state(const PeriodicGrid& g, const std::vector<double>& u,
                 const std::vector<double>& rho) {
    State s;
    s.t = 0.0;
    s.u = from_vec(g, u);
    s.rho = from_vec(g, rho);
    s.m = apply_helmholtz(s.u);
    return s;
}

oracle::vec to_ld(const GridFunction& w) {
    return oracle::vec(w.values.begin(), w.values.end());
}

Parameters params(double A, double mu, double sigma, double Omega) {
    Parameters p;
    p.A = A;
    p.mu = mu;
    p.sigma = sigma;
    p.Omega = Omega;
    return p;
}

SolverConfig solver_cfg(double tau, double tol = 1e-12) {
    SolverConfig c;
    c.tau = tau;
    c.tol = tol;
    return c;
}

}  // namespace

TEST_CASE("viscosity terms: threshold behavior") {
    const int M = 32;
    const PeriodicGrid g(0.0, 16.0, M);  // h = 0.5

    SUBCASE("smooth field below the threshold produces exact zeros") {
        const GridFunction u = GridFunction::sample(
            g, [&](double x) { return 1e-9 * std::sin(2.0 * 3.14159265358979 * x / 16.0); });
        const GridFunction rho(g, 1.5);
        auto [Ru, Rr] = viscosity_terms(u, rho, 1e-3);
        for (double v : Ru.values) CHECK(v == 0.0);
        for (double v : Rr.values) CHECK(v == 0.0);
    }

    SUBCASE("a single kink fires only at its apex") {
        // Tent profile: second difference -2s at the apex, +s at each foot.
        const double s = 1e-3;
        const int apex = 16, K = 6;
        GridFunction u(g);
        for (int i = 0; i < M; ++i)
            u[i] = s * std::max(0, K - std::abs(i - apex));
        const GridFunction rho(g, 0.5);
        // Threshold between s and 2s: feet stay silent, apex fires.
        const double epsilon = 1.5 * s / g.h;
        auto [Ru, Rr] = viscosity_terms(u, rho, epsilon);
        for (int i = 0; i < M; ++i) {
            if (i == apex)
                CHECK(Ru[i] == doctest::Approx(-s / g.h).epsilon(1e-14));
            else
                CHECK(Ru[i] == 0.0);
            CHECK(Rr[i] == 0.0);
        }
    }

    SUBCASE("epsilon = 0 makes the indicator fire everywhere") {
        const GridFunction u = from_vec(g, oracle::uniform_random(M, 3u, 1.0));
        const GridFunction rho = from_vec(g, oracle::uniform_random(M, 4u, 1.0));
        auto [Ru, Rr] = viscosity_terms(u, rho, 0.0);
        for (int i = 0; i < M; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            CHECK(Ru[i] == (u[ip] - 2.0 * u[i] + u[im]) / (2.0 * g.h));
            CHECK(Rr[i] == (rho[ip] - 2.0 * rho[i] + rho[im]) / (2.0 * g.h));
        }
    }

    CHECK_THROWS_AS(viscosity_terms(GridFunction(g), GridFunction(g), -1.0),
                    std::invalid_argument);
}

TEST_CASE("residuals vanish on stationary data") {
    const PeriodicGrid g(0.0, 8.0, 16);
    const SolverConfig cfg = solver_cfg(0.01);

    SUBCASE("all-zero state") {
        const State z = make_state(g, std::vector<double>(16, 0.0),
                                   std::vector<double>(16, 0.0));
        const Parameters p = params(0.0, 0.0, 1.0, 0.0);
        for (double v : momentum_residual(z.u, z.rho, z.m, z, p, cfg).values)
            CHECK(v == 0.0);
        for (double v : density_residual(z.u, z.rho, z, cfg).values) CHECK(v == 0.0);
    }

    SUBCASE("constant velocity, zero height, sigma = 1, A = mu = 0") {
        const State c = make_state(g, std::vector<double>(16, 0.8),
                                   std::vector<double>(16, 0.0));
        const Parameters p = params(0.0, 0.0, 1.0, 0.0);
        for (double v : momentum_residual(c.u, c.rho, c.m, c, p, cfg).values)
            CHECK(v == 0.0);
    }

    SUBCASE("zero velocity freezes rho") {
        const State s = make_state(g, std::vector<double>(16, 0.0),
                                   oracle::uniform_random(16, 5u, 1.0));
        for (double v : density_residual(s.u, s.rho, s, cfg).values) CHECK(v == 0.0);
    }
}

TEST_CASE("residuals match the extended-precision term-by-term oracle") {
    const int M = 8;
    const PeriodicGrid g(-4.0, 4.0, M);  // h = 1
    const SolverConfig base = solver_cfg(0.05);

    const Parameters cases[] = {
        params(0.0, 0.0, 1.0, 0.0),     params(0.0, 0.0, 1.0, 0.0),
        params(0.1, 0.1, 1.0, 73e-6),   params(1.0, 1.0, 1.0, 73e-6),
        params(-0.3, 0.5, 0.7, 0.2),
    };
    unsigned seed = 100;
    for (const Parameters& p : cases) {
        const auto s0 = seed;
        seed += 4;
        const State prev = make_state(g, oracle::uniform_random(M, s0, 0.5),
                                      oracle::uniform_random(M, s0 + 1, 0.5));
        const GridFunction us = from_vec(g, oracle::uniform_random(M, s0 + 2, 0.5));
        const GridFunction rs = from_vec(g, oracle::uniform_random(M, s0 + 3, 0.5));
        const GridFunction ms = apply_helmholtz(us);
        for (bool visc : {false, true}) {
            SolverConfig cfg = base;
            cfg.viscosity_enabled = visc;
            cfg.epsilon = 1e-5;

            oracle::Params op{p.A, p.mu, p.sigma, p.Omega};
            const oracle::vec rm =
                oracle::momentum_residual(to_ld(us), to_ld(rs), to_ld(ms), to_ld(prev.m),
                                          g.h, cfg.tau, op, visc, cfg.epsilon);
            const oracle::vec rr = oracle::density_residual(
                to_ld(us), to_ld(rs), to_ld(prev.rho), g.h, cfg.tau, visc, cfg.epsilon);

            const GridFunction gm = momentum_residual(us, rs, ms, prev, p, cfg);
            const GridFunction gr = density_residual(us, rs, prev, cfg);
            double scale_m = 0.0, scale_r = 0.0;
            for (int i = 0; i < M; ++i) {
                scale_m = std::max(scale_m, std::abs(static_cast<double>(rm[i])));
                scale_r = std::max(scale_r, std::abs(static_cast<double>(rr[i])));
            }
            for (int i = 0; i < M; ++i) {
                CHECK(std::abs(gm[i] - static_cast<double>(rm[i])) <=
                      1e-12 * std::max(1.0, scale_m));
                CHECK(std::abs(gr[i] - static_cast<double>(rr[i])) <=
                      1e-12 * std::max(1.0, scale_r));
            }
        }
    }
}

TEST_CASE("picard solve: fixed points, tolerances, failure modes") {
    const int M = 16;
    const PeriodicGrid g(0.0, 8.0, M);
    const HelmholtzSolver solver(g);
    const Parameters pI = params(0.0, 0.0, 1.0, 0.0);

    SUBCASE("zero state is a one-sweep fixed point") {
        const State z =
            make_state(g, std::vector<double>(M, 0.0), std::vector<double>(M, 0.0));
        const StarState star = picard_solve(z, pI, solver_cfg(0.01), solver);
        CHECK(star.report.iterations == 1);
        CHECK(star.report.final_increment == 0.0);
        for (double v : star.u.values) CHECK(v == 0.0);
        for (double v : star.rho.values) CHECK(v == 0.0);
    }

    SUBCASE("constant velocity with zero height is stationary") {
        const State c =
            make_state(g, std::vector<double>(M, 0.8), std::vector<double>(M, 0.0));
        const StarState star = picard_solve(c, pI, solver_cfg(0.01), solver);
        CHECK(star.report.iterations == 1);
        for (int i = 0; i < M; ++i) CHECK(star.u[i] == doctest::Approx(0.8).epsilon(1e-14));
        for (double v : star.rho.values) CHECK(v == 0.0);
    }

    SUBCASE("a state with u = 0 and constant rho is stationary for any parameters") {
        const Parameters exotic = params(1.0, 1.0, 0.5, 0.2);
        State s = make_state(g, std::vector<double>(M, 0.0), std::vector<double>(M, 1.5));
        const auto [next, rep] = step(s, exotic, solver_cfg(0.05), solver);
        CHECK(rep.iterations == 1);
        CHECK(next.u.values == s.u.values);
        CHECK(next.rho.values == s.rho.values);
        CHECK(next.m.values == s.m.values);
    }

    SUBCASE("increment contract and residual check") {
        const State s = make_state(g, oracle::smooth_random(M, 8.0, 1u, 0.2),
                                   oracle::smooth_random(M, 8.0, 2u, 0.2));
        SolverConfig cfg = solver_cfg(0.02, 1e-13);
        cfg.residual_check = true;
        const StarState star = picard_solve(s, pI, cfg, solver);
        CHECK(star.report.final_increment <= cfg.tol);
        const double bound = 10.0 * cfg.tol / cfg.tau;
        CHECK(star.report.residual_m <= bound);
        CHECK(star.report.residual_rho <= bound);
    }

    SUBCASE("iteration cap raises NonConvergence") {
        const State s = make_state(g, oracle::smooth_random(M, 8.0, 3u, 0.3),
                                   oracle::smooth_random(M, 8.0, 4u, 0.3));
        SolverConfig cfg = solver_cfg(0.02);
        cfg.max_iter = 1;
        CHECK_THROWS_AS((void)picard_solve(s, pI, cfg, solver), NonConvergence);
    }

    SUBCASE("blow-up raises NonConvergence") {
        const State s = make_state(g, oracle::uniform_random(M, 5u, 1e4),
                                   oracle::uniform_random(M, 6u, 1e4));
        CHECK_THROWS_AS((void)picard_solve(s, pI, solver_cfg(1e6), solver), NonConvergence);
    }

    SUBCASE("repeated solves are bit-identical") {
        const State s = make_state(g, oracle::smooth_random(M, 8.0, 7u, 0.3),
                                   oracle::smooth_random(M, 8.0, 8u, 0.3));
        const StarState a = picard_solve(s, pI, solver_cfg(0.02), solver);
        const StarState b = picard_solve(s, pI, solver_cfg(0.02), solver);
        CHECK(a.u.values == b.u.values);
        CHECK(a.rho.values == b.rho.values);
        CHECK(a.m.values == b.m.values);
    }
}

TEST_CASE("step: extrapolation identities") {
    const int M = 32;
    const PeriodicGrid g(-6.0, 6.0, M);
    const HelmholtzSolver solver(g);
    const Parameters p = params(0.0, 0.0, 1.0, 0.0);
    const SolverConfig cfg = solver_cfg(0.01, 1e-14);

    const State prev = make_state(g, oracle::smooth_random(M, 12.0, 10u, 0.3),
                                  oracle::smooth_random(M, 12.0, 11u, 0.3));
    const StarState star = picard_solve(prev, p, cfg, solver);
    const auto [next, rep] = step(prev, p, cfg, solver);

    SUBCASE("m is recomputed from u and matches 2 m* - m^n by linearity") {
        CHECK(next.m.values == apply_helmholtz(next.u).values);
        double scale = std::max(1.0, max_abs(next.m));
        for (int i = 0; i < M; ++i)
            CHECK(std::abs(next.m[i] - (2.0 * star.m[i] - prev.m[i])) <= 1e-12 * scale);
    }

    SUBCASE("star values are the midpoints of the extrapolated level") {
        const double su = 2.0 * kEps * std::max(1.0, max_abs(next.u));
        const double sr = 2.0 * kEps * std::max(1.0, max_abs(next.rho));
        for (int i = 0; i < M; ++i) {
            CHECK(std::abs((prev.u[i] + next.u[i]) / 2.0 - star.u[i]) <= su);
            CHECK(std::abs((prev.rho[i] + next.rho[i]) / 2.0 - star.rho[i]) <= sr);
        }
    }

    SUBCASE("time advances by tau") { CHECK(next.t == doctest::Approx(prev.t + cfg.tau)); }
}

TEST_CASE("CH reduction: zero height stays exactly zero") {
    const int M = 64;
    const PeriodicGrid g(0.0, 30.0, M);
    const Parameters p = params(0.0, 0.0, 1.0, 0.0);
    SolverConfig cfg = solver_cfg(0.005);

    State s = make_state(g, oracle::smooth_random(M, 30.0, 20u, 0.5),
                         std::vector<double>(M, 0.0));
    const HelmholtzSolver solver(g);
    for (int n = 0; n < 5; ++n) {
        auto [next, rep] = step(s, p, cfg, solver);
        s = std::move(next);
        for (double v : s.rho.values) CHECK(v == 0.0);
    }
}

TEST_CASE("disabled viscosity is bit-identical to an unreachable threshold") {
    const int M = 48;
    const PeriodicGrid g(0.0, 20.0, M);
    const Parameters p = params(0.0, 0.0, 1.0, 0.0);
    const HelmholtzSolver solver(g);

    const State s = make_state(g, oracle::smooth_random(M, 20.0, 30u, 0.5),
                               oracle::smooth_random(M, 20.0, 31u, 0.3));
    SolverConfig off = solver_cfg(0.01);
    SolverConfig unreachable = off;
    unreachable.viscosity_enabled = true;
    unreachable.epsilon = 1e300;  // indicator can never fire

    const auto [a, ra] = step(s, p, off, solver);
    const auto [b, rb] = step(s, p, unreachable, solver);
    CHECK(a.u.values == b.u.values);
    CHECK(a.rho.values == b.rho.values);
    CHECK(a.m.values == b.m.values);
    CHECK(rb.viscosity_active_nodes == 0);
}

TEST_CASE("one-step oracle equivalence on a small grid") {
    const int M = 8;
    const PeriodicGrid g(-4.0, 4.0, M);
    const HelmholtzSolver solver(g);
    const Parameters p = params(0.1, 0.1, 1.0, 73e-6);

    const State prev = make_state(g, oracle::smooth_random(M, 8.0, 41u, 0.2),
                                  oracle::smooth_random(M, 8.0, 42u, 0.2));
    const StarState star = picard_solve(prev, p, solver_cfg(0.05, 1e-14), solver);

    const oracle::Star ref =
        oracle::picard(to_ld(prev.u), to_ld(prev.rho), to_ld(prev.m), g.h, 0.05L,
                       {0.1L, 0.1L, 1.0L, 73e-6L}, false, 1e-5L, 1e-16L, 500);
    for (int i = 0; i < M; ++i) {
        CHECK(std::abs(star.u[i] - static_cast<double>(ref.u[i])) <= 1e-12);
        CHECK(std::abs(star.rho[i] - static_cast<double>(ref.rho[i])) <= 1e-12);
        CHECK(std::abs(star.m[i] - static_cast<double>(ref.m[i])) <= 1e-12);
    }
}

TEST_CASE("per-step conservation with sigma = 1") {
    // Mass and momentum are exact for any parameters with sigma = 1 and the
    // viscosity off. The energy identity is exact only for Omega = 0: the
    // pairing of the rotation coupling against u* leaves the nonzero sum
    // Omega/(2h) sum_i u_i rho_i (F_i - F_{i-1}), so for Omega > 0 the energy
    // carries an O(Omega tau^2) per-step residual. Odd M exercises the
    // single-chain Helmholtz path.
    struct Setup {
        int M;
        Parameters p;
        unsigned seed;
    };
    const Setup setups[] = {
        {40, params(0.0, 0.0, 1.0, 0.0), 200u},
        {41, params(0.1, 0.1, 1.0, 73e-6), 201u},
        {48, params(1.0, 1.0, 1.0, 0.2), 202u},
    };
    for (const Setup& setup : setups) {
        CAPTURE(setup.M);
        const PeriodicGrid g(-6.0, 6.0, setup.M);
        SolverConfig cfg = solver_cfg(0.01, 1e-13);

        auto rho0 = oracle::smooth_random(setup.M, g.length(), setup.seed, 0.3);
        for (double& v : rho0) v += 1.0;
        State s = make_state(g, oracle::smooth_random(setup.M, g.length(), setup.seed + 50, 0.2),
                             rho0);

        const HelmholtzSolver solver(g);
        const Parameters& p = setup.p;
        double I1 = mass(s), I2 = momentum_total(s, p), E = energy(s, p);
        for (int n = 0; n < 20; ++n) {
            auto [next, rep] = step(s, p, cfg, solver);
            s = std::move(next);
            const double i1 = mass(s), i2 = momentum_total(s, p), e = energy(s, p);
            CHECK(std::abs(i1 - I1) <= 1e-10 * (1.0 + std::abs(I1)));
            CHECK(std::abs(i2 - I2) <= 1e-10 * (1.0 + std::abs(I2)));
            if (p.Omega == 0.0)
                CHECK(std::abs(e - E) <= 1e-10 * (1.0 + E));
            else
                CHECK(std::abs(e - E) <= 1e2 * p.Omega * cfg.tau * cfg.tau * (1.0 + E));
            I1 = i1;
            I2 = i2;
            E = e;
        }
    }
}

TEST_CASE("run driver: step counts, observers, validation") {
    const int M = 16;
    const PeriodicGrid g(0.0, 8.0, M);
    const Parameters p = params(0.0, 0.0, 1.0, 0.0);
    const SolverConfig cfg = solver_cfg(0.1);
    const State init = make_state(g, oracle::smooth_random(M, 8.0, 50u, 0.1),
                                  oracle::smooth_random(M, 8.0, 51u, 0.1));

    SUBCASE("N = 0 yields only the initial state") {
        const Trajectory traj = run(init, p, cfg, init.t);
        CHECK(traj.states.size() == 1);
        CHECK(traj.reports.empty());
    }

    SUBCASE("every accepted level reaches the observers") {
        int calls = 0;
        const Trajectory traj =
            run(init, p, cfg, 0.5, {[&](const State&, const StepReport&) { ++calls; }});
        CHECK(calls == 6);  // initial + 5 steps
        CHECK(traj.states.size() == 6);
        CHECK(traj.reports.size() == 5);
        CHECK(traj.states.back().t == doctest::Approx(0.5).epsilon(1e-15));
    }

    SUBCASE("store_all_levels = false keeps endpoints only") {
        const Trajectory traj = run(init, p, cfg, 0.5, {}, false);
        CHECK(traj.states.size() == 2);
    }

    SUBCASE("t_end off the step ladder is rejected") {
        CHECK_THROWS_AS(run(init, p, cfg, 0.55001), std::invalid_argument);
    }

    SUBCASE("backward stepping is rejected") {
        CHECK_THROWS_AS(run(init, p, cfg, -0.5), std::invalid_argument);
    }

    SUBCASE("non-convergence reports the failing level") {
        SolverConfig tight = cfg;
        tight.max_iter = 1;
        try {
            run(init, p, tight, 0.5);
            FAIL("expected NonConvergence");
        } catch (const NonConvergence& e) {
            CHECK(std::string(e.what()).find("step") != std::string::npos);
        }
    }
}
