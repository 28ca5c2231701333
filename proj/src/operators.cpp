#include "r2ch/operators.hpp"

#include <cmath>
#include <limits>

namespace r2ch {

GridFunction central_diff(const GridFunction& w) {
    const int M = w.grid.M;
    const double inv2h = 1.0 / (2.0 * w.grid.h);
    GridFunction out(w.grid);
    for (int i = 0; i < M; ++i) {
        const int ip = i + 1 == M ? 0 : i + 1;
        const int im = i == 0 ? M - 1 : i - 1;
        out[i] = (w[ip] - w[im]) * inv2h;
    }
    return out;
}

GridFunction third_diff(const GridFunction& w) {
    const int M = w.grid.M;
    const double h = w.grid.h;
    const double inv2h3 = 1.0 / (2.0 * h * h * h);
    GridFunction out(w.grid);
    for (int i = 0; i < M; ++i) {
        const int ip1 = w.grid.wrap(i + 1);
        const int ip2 = w.grid.wrap(i + 2);
        const int im1 = w.grid.wrap(i - 1);
        const int im2 = w.grid.wrap(i - 2);
        out[i] = (w[ip2] - 2.0 * w[ip1] + 2.0 * w[im1] - w[im2]) * inv2h3;
    }
    return out;
}

GridFunction apply_helmholtz(const GridFunction& u) {
    const int M = u.grid.M;
    const double h = u.grid.h;
    const double inv4h2 = 1.0 / (4.0 * h * h);
    GridFunction out(u.grid);
    for (int i = 0; i < M; ++i) {
        const int ip2 = u.grid.wrap(i + 2);
        const int im2 = u.grid.wrap(i - 2);
        out[i] = u[i] - (u[ip2] - 2.0 * u[i] + u[im2]) * inv4h2;
    }
    return out;
}

GridFunction coupling_flux(const GridFunction& u, const GridFunction& rho) {
    require_same_grid(u, rho, "coupling_flux");
    const int M = u.grid.M;
    GridFunction out(u.grid);
    for (int i = 0; i < M; ++i) {
        const int ip = i + 1 == M ? 0 : i + 1;
        const int im = i == 0 ? M - 1 : i - 1;
        out[i] = (u[ip] + u[i]) * (rho[ip] + rho[i]) -
                 (u[im] + u[i]) * (rho[im] + rho[i]);
    }
    return out;
}

HelmholtzSolver::HelmholtzSolver(const PeriodicGrid& g) : grid_(g) {
    const double h = g.h;
    diag_ = 1.0 + 1.0 / (2.0 * h * h);
    offdiag_ = -1.0 / (4.0 * h * h);

    // Stride-2 sublattices. gcd(2, M) = 1 for odd M: a single cycle through
    // all nodes. Even M: the even- and odd-indexed nodes form separate cycles.
    if (g.M % 2 == 1) {
        Chain c;
        c.nodes.resize(static_cast<std::size_t>(g.M));
        int idx = 0;
        for (int j = 0; j < g.M; ++j) {
            c.nodes[static_cast<std::size_t>(j)] = idx;
            idx = g.wrap(idx + 2);
        }
        factor(c);
        chains_.push_back(std::move(c));
    } else {
        for (int parity = 0; parity < 2; ++parity) {
            Chain c;
            c.nodes.resize(static_cast<std::size_t>(g.M / 2));
            for (int j = 0; j < g.M / 2; ++j)
                c.nodes[static_cast<std::size_t>(j)] = parity + 2 * j;
            factor(c);
            chains_.push_back(std::move(c));
        }
    }
}

void HelmholtzSolver::factor(Chain& c) const {
    const int n = static_cast<int>(c.nodes.size());
    const double a = diag_;
    const double b = offdiag_;

    // Sherman-Morrison splitting of the cyclic tridiagonal chain matrix:
    // A = T' + q v^T with q = (gamma, 0, ..., 0, b)^T, v = (1, 0, ..., 0, b/gamma)^T,
    // where T' is tridiagonal with d_0 = a - gamma and d_{n-1} = a - b^2/gamma.
    const double gamma = -a;
    c.v_last = b / gamma;

    std::vector<double> d(static_cast<std::size_t>(n), a);
    d[0] = a - gamma;
    d[static_cast<std::size_t>(n - 1)] = a - b * b / gamma;

    c.lower.assign(static_cast<std::size_t>(n), 0.0);
    c.pivinv.assign(static_cast<std::size_t>(n), 0.0);
    double p = d[0];
    c.pivinv[0] = 1.0 / p;
    for (int i = 1; i < n; ++i) {
        const double l = b / p;
        c.lower[static_cast<std::size_t>(i)] = l;
        p = d[static_cast<std::size_t>(i)] - l * b;
        c.pivinv[static_cast<std::size_t>(i)] = 1.0 / p;
    }

    // z = T'^{-1} q, reused by every solve.
    std::vector<double> q(static_cast<std::size_t>(n), 0.0);
    q[0] = gamma;
    q[static_cast<std::size_t>(n - 1)] = b;
    // Thomas substitution inline (solve_chain applies the SM correction,
    // which must not run while computing z itself).
    for (int i = 1; i < n; ++i)
        q[static_cast<std::size_t>(i)] -= c.lower[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i - 1)];
    q[static_cast<std::size_t>(n - 1)] *= c.pivinv[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i)
        q[static_cast<std::size_t>(i)] = (q[static_cast<std::size_t>(i)] - b * q[static_cast<std::size_t>(i + 1)]) *
                                         c.pivinv[static_cast<std::size_t>(i)];
    c.z = std::move(q);
    c.vz_denom = 1.0 + c.z[0] + c.v_last * c.z[static_cast<std::size_t>(n - 1)];
}

void HelmholtzSolver::solve_chain(const Chain& c, std::vector<double>& rhs) const {
    const int n = static_cast<int>(c.nodes.size());
    const double b = offdiag_;
    for (int i = 1; i < n; ++i)
        rhs[static_cast<std::size_t>(i)] -= c.lower[static_cast<std::size_t>(i)] * rhs[static_cast<std::size_t>(i - 1)];
    rhs[static_cast<std::size_t>(n - 1)] *= c.pivinv[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i)
        rhs[static_cast<std::size_t>(i)] = (rhs[static_cast<std::size_t>(i)] - b * rhs[static_cast<std::size_t>(i + 1)]) *
                                           c.pivinv[static_cast<std::size_t>(i)];
    const double correction =
        (rhs[0] + c.v_last * rhs[static_cast<std::size_t>(n - 1)]) / c.vz_denom;
    for (int i = 0; i < n; ++i)
        rhs[static_cast<std::size_t>(i)] -= correction * c.z[static_cast<std::size_t>(i)];
}

GridFunction HelmholtzSolver::solve(const GridFunction& m) const {
    if (!(m.grid == grid_))
        throw std::invalid_argument("HelmholtzSolver::solve: grid mismatch");

    GridFunction u(grid_);
    std::vector<double> chain_rhs;
    auto substitute = [&](const GridFunction& rhs, GridFunction& out) {
        for (const Chain& c : chains_) {
            const int n = static_cast<int>(c.nodes.size());
            chain_rhs.resize(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
                chain_rhs[static_cast<std::size_t>(j)] = rhs[c.nodes[static_cast<std::size_t>(j)]];
            solve_chain(c, chain_rhs);
            for (int j = 0; j < n; ++j)
                out[c.nodes[static_cast<std::size_t>(j)]] = chain_rhs[static_cast<std::size_t>(j)];
        }
    };

    substitute(m, u);

    const double mnorm = max_abs(m);
    if (mnorm == 0.0) return u;

    // Residuals are accumulated in long double: the stencil's 1/h^2 terms
    // cancel down to ~||m||, so a double-precision evaluation of m - B u
    // bottoms out at eps/h^2 relative and would mask the solve quality.
    const double eps = std::numeric_limits<double>::epsilon();
    GridFunction residual(grid_);
    GridFunction correction(grid_);
    const long double inv4h2 = 1.0L / (4.0L * static_cast<long double>(grid_.h) * grid_.h);
    auto eval_residual = [&]() {
        long double rmax = 0.0L;
        for (int i = 0; i < grid_.M; ++i) {
            const int ip2 = grid_.wrap(i + 2);
            const int im2 = grid_.wrap(i - 2);
            const long double ui = u[i];
            const long double bu =
                ui - (static_cast<long double>(u[ip2]) - 2.0L * ui + u[im2]) * inv4h2;
            const long double r = static_cast<long double>(m[i]) - bu;
            residual[i] = static_cast<double>(r);
            rmax = std::max(rmax, std::abs(r));
        }
        return static_cast<double>(rmax);
    };

    // Refine until the residual reaches a few ulp of the data or stops
    // improving. A double-precision result cannot beat the representation
    // floor eps * ||B|| * ||u||, which exceeds 1e-12 * ||m|| on fine grids
    // with smooth data; the failure check accounts for that floor.
    double rmax = eval_residual();
    for (int pass = 0; pass < 3; ++pass) {
        if (rmax <= 4.0 * eps * mnorm) break;
        substitute(residual, correction);
        for (int i = 0; i < grid_.M; ++i) u[i] += correction[i];
        const double improved = eval_residual();
        const bool stalled = improved >= 0.5 * rmax;
        rmax = improved;
        if (stalled) break;
    }
    const double bnorm = 1.0 + 1.0 / (grid_.h * grid_.h);  // ||B||_inf
    const double floor = 8.0 * eps * bnorm * max_abs(u);
    if (!(rmax <= std::max(1e-12 * mnorm, floor)))
        throw HelmholtzSolveFailure(
            "Helmholtz solve missed the 1e-12 relative residual target");
    return u;
}

GridFunction solve_helmholtz(const GridFunction& m) {
    return HelmholtzSolver(m.grid).solve(m);
}

}  // namespace r2ch
