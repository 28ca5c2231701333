#pragma once

// Test-only reference implementations: direct loop transcriptions of the
// discrete equations in extended precision, plus a dense linear solver.
// Deliberately independent of the library code paths they cross-check.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using ld = long double;
using vec = std::vector<ld>;

inline int wrap(int i, int M) {
    int r = i % M;
    return r < 0 ? r + M : r;
}

/// Dense circulant Helmholtz matrix: 1 + 1/(2h^2) on the diagonal and
/// -1/(4h^2) at columns i +- 2 (mod M).
inline std::vector<vec> dense_helmholtz(int M, ld h) {
    std::vector<vec> B(static_cast<std::size_t>(M), vec(static_cast<std::size_t>(M), 0.0L));
    const ld c0 = 1.0L + 1.0L / (2.0L * h * h);
    const ld c2 = -1.0L / (4.0L * h * h);
    for (int i = 0; i < M; ++i) {
        B[i][i] += c0;
        B[i][wrap(i + 2, M)] += c2;
        B[i][wrap(i - 2, M)] += c2;
    }
    return B;
}

/// Gaussian elimination with partial pivoting.
inline vec dense_solve(std::vector<vec> A, vec b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        if (A[k][k] == 0.0L) throw std::runtime_error("dense_solve: singular matrix");
        for (int i = k + 1; i < n; ++i) {
            const ld f = A[i][k] / A[k][k];
            if (f == 0.0L) continue;
            for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    vec x(static_cast<std::size_t>(n), 0.0L);
    for (int i = n - 1; i >= 0; --i) {
        ld s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

inline vec matvec(const std::vector<vec>& A, const vec& x) {
    const int n = static_cast<int>(x.size());
    vec y(static_cast<std::size_t>(n), 0.0L);
    for (int i = 0; i < n; ++i) {
        ld s = 0.0L;
        for (int j = 0; j < n; ++j) s += A[i][j] * x[j];
        y[i] = s;
    }
    return y;
}

struct Params {
    ld A = 0.0L;
    ld mu = 0.0L;
    ld sigma = 1.0L;
    ld Omega = 0.0L;
};

/// Threshold viscosity terms.
inline void viscosity(const vec& u, const vec& rho, ld h, ld epsilon, vec& Ru, vec& Rrho) {
    const int M = static_cast<int>(u.size());
    Ru.assign(static_cast<std::size_t>(M), 0.0L);
    Rrho.assign(static_cast<std::size_t>(M), 0.0L);
    for (int i = 0; i < M; ++i) {
        const ld d2u = u[wrap(i + 1, M)] - 2.0L * u[i] + u[wrap(i - 1, M)];
        const ld d2r = rho[wrap(i + 1, M)] - 2.0L * rho[i] + rho[wrap(i - 1, M)];
        if (std::abs(d2u) >= epsilon * h) Ru[i] = d2u / (2.0L * h);
        if (std::abs(d2r) >= epsilon * h) Rrho[i] = d2r / (2.0L * h);
    }
}

/// Left-hand side of the discrete momentum equation at the star level,
/// including the time difference against (u0, rho0, m0) and minus the
/// viscosity term when enabled.
inline vec momentum_residual(const vec& us, const vec& rs, const vec& ms, const vec& m0,
                             ld h, ld tau, const Params& p, bool visc, ld epsilon) {
    const int M = static_cast<int>(us.size());
    vec Ru, Rr;
    if (visc) viscosity(us, rs, h, epsilon, Ru, Rr);
    vec out(static_cast<std::size_t>(M), 0.0L);
    for (int i = 0; i < M; ++i) {
        const int ip1 = wrap(i + 1, M), im1 = wrap(i - 1, M);
        const int ip2 = wrap(i + 2, M), im2 = wrap(i - 2, M);
        ld r = (ms[i] - m0[i]) / (tau / 2.0L);
        r += p.sigma / (2.0L * h) *
             ((ms[ip1] * us[ip1] - ms[im1] * us[im1]) + ms[i] * (us[ip1] - us[im1]));
        r += 3.0L * (1.0L - p.sigma) / (4.0L * h) * (us[ip1] * us[ip1] - us[im1] * us[im1]);
        r -= p.A / (2.0L * h) * (us[ip1] - us[im1]);
        r += p.mu / (2.0L * h * h * h) *
             (us[ip2] - 2.0L * us[ip1] + 2.0L * us[im1] - us[im2]);
        r += (1.0L - 2.0L * p.Omega * p.A) / (4.0L * h) *
             (rs[ip1] * rs[ip1] - rs[im1] * rs[im1]);
        r -= p.Omega / (2.0L * h) * rs[i] *
             ((us[ip1] + us[i]) * (rs[ip1] + rs[i]) - (us[im1] + us[i]) * (rs[im1] + rs[i]));
        if (visc) r -= Ru[i];
        out[i] = r;
    }
    return out;
}

inline vec density_residual(const vec& us, const vec& rs, const vec& rho0, ld h, ld tau,
                            bool visc, ld epsilon) {
    const int M = static_cast<int>(us.size());
    vec Ru, Rr;
    if (visc) viscosity(us, rs, h, epsilon, Ru, Rr);
    vec out(static_cast<std::size_t>(M), 0.0L);
    for (int i = 0; i < M; ++i) {
        const int ip1 = wrap(i + 1, M), im1 = wrap(i - 1, M);
        ld r = (rs[i] - rho0[i]) / (tau / 2.0L);
        r += ((us[ip1] + us[i]) * (rs[ip1] + rs[i]) -
              (us[im1] + us[i]) * (rs[im1] + rs[i])) /
             (4.0L * h);
        if (visc) r -= Rr[i];
        out[i] = r;
    }
    return out;
}

struct Star {
    vec u, rho, m;
    int iterations = 0;
};

/// High-accuracy fixed-point solve of the star-variable system: the same
/// sweep structure, long double arithmetic, dense Helmholtz solves.
inline Star picard(const vec& u0, const vec& rho0, const vec& m0, ld h, ld tau,
                   const Params& p, bool visc, ld epsilon, ld tol, int max_iter) {
    const int M = static_cast<int>(u0.size());
    const auto B = dense_helmholtz(M, h);
    Star s;
    s.u = u0;
    s.rho = rho0;
    s.m = m0;
    vec Ru, Rr;
    for (int l = 1; l <= max_iter; ++l) {
        if (visc) viscosity(s.u, s.rho, h, epsilon, Ru, Rr);
        vec rho_next(static_cast<std::size_t>(M));
        for (int i = 0; i < M; ++i) {
            const int ip1 = wrap(i + 1, M), im1 = wrap(i - 1, M);
            ld flux = ((s.u[ip1] + s.u[i]) * (s.rho[ip1] + s.rho[i]) -
                       (s.u[im1] + s.u[i]) * (s.rho[im1] + s.rho[i])) /
                      (4.0L * h);
            if (visc) flux -= Rr[i];
            rho_next[i] = rho0[i] - tau / 2.0L * flux;
        }
        vec m_next(static_cast<std::size_t>(M));
        for (int i = 0; i < M; ++i) {
            const int ip1 = wrap(i + 1, M), im1 = wrap(i - 1, M);
            const int ip2 = wrap(i + 2, M), im2 = wrap(i - 2, M);
            ld g = p.sigma / (2.0L * h) *
                   ((s.m[ip1] * s.u[ip1] - s.m[im1] * s.u[im1]) +
                    s.m[i] * (s.u[ip1] - s.u[im1]));
            g += 3.0L * (1.0L - p.sigma) / (4.0L * h) *
                 (s.u[ip1] * s.u[ip1] - s.u[im1] * s.u[im1]);
            g -= p.A / (2.0L * h) * (s.u[ip1] - s.u[im1]);
            g += p.mu / (2.0L * h * h * h) *
                 (s.u[ip2] - 2.0L * s.u[ip1] + 2.0L * s.u[im1] - s.u[im2]);
            g += (1.0L - 2.0L * p.Omega * p.A) / (4.0L * h) *
                 (rho_next[ip1] * rho_next[ip1] - rho_next[im1] * rho_next[im1]);
            g -= p.Omega / (2.0L * h) * rho_next[i] *
                 ((s.u[ip1] + s.u[i]) * (rho_next[ip1] + rho_next[i]) -
                  (s.u[im1] + s.u[i]) * (rho_next[im1] + rho_next[i]));
            if (visc) g -= Ru[i];
            m_next[i] = m0[i] - tau / 2.0L * g;
        }
        vec u_next = dense_solve(B, m_next);
        ld inc = 0.0L;
        for (int i = 0; i < M; ++i) inc = std::max(inc, std::abs(u_next[i] - s.u[i]));
        s.u = std::move(u_next);
        s.rho = std::move(rho_next);
        s.m = std::move(m_next);
        s.iterations = l;
        if (inc <= tol) return s;
    }
    throw std::runtime_error("oracle picard: no convergence");
}

/// A few random low Fourier modes: smooth, periodic, deterministic by seed.
inline std::vector<double> smooth_random(int M, double L, std::uint32_t seed, double amp) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double a1 = U(gen), b1 = U(gen), a2 = U(gen), b2 = U(gen);
    std::vector<double> w(static_cast<std::size_t>(M));
    const double twopi = 2.0 * 3.14159265358979323846;
    for (int i = 0; i < M; ++i) {
        const double x = static_cast<double>(i) / M;
        w[static_cast<std::size_t>(i)] =
            amp * (a1 * std::cos(twopi * x) + b1 * std::sin(twopi * x) +
                   0.5 * (a2 * std::cos(2 * twopi * x) + b2 * std::sin(2 * twopi * x)));
    }
    (void)L;
    return w;
}

inline std::vector<double> uniform_random(int M, std::uint32_t seed, double amp) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> U(-amp, amp);
    std::vector<double> w(static_cast<std::size_t>(M));
    for (double& v : w) v = U(gen);
    return w;
}

}  // namespace oracle
