#pragma once

#include <optional>
#include <vector>

#include "r2ch/scheme.hpp"

namespace r2ch {

/// Summation policy for the conserved-quantity sums. Sequential is the
/// default everywhere: plain ascending-index summation, reproducible
/// bit-for-bit. Compensated (Neumaier) summation serves the drift-audit
/// path only, where summation noise must not masquerade as scheme drift.
enum class SumMode { Sequential, Compensated };

/// Discrete mass I1 = sum_i rho_i. The sums carry no h factor, matching the
/// printed conserved quantities; they differ from the continuous integrals
/// by exactly that factor.
double mass(const State& s, SumMode mode = SumMode::Sequential);

/// Discrete momentum I2 = sum_i [u_i + Omega rho_i^2].
double momentum_total(const State& s, const Parameters& p,
                      SumMode mode = SumMode::Sequential);

/// Discrete energy
/// E = (1/2) sum_i [u_i^2 + ((u_{i+1}-u_{i-1})/(2h))^2 + (1-2 Omega A) rho_i^2].
double energy(const State& s, const Parameters& p, SumMode mode = SumMode::Sequential);

/// Third-order functional
/// H = sum_i [u_i^3 + u_i Du_i^2 - A u_i^2 - mu Du_i^2 + u_i rho_i^2],
/// Du the periodic central difference. Monitored, not asserted conserved.
double hamiltonian_h(const State& s, const Parameters& p,
                     SumMode mode = SumMode::Sequential);

struct ConservedRecord {
    long n = 0;
    double t = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double E = 0.0;
    double H = 0.0;
};

ConservedRecord conserved_record(long n, const State& s, const Parameters& p,
                                 SumMode mode = SumMode::Sequential);

/// Max-norm differences between two trajectories at coincident nodes and
/// aligned time levels, reported separately for u and rho.
struct SupDiff {
    double u = 0.0;
    double rho = 0.0;
};

/// Posterior spatial error: fine must hold the same scenario on the same
/// domain with 2M nodes and the same time levels; coarse node i coincides
/// with fine node 2i. The max runs over levels 1..N.
SupDiff sup_diff_space(const Trajectory& coarse, const Trajectory& fine);

/// Posterior temporal error: same grid, fine run with twice the steps;
/// coarse level n aligns with fine level 2n. The max runs over levels 1..N.
SupDiff sup_diff_time(const Trajectory& coarse, const Trajectory& fine);

/// log2(e_coarse / e_fine), evaluated in extended precision.
/// Throws std::domain_error unless both errors are positive.
double observed_order(double e_coarse, double e_fine);

/// One rung of a refinement ladder: resolution is M or N depending on the
/// study axis; order is absent on the first rung.
struct ConvergenceRow {
    int resolution = 0;
    double error = 0.0;
    std::optional<double> order;
};

/// Compensated (Neumaier) sum; used by the drift audits.
double compensated_sum(const std::vector<double>& values);

}  // namespace r2ch
