#include "r2ch/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace r2ch {

namespace {

/// Accumulates either sequentially or with Neumaier compensation.
class Accumulator {
public:
    explicit Accumulator(SumMode mode) : mode_(mode) {}

    void add(double v) {
        if (mode_ == SumMode::Sequential) {
            sum_ += v;
            return;
        }
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    double value() const { return mode_ == SumMode::Sequential ? sum_ : sum_ + comp_; }

private:
    SumMode mode_;
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

double compensated_sum(const std::vector<double>& values) {
    Accumulator acc(SumMode::Compensated);
    for (double v : values) acc.add(v);
    return acc.value();
}

double mass(const State& s, SumMode mode) {
    Accumulator acc(mode);
    for (int i = 0; i < s.rho.size(); ++i) acc.add(s.rho[i]);
    return acc.value();
}

double momentum_total(const State& s, const Parameters& p, SumMode mode) {
    Accumulator acc(mode);
    for (int i = 0; i < s.u.size(); ++i) acc.add(s.u[i] + p.Omega * s.rho[i] * s.rho[i]);
    return acc.value();
}

double energy(const State& s, const Parameters& p, SumMode mode) {
    const int M = s.u.grid.M;
    const double inv2h = 1.0 / (2.0 * s.u.grid.h);
    const double crho = 1.0 - 2.0 * p.Omega * p.A;
    Accumulator acc(mode);
    for (int i = 0; i < M; ++i) {
        const int ip = i + 1 == M ? 0 : i + 1;
        const int im = i == 0 ? M - 1 : i - 1;
        const double v = (s.u[ip] - s.u[im]) * inv2h;
        acc.add(s.u[i] * s.u[i] + v * v + crho * s.rho[i] * s.rho[i]);
    }
    return 0.5 * acc.value();
}

double hamiltonian_h(const State& s, const Parameters& p, SumMode mode) {
    const int M = s.u.grid.M;
    const double inv2h = 1.0 / (2.0 * s.u.grid.h);
    Accumulator acc(mode);
    for (int i = 0; i < M; ++i) {
        const int ip = i + 1 == M ? 0 : i + 1;
        const int im = i == 0 ? M - 1 : i - 1;
        const double v = (s.u[ip] - s.u[im]) * inv2h;
        const double ui = s.u[i];
        acc.add(ui * ui * ui + ui * v * v - p.A * ui * ui - p.mu * v * v +
                ui * s.rho[i] * s.rho[i]);
    }
    return acc.value();
}

ConservedRecord conserved_record(long n, const State& s, const Parameters& p, SumMode mode) {
    ConservedRecord r;
    r.n = n;
    r.t = s.t;
    r.I1 = mass(s, mode);
    r.I2 = momentum_total(s, p, mode);
    r.E = energy(s, p, mode);
    r.H = hamiltonian_h(s, p, mode);
    return r;
}

namespace {

void check_level_count(const Trajectory& coarse, const Trajectory& fine, int time_ratio,
                       const char* what) {
    if (coarse.states.size() < 2)
        throw std::invalid_argument(std::string(what) + ": coarse trajectory has no steps");
    const std::size_t N = coarse.states.size() - 1;
    if (fine.states.size() != static_cast<std::size_t>(time_ratio) * N + 1)
        throw std::invalid_argument(std::string(what) +
                                    ": trajectories store mismatched level counts");
}

}  // namespace

SupDiff sup_diff_space(const Trajectory& coarse, const Trajectory& fine) {
    check_level_count(coarse, fine, 1, "sup_diff_space");
    const PeriodicGrid& gc = coarse.states.front().u.grid;
    const PeriodicGrid& gf = fine.states.front().u.grid;
    if (gf.M != 2 * gc.M || gf.xmin != gc.xmin || gf.xmax != gc.xmax)
        throw std::invalid_argument(
            "sup_diff_space: fine grid must halve h on the same domain");

    SupDiff d;
    const std::size_t N = coarse.states.size() - 1;
    for (std::size_t n = 1; n <= N; ++n) {
        const State& sc = coarse.states[n];
        const State& sf = fine.states[n];
        if (sc.t != sf.t)
            throw std::invalid_argument("sup_diff_space: time levels are not aligned");
        for (int i = 0; i < gc.M; ++i) {
            d.u = std::max(d.u, std::abs(sc.u[i] - sf.u[2 * i]));
            d.rho = std::max(d.rho, std::abs(sc.rho[i] - sf.rho[2 * i]));
        }
    }
    return d;
}

SupDiff sup_diff_time(const Trajectory& coarse, const Trajectory& fine) {
    check_level_count(coarse, fine, 2, "sup_diff_time");
    const PeriodicGrid& gc = coarse.states.front().u.grid;
    const PeriodicGrid& gf = fine.states.front().u.grid;
    if (!(gc == gf))
        throw std::invalid_argument("sup_diff_time: runs must share one grid");

    SupDiff d;
    const std::size_t N = coarse.states.size() - 1;
    for (std::size_t n = 1; n <= N; ++n) {
        const State& sc = coarse.states[n];
        const State& sf = fine.states[2 * n];
        if (sc.t != sf.t)
            throw std::invalid_argument("sup_diff_time: time levels are not aligned");
        for (int i = 0; i < gc.M; ++i) {
            d.u = std::max(d.u, std::abs(sc.u[i] - sf.u[i]));
            d.rho = std::max(d.rho, std::abs(sc.rho[i] - sf.rho[i]));
        }
    }
    return d;
}

double observed_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0))
        throw std::domain_error("observed_order: errors must be positive");
    const long double ratio = static_cast<long double>(e_coarse) / e_fine;
    return static_cast<double>(std::log(ratio) / std::log(2.0L));
}

}  // namespace r2ch
