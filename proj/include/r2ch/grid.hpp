#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace r2ch {

/// Uniform periodic mesh on [xmin, xmax). Node M is identified with node 0,
/// so the nodes are x_i = xmin + i*h, i = 0..M-1, with h = (xmax - xmin)/M.
struct PeriodicGrid {
    double xmin = 0.0;
    double xmax = 1.0;
    int M = 0;
    double h = 0.0;

    PeriodicGrid() = default;

    PeriodicGrid(double xmin_, double xmax_, int M_)
        : xmin(xmin_), xmax(xmax_), M(M_) {
        if (!(xmax > xmin))
            throw std::invalid_argument("PeriodicGrid: xmax must exceed xmin");
        if (M < 5)
            throw std::invalid_argument(
                "PeriodicGrid: M >= 5 required (widest stencil spans i-2..i+2)");
        h = (xmax - xmin) / M;
    }

    /// Reduce any integer index into 0..M-1.
    int wrap(int i) const {
        int r = i % M;
        return r < 0 ? r + M : r;
    }

    double node(int i) const { return xmin + wrap(i) * h; }
    double length() const { return xmax - xmin; }

    friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;
};

/// Nodal values tied to a PeriodicGrid. Plain value semantics: copying a
/// GridFunction copies the grid descriptor along with the data.
struct GridFunction {
    PeriodicGrid grid;
    std::vector<double> values;

    GridFunction() = default;

    explicit GridFunction(const PeriodicGrid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.M), fill) {}

    template <class F>
    static GridFunction sample(const PeriodicGrid& g, F&& f) {
        GridFunction w(g);
        for (int i = 0; i < g.M; ++i) w.values[static_cast<std::size_t>(i)] = f(g.node(i));
        return w;
    }

    int size() const { return grid.M; }

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

    /// Periodic accessor, valid for any integer index.
    double at(int i) const { return values[static_cast<std::size_t>(grid.wrap(i))]; }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;
};

/// result_i = w_{(i+k) mod M}.
inline GridFunction shift(const GridFunction& w, int k) {
    GridFunction out(w.grid);
    const int M = w.grid.M;
    for (int i = 0; i < M; ++i) out[i] = w[w.grid.wrap(i + k)];
    return out;
}

inline double max_abs(const GridFunction& w) {
    double m = 0.0;
    for (double v : w.values) m = std::max(m, std::abs(v));
    return m;
}

inline bool all_finite(const GridFunction& w) {
    for (double v : w.values)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void require_same_grid(const GridFunction& a, const GridFunction& b,
                              const char* what) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace r2ch
