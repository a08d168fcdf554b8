#pragma once

#include <vector>

#include "geomix/structure.hpp"

namespace geomix {

struct SpectralResult {
    double lambda2_abs = 0.0;
    double lambda2_signed = 0.0;
    double relax_abs = 0.0;    // 1/(1-lambda2_abs); +inf sentinel when lambda2_abs = 1
    double relax_signed = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool bipartite = false;    // lambda2_abs == 1 within tolerance
    bool converged = false;
};

enum class RelaxMode { Abs, Signed };

// (Pv)(x) = (1/deg x) * sum_{y~x} v(y).
std::vector<double> transition_matvec(const GiantSubgraph& g, const std::vector<double>& v);

// Second eigenvalue of P in both senses, computed on the pi-symmetrized
// operator S = D^{1/2} P D^{-1/2} by a deflated (against sqrt(pi)) Lanczos
// iteration with full reorthogonalization and thick restarts. Throws
// Error(NoConvergence) after max_iter; lambda2_try returns the best estimate
// with converged = false instead.
SpectralResult lambda2(const GiantSubgraph& g, double tol = 1e-10, int max_iter = 100000);
SpectralResult lambda2_try(const GiantSubgraph& g, double tol = 1e-10, int max_iter = 100000);

double relaxation_time(const SpectralResult& res, RelaxMode mode);
inline double relaxation_time(const GiantSubgraph& g, RelaxMode mode) {
    return relaxation_time(lambda2(g), mode);
}

// D^{-1/2} times the top deflated eigenvector of S: the sweep-cut ordering
// vector (second eigenvector of P in the signed sense).
std::vector<double> fiedler_vector(const GiantSubgraph& g, double tol = 1e-8);

// Exact lambda2_signed via banded Sturm bisection; requires every vertex's
// neighborhood to be a contiguous index interval minus itself (sorted d=1
// RGGs have this shape). Used by the d=1 campaigns where the spectral gap is
// far below what a Krylov iteration reaches in reasonable time.
bool has_interval_adjacency(const GiantSubgraph& g);
double lambda2_signed_banded(const GiantSubgraph& g, double tol = 1e-12);

}  // namespace geomix
