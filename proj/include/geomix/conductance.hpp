#pragma once

#include <string>
#include <vector>

#include "geomix/structure.hpp"

namespace geomix {

// phi(t) profile on a geometric t-grid in [pi0, 1/2]. `phi` holds the best
// value whose witness first becomes admissible at that grid point; `envelope`
// is the running minimum (monotone nonincreasing in t), which is what phi(t)
// means: the minimum over all sets with pi(A) <= t.
struct ConductanceProfile {
    std::vector<double> t_grid;
    std::vector<double> phi;       // +inf where no witness landed
    std::vector<std::string> witness_kind;  // exhaustive | sweep | tile-cut | sampled | ""
    std::vector<std::vector<u32>> witness;
    std::vector<double> envelope;
    double pi0 = 0.0;
    double pi1 = 0.0;
};

struct CutBudgets {
    u64 sampled_sets = 200;
    bool tile_cuts = true;
    u64 seed = 1;
};

struct LkBound {
    double value = 0.0;      // integral + 1/phi(1/2), integrating from pi0
    double value_pi1 = 0.0;  // same with the lower limit raised to pi1
    double integral = 0.0;
    double integral_pi1 = 0.0;
    double phi_half = 0.0;
};

// phi_A = Q(A,A^c) / (pi(A) pi(A^c)), Q = |E(A,A^c)| / (2|E|).
double conductance_of_set(const GiantSubgraph& g, const std::vector<u32>& A);

// pi1 = min over x of pi(A u {x}) with A the cheapest neighbor set the walk
// enters with probability > 1/2 (the floor(deg/2)+1 smallest-pi neighbors).
double pi_zero(const GiantSubgraph& g);
double pi_one(const GiantSubgraph& g);

// Exhaustive minimum over all nonempty proper subsets; |V| <= 18.
ConductanceProfile exact_profile(const GiantSubgraph& g);

// min over pi(A) <= 1/2 of Q(A,A^c)/pi(A), exhaustive; |V| <= 18.
double cheeger_constant(const GiantSubgraph& g);

// Upper envelope from three cut families: sweep cuts over the second
// eigenvector ordering, axis half-space cuts over positions, and seeded
// BFS-ball samples with geometric target sizes.
ConductanceProfile heuristic_profile(const GiantSubgraph& g, const CutBudgets& budgets = {});

// Integral of dt/(t phi^2(t)) over the monotone envelope (log-t trapezoid)
// plus 1/phi(1/2); +inf sentinel when the envelope touches zero. Grid points
// with no witness contribute nothing (the bound is evaluated on what was
// actually certified).
LkBound lk_bound(const ConductanceProfile& profile);

// min{ 1/(n f(n) r^d), r/(n t)^{1/d} } with f(n) = (log n)^{5d} r^d / n.
// In the dense regime r^d >= cprime * log n only the decaying branch applies
// (the Lemma 3.2 variant); cprime is the unspecified constant, exposed as a
// parameter.
double iso_reference_curve(double n, int d, double r, double t, double cprime = 1.0);
// branch crossover t* = (n f(n) r^{d+1})^d / n
double iso_reference_crossover(double n, int d, double r);

// (t, phi, witness_kind, witness_size) rows, envelope column included.
void write_profile_csv(const ConductanceProfile& profile, const std::string& path);

}  // namespace geomix
