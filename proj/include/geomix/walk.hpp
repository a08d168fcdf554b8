#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geomix/structure.hpp"

namespace geomix {

// TV-vs-time curve with extracted mixing times. In exact mode the per-start
// rows come from the uniformized kernel; in MC mode from walker histograms
// with bootstrap error bars.
struct MixProfile {
    std::string method;          // "exact" | "mc"
    std::vector<u32> starts;     // local vertex ids examined
    std::vector<double> t_grid;
    std::vector<double> tv;      // per t: max over starts (MC: bootstrap bias-corrected)
    std::vector<double> tv_lo;   // bootstrap 2.5% for the max-attaining start (== tv in exact mode)
    std::vector<double> tv_hi;   // bootstrap 97.5%
    std::vector<double> tv_se;   // bootstrap standard error (0 in exact mode)
    std::vector<double> tv_by_start;  // row-major [start][t]
    std::vector<double> eps_list;
    std::vector<double> tau_mix;      // per eps
    bool extremal_heuristic = false;  // worst case taken over a vertex subset only
};

struct DistanceFunctional {
    u32 source = 0;
    std::vector<u32> distances;
    double pi_mean = 0.0;   // pi(D_v)
    double value = 0.0;     // pi(D_v^2) - pi(D_v)^2
};

// H_t(x, .) by uniformization: sum_k e^{-t} t^k/k! * (e_x P^k), truncated when
// the Poisson tail drops below tol.
std::vector<double> heat_kernel_row(const GiantSubgraph& g, u32 x, double t, double tol = 1e-12);

// Smallest N with P(Poisson(t) > N) < tol.
std::size_t poisson_truncation(double t, double tol);

double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu);

// inf { t : max_x ||H_t(x,.) - pi||_TV <= eps }, bisected to absolute time
// tolerance time_tol with exact kernel rows. All rows when |V| <= 500, else
// 32 extremal rows (min/max degree and far-from-center positions).
double tau_mix_exact(const GiantSubgraph& g, double eps, double time_tol = 1e-6,
                     double kernel_tol = 1e-12);

// Exact worst-case TV on a time grid plus tau_mix for each eps.
MixProfile mix_profile_exact(const GiantSubgraph& g, const std::vector<double>& t_grid,
                             const std::vector<double>& eps_list, double kernel_tol = 1e-12);

// Rate-1 continuous-time walk by Poisson-count embedding: each walker draws
// Poisson increments along the sorted grid and takes that many uniform steps.
// Deterministic per seed; walkers get independent derived streams.
MixProfile simulate_ctrw(const GiantSubgraph& g, const std::vector<u32>& starts,
                         const std::vector<double>& t_grid, u64 walkers, u64 seed,
                         int bootstrap = 200);

DistanceFunctional distance_functional(const GiantSubgraph& g, u32 v);

// tau_mix(eps) / tau_mix(1-eps); +inf sentinel when the walk is already
// within 1-eps of stationarity at t = 0.
double cutoff_ratio(const GiantSubgraph& g, double eps);

// max over pairs with ||x-y||_2 > min_euclidean of d_G(x,y)/ceil(||x-y||/r);
// 0 when no pair passes the cutoff.
double chemical_distance_check(const GiantSubgraph& g,
                               const std::vector<std::pair<u32, u32>>& pairs, double r,
                               double min_euclidean);

// (t, tv, tv_lo, tv_hi, method) rows.
void write_mix_profile_csv(const MixProfile& profile, const std::string& path);

}  // namespace geomix
