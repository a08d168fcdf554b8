#include "geomix/walk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>

#include "geomix/common.hpp"
#include "geomix/random.hpp"

namespace geomix {

namespace {

constexpr std::size_t kExactVertexCap = 5000;
constexpr std::size_t kAllRowsCap = 500;
constexpr u64 kSeedPurposeWalk = 3;

// v <- v P for a row vector: (vP)(y) = sum_{x ~ y} v(x)/deg(x).
void row_step(const GiantSubgraph& g, const std::vector<double>& v, std::vector<double>& out) {
    const std::size_t n = g.vertex_count();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        if (v[x] == 0.0) continue;
        double share = v[x] / g.degrees[x];
        for (u64 e = g.offsets[x]; e < g.offsets[x + 1]; ++e) out[g.neighbors[e]] += share;
    }
}

void check_exact_size(const GiantSubgraph& g) {
    if (g.vertex_count() > kExactVertexCap)
        throw Error(ErrCode::TooLarge, "exact kernel limited to 5000 vertices");
    if (g.edge_count == 0) throw Error(ErrCode::NoEdges, "walk needs edges");
}

// Poisson(t) pmf weights 0..N, computed in log space so large t is safe.
std::vector<double> poisson_weights(double t, std::size_t N) {
    std::vector<double> w(N + 1);
    for (std::size_t k = 0; k <= N; ++k)
        w[k] = std::exp(-t + (k > 0 ? k * std::log(t) : 0.0) - std::lgamma(k + 1.0));
    return w;
}

// Cached powers e_x P^k per start, shared across the t evaluations of a
// bisection. Falls back to streaming recomputation when the cache would not
// fit (N * |V| * #starts doubles, capped at ~1.2 GB).
class RowPowerCache {
  public:
    RowPowerCache(const GiantSubgraph& g, std::vector<u32> starts)
        : g_(g), starts_(std::move(starts)), powers_(starts_.size()) {}

    std::vector<double> heat_row(std::size_t start_idx, double t, double tol) {
        std::size_t N = poisson_truncation(t, tol);
        const std::size_t n = g_.vertex_count();
        if (!streaming_ && (N + 1) * n * starts_.size() > 150000000) {
            streaming_ = true;
            powers_.clear();
            powers_.shrink_to_fit();
        }
        auto w = poisson_weights(t, N);
        std::vector<double> acc(n, 0.0);
        if (streaming_) {
            std::vector<double> v(n, 0.0), next(n);
            v[starts_[start_idx]] = 1.0;
            for (std::size_t k = 0; k <= N; ++k) {
                for (std::size_t y = 0; y < n; ++y) acc[y] += w[k] * v[y];
                if (k < N) {
                    row_step(g_, v, next);
                    v.swap(next);
                }
            }
        } else {
            auto& pw = powers_[start_idx];
            if (pw.empty()) {
                pw.emplace_back(n, 0.0);
                pw[0][starts_[start_idx]] = 1.0;
            }
            while (pw.size() <= N) {
                std::vector<double> next(n);
                row_step(g_, pw.back(), next);
                pw.push_back(std::move(next));
            }
            for (std::size_t k = 0; k <= N; ++k)
                for (std::size_t y = 0; y < n; ++y) acc[y] += w[k] * pw[k][y];
        }
        // renormalize the truncated series onto the simplex
        double total = 0.0;
        for (double a : acc) total += a;
        if (total > 0.0)
            for (double& a : acc) a /= total;
        return acc;
    }

    std::size_t size() const { return starts_.size(); }
    u32 start(std::size_t i) const { return starts_[i]; }

  private:
    const GiantSubgraph& g_;
    std::vector<u32> starts_;
    std::vector<std::vector<std::vector<double>>> powers_;
    bool streaming_ = false;
};

// All rows for small graphs; otherwise min/max-degree vertices plus the ones
// farthest from the domain center (heuristic worst-case starts).
std::vector<u32> worst_case_rows(const GiantSubgraph& g, bool* heuristic) {
    const std::size_t n = g.vertex_count();
    if (n <= kAllRowsCap) {
        *heuristic = false;
        std::vector<u32> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<u32>(i);
        return all;
    }
    *heuristic = true;
    std::vector<u32> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<u32>(i);
    auto take = [&](auto cmp, std::size_t count, std::vector<u32>& into) {
        std::partial_sort(order.begin(), order.begin() + count, order.end(), cmp);
        into.insert(into.end(), order.begin(), order.begin() + count);
    };
    std::vector<u32> rows;
    take([&](u32 a, u32 b) { return g.degrees[a] < g.degrees[b]; }, 12, rows);
    take([&](u32 a, u32 b) { return g.degrees[a] > g.degrees[b]; }, 12, rows);
    auto center_dist2 = [&](u32 v) {
        double s = 0.0;
        for (int k = 0; k < g.dim; ++k) s += g.pos(v)[k] * g.pos(v)[k];
        return s;
    };
    take([&](u32 a, u32 b) { return center_dist2(a) > center_dist2(b); }, 8, rows);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

double worst_tv(RowPowerCache& cache, const std::vector<double>& pi, double t, double tol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < cache.size(); ++i)
        worst = std::max(worst, tv_distance(cache.heat_row(i, t, tol), pi));
    return worst;
}

}  // namespace

std::size_t poisson_truncation(double t, double tol) {
    if (t < 0.0) throw Error(ErrCode::Domain, "time must be nonnegative");
    tol = std::max(tol, 1e-14);
    if (t == 0.0) return 0;
    double lpmf = -t;
    double cum = std::exp(lpmf);
    std::size_t k = 0;
    while (1.0 - cum >= tol) {
        ++k;
        lpmf += std::log(t) - std::log(static_cast<double>(k));
        cum += std::exp(lpmf);
        if (k > 100000000) throw Error(ErrCode::NoConvergence, "poisson truncation runaway");
    }
    return k;
}

std::vector<double> heat_kernel_row(const GiantSubgraph& g, u32 x, double t, double tol) {
    check_exact_size(g);
    if (x >= g.vertex_count()) throw Error(ErrCode::Domain, "start vertex out of range");
    if (t < 0.0) throw Error(ErrCode::Domain, "time must be nonnegative");
    RowPowerCache cache(g, {x});
    return cache.heat_row(0, t, tol);
}

double tv_distance(const std::vector<double>& mu, const std::vector<double>& nu) {
    if (mu.size() != nu.size())
        throw Error(ErrCode::DimensionMismatch, "tv_distance support mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += std::fabs(mu[i] - nu[i]);
    return 0.5 * s;
}

double tau_mix_exact(const GiantSubgraph& g, double eps, double time_tol, double kernel_tol) {
    check_exact_size(g);
    if (eps <= 0.0) throw Error(ErrCode::Domain, "eps must be positive");
    auto pi = stationary_distribution(g);
    double d0 = 1.0 - *std::min_element(pi.begin(), pi.end());
    if (eps >= d0) return 0.0;
    bool heuristic = false;
    RowPowerCache cache(g, worst_case_rows(g, &heuristic));
    double lo = 0.0, hi = 1.0;
    while (worst_tv(cache, pi, hi, kernel_tol) > eps) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e7) throw Error(ErrCode::NoConvergence, "tau_mix bracket runaway");
    }
    while (hi - lo > time_tol) {
        double mid = 0.5 * (lo + hi);
        if (worst_tv(cache, pi, mid, kernel_tol) > eps)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

MixProfile mix_profile_exact(const GiantSubgraph& g, const std::vector<double>& t_grid,
                             const std::vector<double>& eps_list, double kernel_tol) {
    check_exact_size(g);
    auto pi = stationary_distribution(g);
    MixProfile prof;
    prof.method = "exact";
    prof.starts = worst_case_rows(g, &prof.extremal_heuristic);
    prof.t_grid = t_grid;
    RowPowerCache cache(g, prof.starts);
    prof.tv_by_start.assign(prof.starts.size() * t_grid.size(), 0.0);
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        double worst = 0.0;
        for (std::size_t i = 0; i < prof.starts.size(); ++i) {
            double tv = tv_distance(cache.heat_row(i, t_grid[ti], kernel_tol), pi);
            prof.tv_by_start[i * t_grid.size() + ti] = tv;
            worst = std::max(worst, tv);
        }
        prof.tv.push_back(worst);
        prof.tv_lo.push_back(worst);
        prof.tv_hi.push_back(worst);
        prof.tv_se.push_back(0.0);
    }
    for (double eps : eps_list) {
        prof.eps_list.push_back(eps);
        prof.tau_mix.push_back(tau_mix_exact(g, eps, 1e-6, kernel_tol));
    }
    return prof;
}

MixProfile simulate_ctrw(const GiantSubgraph& g, const std::vector<u32>& starts,
                         const std::vector<double>& t_grid, u64 walkers, u64 seed,
                         int bootstrap) {
    if (walkers < 1) throw Error(ErrCode::ConfigError, "walkers >= 1 required");
    if (g.edge_count == 0) throw Error(ErrCode::NoEdges, "walk needs edges");
    for (u32 s : starts)
        if (s >= g.vertex_count()) throw Error(ErrCode::Domain, "start vertex out of range");
    std::vector<double> grid(t_grid);
    std::sort(grid.begin(), grid.end());
    const std::size_t n = g.vertex_count();
    const std::size_t T = grid.size();
    auto pi = stationary_distribution(g);

    MixProfile prof;
    prof.method = "mc";
    prof.starts = starts;
    prof.t_grid = grid;
    prof.tv_by_start.assign(starts.size() * T, 0.0);
    prof.tv.assign(T, 0.0);
    prof.tv_lo.assign(T, 0.0);
    prof.tv_hi.assign(T, 0.0);
    prof.tv_se.assign(T, 0.0);

    // histograms[start][t][vertex]
    std::vector<std::vector<std::vector<u64>>> hist(
        starts.size(), std::vector<std::vector<u64>>(T, std::vector<u64>(n, 0)));

    // Independent walkers in blocks; per-(start, block) derived streams keep
    // the result independent of scheduling.
    const u64 block = 1024;
    const u64 blocks = (walkers + block - 1) / block;
    std::mutex merge_mutex;
    for (std::size_t si = 0; si < starts.size(); ++si) {
        parallel_for(blocks, [&](std::size_t bi) {
            RngStream rng(derive_seed(seed, kSeedPurposeWalk,
                                      static_cast<u64>(si) * blocks + bi));
            std::vector<std::vector<u64>> local(T, std::vector<u64>(n, 0));
            u64 lo = bi * block, hi_w = std::min(walkers, (bi + 1) * block);
            for (u64 w = lo; w < hi_w; ++w) {
                u32 v = starts[si];
                double prev_t = 0.0;
                for (std::size_t ti = 0; ti < T; ++ti) {
                    u64 jumps = rng.next_poisson(grid[ti] - prev_t);
                    for (u64 j = 0; j < jumps; ++j) {
                        u64 pick = rng.next_below(g.degrees[v]);
                        v = g.neighbors[g.offsets[v] + pick];
                    }
                    local[ti][v] += 1;
                    prev_t = grid[ti];
                }
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            for (std::size_t ti = 0; ti < T; ++ti)
                for (std::size_t y = 0; y < n; ++y) hist[si][ti][y] += local[ti][y];
        });
    }

    // plug-in TV and multinomial bootstrap per (start, t)
    for (std::size_t ti = 0; ti < T; ++ti) {
        double worst = -1.0;
        std::size_t worst_si = 0;
        for (std::size_t si = 0; si < starts.size(); ++si) {
            double tv = 0.0;
            for (std::size_t y = 0; y < n; ++y)
                tv += std::fabs(static_cast<double>(hist[si][ti][y]) / walkers - pi[y]);
            tv *= 0.5;
            prof.tv_by_start[si * T + ti] = tv;
            if (tv > worst) {
                worst = tv;
                worst_si = si;
            }
        }
        prof.tv[ti] = worst;

        // bootstrap the max-attaining start's histogram
        const auto& h = hist[worst_si][ti];
        std::vector<std::size_t> occupied;
        double pi_unoccupied = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            if (h[y] > 0)
                occupied.push_back(y);
            else
                pi_unoccupied += pi[y];
        }
        std::mt19937_64 boot_rng(derive_seed(seed, kSeedPurposeWalk + 1,
                                             worst_si * T + ti));
        std::vector<double> samples(bootstrap);
        for (int b = 0; b < bootstrap; ++b) {
            u64 remaining = walkers;
            double mass = 1.0;
            double tv = pi_unoccupied;
            for (std::size_t y : occupied) {
                double p = static_cast<double>(h[y]) / walkers;
                u64 c = 0;
                if (remaining > 0 && mass > 1e-15) {
                    double q = std::min(1.0, p / mass);
                    std::binomial_distribution<u64> bin(remaining, q);
                    c = bin(boot_rng);
                }
                tv += std::fabs(static_cast<double>(c) / walkers - pi[y]);
                remaining -= c;
                mass -= p;
            }
            samples[b] = 0.5 * tv;
        }
        std::sort(samples.begin(), samples.end());
        auto quant = [&](double q) {
            double idx = q * (bootstrap - 1);
            std::size_t i0 = static_cast<std::size_t>(idx);
            double frac = idx - i0;
            return i0 + 1 < samples.size() ? samples[i0] * (1 - frac) + samples[i0 + 1] * frac
                                           : samples[i0];
        };
        double mean = 0.0, var = 0.0;
        for (double s : samples) mean += s;
        mean /= bootstrap;
        for (double s : samples) var += (s - mean) * (s - mean);
        prof.tv_se[ti] = std::sqrt(var / std::max(1, bootstrap - 1));
        // Bias correction: resampling from the empirical histogram reproduces
        // the plug-in TV's upward bias near stationarity, so the bootstrap
        // mean minus the plug-in value estimates that bias directly.
        double bias = mean - prof.tv[ti];
        double corrected = std::clamp(prof.tv[ti] - bias, 0.0, 1.0);
        double shift = corrected - prof.tv[ti];
        prof.tv[ti] = corrected;
        prof.tv_lo[ti] = std::clamp(quant(0.025) + shift, 0.0, 1.0);
        prof.tv_hi[ti] = std::clamp(quant(0.975) + shift, 0.0, 1.0);
    }
    return prof;
}

DistanceFunctional distance_functional(const GiantSubgraph& g, u32 v) {
    if (v >= g.vertex_count()) throw Error(ErrCode::Domain, "source out of range");
    auto dist = bfs_distances(g, v);
    for (u32 d : dist)
        if (d == ~u32(0)) throw Error(ErrCode::Domain, "graph must be connected");
    auto pi = stationary_distribution(g);
    DistanceFunctional out;
    out.source = v;
    out.distances = dist;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t x = 0; x < dist.size(); ++x) {
        m1 += pi[x] * dist[x];
        m2 += pi[x] * static_cast<double>(dist[x]) * dist[x];
    }
    out.pi_mean = m1;
    out.value = m2 - m1 * m1;
    return out;
}

double cutoff_ratio(const GiantSubgraph& g, double eps) {
    if (eps <= 0.0 || eps >= 1.0) throw Error(ErrCode::Domain, "eps in (0,1) required");
    double t_late = tau_mix_exact(g, 1.0 - eps);
    if (t_late <= 0.0) return kInf;
    return tau_mix_exact(g, eps) / t_late;
}

double chemical_distance_check(const GiantSubgraph& g,
                               const std::vector<std::pair<u32, u32>>& pairs, double r,
                               double min_euclidean) {
    if (r <= 0.0) throw Error(ErrCode::Domain, "radius must be positive");
    // group by source so each BFS serves every pair sharing it
    std::vector<std::pair<u32, u32>> sorted(pairs);
    std::sort(sorted.begin(), sorted.end());
    double worst = 0.0;
    std::vector<u32> dist;
    u32 cur_src = ~u32(0);
    for (auto [x, y] : sorted) {
        double d2 = 0.0;
        for (int k = 0; k < g.dim; ++k) {
            double dx = g.pos(x)[k] - g.pos(y)[k];
            d2 += dx * dx;
        }
        double euclid = std::sqrt(d2);
        if (euclid <= min_euclidean) continue;
        if (x != cur_src) {
            dist = bfs_distances(g, x);
            cur_src = x;
        }
        if (dist[y] == ~u32(0)) throw Error(ErrCode::Domain, "pair not connected");
        double denom = std::ceil(euclid / r);
        worst = std::max(worst, dist[y] / denom);
    }
    return worst;
}

void write_mix_profile_csv(const MixProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrCode::ConfigError, "cannot open " + path);
    out << "t,tv,tv_lo,tv_hi,method\n";
    out.precision(17);
    for (std::size_t i = 0; i < profile.t_grid.size(); ++i)
        out << profile.t_grid[i] << ',' << profile.tv[i] << ',' << profile.tv_lo[i] << ','
            << profile.tv_hi[i] << ',' << profile.method << '\n';
}

}  // namespace geomix
