#include "geomix/conductance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "geomix/common.hpp"
#include "geomix/random.hpp"
#include "geomix/spectral.hpp"

namespace geomix {

namespace {

constexpr std::size_t kExhaustiveCap = 18;
constexpr int kGridPoints = 64;
constexpr u64 kSeedPurposeCuts = 4;

std::vector<double> geometric_grid(double pi0, int points) {
    std::vector<double> grid(points);
    if (pi0 >= 0.5) {
        std::fill(grid.begin(), grid.end(), 0.5);
        return grid;
    }
    double ratio = std::log(0.5 / pi0);
    for (int i = 0; i < points; ++i)
        grid[i] = pi0 * std::exp(ratio * i / (points - 1));
    grid.back() = 0.5;
    return grid;
}

struct ProfileBuilder {
    ConductanceProfile prof;
    const GiantSubgraph& g;

    explicit ProfileBuilder(const GiantSubgraph& g_) : g(g_) {
        prof.pi0 = pi_zero(g);
        prof.pi1 = pi_one(g);
        prof.t_grid = geometric_grid(prof.pi0, kGridPoints);
        prof.phi.assign(prof.t_grid.size(), kInf);
        prof.witness_kind.assign(prof.t_grid.size(), "");
        prof.witness.resize(prof.t_grid.size());
    }

    // Record a candidate at the first grid point admitting it.
    void offer(double pi_A, double phi_A, const char* kind, const std::vector<u32>& A) {
        auto it = std::lower_bound(prof.t_grid.begin(), prof.t_grid.end(), pi_A - 1e-15);
        if (it == prof.t_grid.end()) return;  // pi(A) > 1/2
        std::size_t idx = it - prof.t_grid.begin();
        if (phi_A < prof.phi[idx]) {
            prof.phi[idx] = phi_A;
            prof.witness_kind[idx] = kind;
            prof.witness[idx] = A;
            std::sort(prof.witness[idx].begin(), prof.witness[idx].end());
        }
    }

    ConductanceProfile finish() {
        prof.envelope = prof.phi;
        for (std::size_t i = 1; i < prof.envelope.size(); ++i)
            prof.envelope[i] = std::min(prof.envelope[i], prof.envelope[i - 1]);
        return std::move(prof);
    }
};

// Incremental cut tracker: maintains |E(A,A^c)| and the A degree volume as
// vertices enter A one at a time.
struct IncrementalCut {
    const GiantSubgraph& g;
    std::vector<char> in_A;
    u64 cut = 0, vol = 0;
    std::vector<u32> members;

    explicit IncrementalCut(const GiantSubgraph& g_) : g(g_), in_A(g_.vertex_count(), 0) {}

    void add(u32 v) {
        u64 inside = 0;
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e) inside += in_A[g.neighbors[e]];
        cut += g.degrees[v] - 2 * inside;
        vol += g.degrees[v];
        in_A[v] = 1;
        members.push_back(v);
    }

    double pi_A() const { return static_cast<double>(vol) / (2.0 * g.edge_count); }
    double phi() const {
        double p = pi_A();
        double q = static_cast<double>(cut) / (2.0 * g.edge_count);
        return q / (p * (1.0 - p));
    }
};

void check_exhaustive(const GiantSubgraph& g) {
    if (g.vertex_count() > kExhaustiveCap)
        throw Error(ErrCode::TooLarge, "exhaustive profile limited to 18 vertices");
    if (g.edge_count == 0) throw Error(ErrCode::NoEdges, "conductance needs edges");
}

}  // namespace

double conductance_of_set(const GiantSubgraph& g, const std::vector<u32>& A) {
    if (g.edge_count == 0) throw Error(ErrCode::NoEdges, "conductance needs edges");
    if (A.empty() || A.size() >= g.vertex_count())
        throw Error(ErrCode::EmptyOrFull, "A must be a nonempty proper subset");
    std::vector<char> in_A(g.vertex_count(), 0);
    u64 vol = 0;
    for (u32 v : A) {
        if (v >= g.vertex_count()) throw Error(ErrCode::Domain, "vertex out of range");
        if (in_A[v]) throw Error(ErrCode::Domain, "duplicate vertex in A");
        in_A[v] = 1;
        vol += g.degrees[v];
    }
    u64 cut = 0;
    for (u32 v : A)
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e) cut += !in_A[g.neighbors[e]];
    double p = static_cast<double>(vol) / (2.0 * g.edge_count);
    double q = static_cast<double>(cut) / (2.0 * g.edge_count);
    return q / (p * (1.0 - p));
}

double pi_zero(const GiantSubgraph& g) {
    auto pi = stationary_distribution(g);
    return *std::min_element(pi.begin(), pi.end());
}

double pi_one(const GiantSubgraph& g) {
    auto pi = stationary_distribution(g);
    double best = kInf;
    std::vector<double> nbr;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
        nbr.clear();
        for (u64 e = g.offsets[x]; e < g.offsets[x + 1]; ++e) nbr.push_back(pi[g.neighbors[e]]);
        std::size_t need = g.degrees[x] / 2 + 1;  // P(x, A) > 1/2 forces |A| > deg/2
        double total = pi[x];
        std::partial_sort(nbr.begin(), nbr.begin() + need, nbr.end());
        for (std::size_t i = 0; i < need; ++i) total += nbr[i];
        best = std::min(best, total);
    }
    return best;
}

ConductanceProfile exact_profile(const GiantSubgraph& g) {
    check_exhaustive(g);
    const std::size_t n = g.vertex_count();
    ProfileBuilder builder(g);
    std::vector<u32> A;
    const u32 full = (1u << n) - 1;
    for (u32 mask = 1; mask < full; ++mask) {
        u64 vol = 0, cut = 0;
        A.clear();
        for (std::size_t v = 0; v < n; ++v) {
            if (!(mask >> v & 1)) continue;
            A.push_back(static_cast<u32>(v));
            vol += g.degrees[v];
            for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
                cut += !(mask >> g.neighbors[e] & 1);
        }
        double p = static_cast<double>(vol) / (2.0 * g.edge_count);
        if (p > 0.5 + 1e-15) continue;
        double q = static_cast<double>(cut) / (2.0 * g.edge_count);
        builder.offer(p, q / (p * (1.0 - p)), "exhaustive", A);
    }
    return builder.finish();
}

double cheeger_constant(const GiantSubgraph& g) {
    check_exhaustive(g);
    const std::size_t n = g.vertex_count();
    double best = kInf;
    const u32 full = (1u << n) - 1;
    for (u32 mask = 1; mask < full; ++mask) {
        u64 vol = 0, cut = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!(mask >> v & 1)) continue;
            vol += g.degrees[v];
            for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
                cut += !(mask >> g.neighbors[e] & 1);
        }
        double p = static_cast<double>(vol) / (2.0 * g.edge_count);
        if (p > 0.5 + 1e-15) continue;
        double q = static_cast<double>(cut) / (2.0 * g.edge_count);
        best = std::min(best, q / p);
    }
    return best;
}

ConductanceProfile heuristic_profile(const GiantSubgraph& g, const CutBudgets& budgets) {
    if (g.edge_count == 0) throw Error(ErrCode::NoEdges, "conductance needs edges");
    const std::size_t n = g.vertex_count();
    ProfileBuilder builder(g);

    auto offer_prefixes = [&](const std::vector<u32>& order, const char* kind) {
        IncrementalCut inc(g);
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            inc.add(order[i]);
            builder.offer(inc.pi_A(), inc.phi(), kind, inc.members);
        }
    };

    // sweep cuts over the second eigenvector ordering
    if (n >= 2) {
        auto f = fiedler_vector(g);
        std::vector<u32> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<u32>(i);
        std::stable_sort(order.begin(), order.end(), [&](u32 a, u32 b) { return f[a] < f[b]; });
        offer_prefixes(order, "sweep");
    }

    // axis half-space cuts over positions
    if (budgets.tile_cuts && g.dim > 0) {
        for (int axis = 0; axis < g.dim; ++axis) {
            std::vector<u32> order(n);
            for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<u32>(i);
            std::stable_sort(order.begin(), order.end(),
                             [&](u32 a, u32 b) { return g.pos(a)[axis] < g.pos(b)[axis]; });
            offer_prefixes(order, "tile-cut");
        }
    }

    // seeded BFS-ball growth with random frontier selection
    if (budgets.sampled_sets > 0 && n >= 4) {
        RngStream rng(derive_seed(budgets.seed, kSeedPurposeCuts, g.edge_count));
        for (u64 s = 0; s < budgets.sampled_sets; ++s) {
            double u = rng.next_double();
            std::size_t target = std::max<std::size_t>(
                2, static_cast<std::size_t>(std::round(2.0 * std::pow(n / 4.0, u))));
            target = std::min(target, n / 2);
            IncrementalCut inc(g);
            std::vector<u32> frontier;
            u32 start = static_cast<u32>(rng.next_below(n));
            inc.add(start);
            for (u64 e = g.offsets[start]; e < g.offsets[start + 1]; ++e)
                frontier.push_back(g.neighbors[e]);
            while (inc.members.size() < target && !frontier.empty()) {
                std::size_t pick = rng.next_below(frontier.size());
                u32 v = frontier[pick];
                frontier[pick] = frontier.back();
                frontier.pop_back();
                if (inc.in_A[v]) continue;
                inc.add(v);
                for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
                    if (!inc.in_A[g.neighbors[e]]) frontier.push_back(g.neighbors[e]);
            }
            if (!inc.members.empty() && inc.members.size() < n)
                builder.offer(inc.pi_A(), inc.phi(), "sampled", inc.members);
        }
    }
    return builder.finish();
}

LkBound lk_bound(const ConductanceProfile& profile) {
    LkBound out;
    const auto& t = profile.t_grid;
    const auto& phi = profile.envelope;
    if (t.empty() || phi.empty())
        throw Error(ErrCode::ConfigError, "profile has no grid");
    double phi_half = phi.back();
    out.phi_half = phi_half;
    if (phi_half <= 0.0) {
        out.value = out.value_pi1 = kInf;
        return out;
    }
    auto integrand = [&](std::size_t i) {
        if (!std::isfinite(phi[i]) || phi[i] <= 0.0) return 0.0;
        return 1.0 / (phi[i] * phi[i]);
    };
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (t[i + 1] <= t[i]) continue;
        double du = std::log(t[i + 1]) - std::log(t[i]);  // dt/t
        double seg = 0.5 * (integrand(i) + integrand(i + 1)) * du;
        out.integral += seg;
        if (t[i] >= profile.pi1 - 1e-15) out.integral_pi1 += seg;
    }
    bool zero_phi = std::any_of(phi.begin(), phi.end(),
                                [](double p) { return std::isfinite(p) && p <= 0.0; });
    if (zero_phi) {
        out.value = out.value_pi1 = kInf;
        return out;
    }
    out.value = out.integral + 1.0 / phi_half;
    out.value_pi1 = out.integral_pi1 + 1.0 / phi_half;
    return out;
}

double iso_reference_curve(double n, int d, double r, double t, double cprime) {
    if (t <= 0.0 || t > 0.5) throw Error(ErrCode::Domain, "t in (0, 1/2] required");
    double decaying = r / std::pow(n * t, 1.0 / d);
    if (std::pow(r, d) >= cprime * std::log(n)) return decaying;
    double f = std::pow(std::log(n), 5.0 * d) * std::pow(r, d) / n;
    double flat = 1.0 / (n * f * std::pow(r, d));
    return std::min(flat, decaying);
}

double iso_reference_crossover(double n, int d, double r) {
    double f = std::pow(std::log(n), 5.0 * d) * std::pow(r, d) / n;
    return std::pow(n * f * std::pow(r, d + 1), d) / n;
}

void write_profile_csv(const ConductanceProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrCode::ConfigError, "cannot open " + path);
    out << "t,phi,envelope,witness_kind,witness_size\n";
    out.precision(17);
    for (std::size_t i = 0; i < profile.t_grid.size(); ++i)
        out << profile.t_grid[i] << ',' << profile.phi[i] << ',' << profile.envelope[i] << ','
            << profile.witness_kind[i] << ',' << profile.witness[i].size() << '\n';
}

}  // namespace geomix
