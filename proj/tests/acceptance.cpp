// Acceptance gate: twelve end-to-end checks covering the scaling law, the
// spectral and mixing oracles, conductance, isoperimetry, the lattice layer,
// renormalization, the d=1 mode, and figure export. Each criterion prints a
// single [PASS]/[FAIL] line; the exit status is the number of failures.
//
// Run all:      ./acceptance
// Run a subset: ./acceptance 3 5 12

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geomix/conductance.hpp"
#include "geomix/harness.hpp"
#include "geomix/lattice.hpp"
#include "geomix/random.hpp"
#include "geomix/spectral.hpp"
#include "geomix/structure.hpp"
#include "geomix/tiling.hpp"
#include "geomix/walk.hpp"
#include "test_util.hpp"

using namespace geomix;
using namespace testutil;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

GiantSubgraph rgg_giant(double n, int d, double r, u64 seed) {
    RggConfig cfg{n, d, r, seed};
    cfg.validate();
    auto g = build_rgg(sample_ppp(cfg), r);
    return extract_giant(g, connected_components(g));
}

// Dense oracle for (lambda2_signed, lambda2_abs) on the symmetrized operator.
std::pair<double, double> dense_lambda2(const GiantSubgraph& g) {
    const std::size_t n = g.vertex_count();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (u64 e = g.offsets[a]; e < g.offsets[a + 1]; ++e) {
            u32 b = g.neighbors[e];
            S(a, b) = 1.0 / std::sqrt(static_cast<double>(g.degrees[a]) * g.degrees[b]);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const auto& ev = es.eigenvalues();  // ascending; top one is 1
    double sgn = ev(n - 2);
    double abs2 = std::max(ev(n - 2), -ev(0));
    return {sgn, abs2};
}

// Dense heat kernel row H_t(x,.) = [D^{-1/2} U e^{t(lambda-1)} U^T D^{1/2}]_x.
std::vector<double> expm_row(const GiantSubgraph& g, u32 x, double t) {
    const std::size_t n = g.vertex_count();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (u64 e = g.offsets[a]; e < g.offsets[a + 1]; ++e) {
            u32 b = g.neighbors[e];
            S(a, b) = 1.0 / std::sqrt(static_cast<double>(g.degrees[a]) * g.degrees[b]);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::VectorXd decay = ((es.eigenvalues().array() - 1.0) * t).exp();
    Eigen::MatrixXd E = es.eigenvectors() * decay.asDiagonal() * es.eigenvectors().transpose();
    std::vector<double> row(n);
    double sdx = std::sqrt(static_cast<double>(g.degrees[x]));
    for (std::size_t y = 0; y < n; ++y)
        row[y] = E(x, y) * std::sqrt(static_cast<double>(g.degrees[y])) / sdx;
    return row;
}

GiantSubgraph random_graph_sized(u64 seed, std::size_t n_lo, std::size_t n_hi) {
    RngStream rng(seed);
    std::size_t n = n_lo + rng.next_below(n_hi - n_lo + 1);
    double p = std::min(1.0, 1.5 * (std::log(static_cast<double>(n)) + 1.0) / n);
    return random_connected_graph(n, p, rng.next_u64());
}

struct Line {
    std::ostringstream msg;
    bool ok = true;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            msg << "  VIOLATION: " << what;
        }
    }
};

// ---- 1. scaling law -------------------------------------------------------

bool criterion1(std::string& detail) {
    constexpr double kSlopeLo = 0.85, kSlopeHi = 1.15, kR2Min = 0.95, kBudgetS = 900.0;
    double t0 = now_s();
    SweepPlan plan;
    for (double n : {4096.0, 8192.0, 16384.0, 32768.0, 65536.0})
        plan.cells.push_back({n, 2, 2.0, {1, 2, 3, 4}});
    auto fit = run_scaling(plan);
    double elapsed = now_s() - t0;
    std::ostringstream s;
    s << "slope=" << fit.slope << " R2=" << fit.r_squared << " failures=" << fit.failures.size()
      << " elapsed=" << static_cast<int>(elapsed) << "s";
    detail = s.str();
    return fit.failures.empty() && fit.slope >= kSlopeLo && fit.slope <= kSlopeHi &&
           fit.r_squared >= kR2Min && elapsed <= kBudgetS;
}

// ---- 2. radius dependence --------------------------------------------------

bool criterion2(std::string& detail) {
    constexpr double kSlopeLo = 0.7, kSlopeHi = 1.3, kBudgetS = 600.0;
    double t0 = now_s();
    SweepPlan plan;
    for (double r : {2.0, 3.0, 4.0, 6.0}) plan.cells.push_back({65536.0, 2, r, {1, 2}});
    // predictor is log(n^{2/d}/r^2); with n fixed the slope equals the slope
    // against log(1/r^2)
    auto fit = run_scaling(plan);
    double elapsed = now_s() - t0;
    std::ostringstream s;
    s << "slope=" << fit.slope << " R2=" << fit.r_squared << " failures=" << fit.failures.size()
      << " elapsed=" << static_cast<int>(elapsed) << "s";
    detail = s.str();
    return fit.failures.empty() && fit.slope >= kSlopeLo && fit.slope <= kSlopeHi &&
           elapsed <= kBudgetS;
}

// ---- 3. spectral oracle ----------------------------------------------------

bool criterion3(std::string& detail) {
    constexpr double kTol = 1e-8, kBudgetS = 60.0;
    double t0 = now_s();
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 300; ++i) {
        auto g = random_graph_sized(derive_seed(301, 1, i), 5, 400);
        auto [sgn, abs2] = dense_lambda2(g);
        SpectralResult res;
        try {
            res = lambda2(g, 1e-10);
        } catch (const Error&) {
            ++failures;
            continue;
        }
        worst = std::max({worst, std::fabs(res.lambda2_signed - sgn),
                          std::fabs(res.lambda2_abs - abs2)});
    }
    double elapsed = now_s() - t0;
    std::ostringstream s;
    s << "graphs=300 worst_err=" << worst << " solver_failures=" << failures
      << " elapsed=" << static_cast<int>(elapsed) << "s";
    detail = s.str();
    return failures == 0 && worst <= kTol && elapsed <= kBudgetS;
}

// ---- 4. exact mixing closed form -------------------------------------------

bool criterion4(std::string& detail) {
    constexpr double kTauTol = 1e-6, kKernelTol = 1e-9;
    auto k2 = complete_graph(2);
    double tau = tau_mix_exact(k2, 0.25);
    double tau_err = std::fabs(tau - std::log(2.0) / 2.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        auto g = random_graph_sized(derive_seed(401, 1, i), 4, 50);
        for (double t : {0.1, 1.0, 10.0}) {
            u32 x = static_cast<u32>(i % g.vertex_count());
            auto got = heat_kernel_row(g, x, t);
            auto want = expm_row(g, x, t);
            for (std::size_t y = 0; y < got.size(); ++y)
                worst = std::max(worst, std::fabs(got[y] - want[y]));
        }
    }
    std::ostringstream s;
    s << "K2 tau err=" << tau_err << " kernel sup err=" << worst << " over 50 graphs";
    detail = s.str();
    return tau_err <= kTauTol && worst <= kKernelTol;
}

// ---- 5. Monte Carlo vs exact ------------------------------------------------

bool criterion5(std::string& detail) {
    constexpr u64 kWalkers = 100000;
    constexpr double kSigmas = 3.0, kAbsGapAtTau = 0.02;
    int se_violations = 0;
    double worst_gap_at_tau = 0.0, worst_sigma = 0.0;
    for (int i = 0; i < 20; ++i) {
        auto g = random_graph_sized(derive_seed(501, 1, i), 20, 200);
        double tau = tau_mix_exact(g, 0.25);
        u32 x = static_cast<u32>(std::max_element(g.degrees.begin(), g.degrees.end()) -
                                 g.degrees.begin());
        std::vector<double> grid = {0.2 * tau, 0.6 * tau, tau, 1.2 * tau};
        auto mc = simulate_ctrw(g, {x}, grid, kWalkers, derive_seed(505, 1, i));
        auto pi = stationary_distribution(g);
        for (std::size_t ti = 0; ti < grid.size(); ++ti) {
            double exact = tv_distance(heat_kernel_row(g, x, grid[ti]), pi);
            double gap = std::fabs(mc.tv[ti] - exact);
            double se = std::max(mc.tv_se[ti], 1e-12);
            worst_sigma = std::max(worst_sigma, gap / se);
            if (gap > kSigmas * se) ++se_violations;
            if (ti == 2) worst_gap_at_tau = std::max(worst_gap_at_tau, gap);
        }
    }
    std::ostringstream s;
    s << "graphs=20 worst gap/se=" << worst_sigma << " se_violations=" << se_violations
      << " worst |gap| at tau=" << worst_gap_at_tau;
    detail = s.str();
    return se_violations == 0 && worst_gap_at_tau <= kAbsGapAtTau;
}

// ---- 6. relaxation/mixing inequalities --------------------------------------

bool criterion6(std::string& detail) {
    constexpr double kEps = 0.25, kSlack = 2e-6;  // bisection time_tol headroom
    int lower_violations = 0, upper_violations = 0;
    for (int i = 0; i < 100; ++i) {
        auto g = random_graph_sized(derive_seed(601, 1, i), 5, 200);
        auto [sgn, abs2] = dense_lambda2(g);
        (void)abs2;
        double tau_rel = 1.0 / (1.0 - sgn);
        double best_func = 0.0;
        for (u32 v = 0; v < g.vertex_count(); ++v)
            best_func = std::max(best_func, distance_functional(g, v).value);
        if (tau_rel + 1e-12 < best_func) ++lower_violations;
        double tau_mix = tau_mix_exact(g, kEps);
        if ((tau_rel - 1.0) * std::log(1.0 / (2.0 * kEps)) > tau_mix + kSlack)
            ++upper_violations;
    }
    std::ostringstream s;
    s << "graphs=100 tau_rel>=pi-variance violations=" << lower_violations
      << " (tau_rel-1)ln(1/2eps)<=tau_mix violations=" << upper_violations;
    detail = s.str();
    return lower_violations == 0 && upper_violations == 0;
}

// ---- 7. conductance exhaustive oracle ---------------------------------------

bool criterion7(std::string& detail) {
    constexpr double kTol = 1e-12;
    int profile_violations = 0, cheeger_violations = 0, graphs = 0;
    for (int i = 0; i < 200; ++i) {
        auto g = random_graph_sized(derive_seed(701, 1, i), 3, 10);
        ++graphs;
        auto exact = exact_profile(g);
        auto heur = heuristic_profile(g, {200, true, derive_seed(702, 1, i)});
        for (std::size_t j = 0; j < exact.t_grid.size(); ++j) {
            // heuristic envelopes certify upper bounds on the true minimum
            if (heur.envelope[j] + kTol < exact.envelope[j]) ++profile_violations;
        }
        double h = cheeger_constant(g);
        auto [sgn, abs2] = dense_lambda2(g);
        (void)abs2;
        double gap = 1.0 - sgn;
        if (h * h / 2.0 > gap + kTol || gap > 2.0 * h + kTol) ++cheeger_violations;
    }
    std::ostringstream s;
    s << "graphs=" << graphs << " profile_violations=" << profile_violations
      << " cheeger_violations=" << cheeger_violations;
    detail = s.str();
    return profile_violations == 0 && cheeger_violations == 0;
}

// ---- 8. isoperimetry ---------------------------------------------------------

bool criterion8(std::string& detail) {
    constexpr u64 kSamples = 1000;
    constexpr double kDelta = 0.5, kFactor = 4.0;
    auto report_for = [&](double n) {
        SweepPlan plan;
        plan.cells.push_back({n, 2, 2.0, {1}});
        return run_iso(plan, kSamples, kDelta);
    };
    auto big = report_for(65536.0);
    auto mid = report_for(16384.0);
    u64 tiny_boundary = 0;
    for (const auto& s : big.samples)
        if (s.boundary < 1) ++tiny_boundary;
    for (const auto& s : mid.samples)
        if (s.boundary < 1) ++tiny_boundary;
    double lo = std::min(big.min_ratio, mid.min_ratio);
    double hi = std::max(big.min_ratio, mid.min_ratio);
    bool constant_order = lo > 0.0 && hi / lo < kFactor;

    // dense-regime variant, uniform non-connected subsets with |A| >= r^2
    double n = 65536.0;
    double r_dense = 1.5 * std::sqrt(2.0 * std::log(n));
    SweepPlan dense_plan;
    dense_plan.cells.push_back({n, 2, r_dense, {1}});
    auto dense = run_large_radii_iso(dense_plan, kSamples);

    std::ostringstream s;
    s << "min_ratio(65536)=" << big.min_ratio << " min_ratio(16384)=" << mid.min_ratio
      << " boundary<1 count=" << tiny_boundary << " dense min_ratio=" << dense.min_ratio;
    detail = s.str();
    return big.samples.size() == kSamples && mid.samples.size() == kSamples &&
           big.min_ratio > 0.0 && mid.min_ratio > 0.0 && tiny_boundary == 0 && constant_order &&
           dense.samples.size() == kSamples && dense.min_ratio > 0.0;
}

// ---- 9. lattice layer --------------------------------------------------------

bool criterion9(std::string& detail) {
    // (a) exhaustive boundary check on the 4x4 box
    Box box4 = Box::cube(2, 4);
    const u32 n4 = static_cast<u32>(box4.size());
    u64 boundary_mismatches = 0;
    for (u32 mask = 0; mask < (1u << n4); ++mask) {
        std::vector<u32> K;
        std::vector<char> in(n4, 0);
        for (u32 s = 0; s < n4; ++s)
            if (mask & (1u << s)) {
                K.push_back(s);
                in[s] = 1;
            }
        auto b = boundaries(box4, K);
        std::set<u32> outer_l1, inner_l1, outer_star, inner_star;
        u64 edges_l1 = 0, edges_star = 0;
        for (u32 s = 0; s < n4; ++s) {
            auto c = box4.coords_of(s);
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    if (dx == 0 && dy == 0) continue;
                    std::vector<int> c2 = {c[0] + dx, c[1] + dy};
                    if (!box4.contains(c2)) continue;
                    u32 s2 = box4.index_of(c2);
                    bool l1 = std::abs(dx) + std::abs(dy) == 1;
                    if (in[s] && !in[s2]) {
                        if (l1) {
                            inner_l1.insert(s);
                            outer_l1.insert(s2);
                            ++edges_l1;
                        }
                        inner_star.insert(s);
                        outer_star.insert(s2);
                        ++edges_star;
                    }
                }
        }
        if (b.edges_l1.size() != edges_l1 || b.edges_star.size() != edges_star ||
            b.outer_l1.size() != outer_l1.size() || b.inner_l1.size() != inner_l1.size() ||
            b.outer_star.size() != outer_star.size() || b.inner_star.size() != inner_star.size())
            ++boundary_mismatches;
    }

    // (b) greedy matching bound on 10^3 random K in a 32x32 box
    Box box32 = Box::cube(2, 32);
    const u32 n32 = static_cast<u32>(box32.size());
    u64 matching_violations = 0;
    RngStream rng(derive_seed(901, 1, 0));
    for (int i = 0; i < 1000; ++i) {
        double density = 0.05 + 0.9 * rng.next_double();
        std::vector<u32> K;
        for (u32 s = 0; s < n32; ++s)
            if (rng.next_double() < density) K.push_back(s);
        auto b = boundaries(box32, K);
        auto match = greedy_disjoint_matching(box32, K);
        // vertex-disjointness of the matching
        std::set<u32> used;
        bool disjoint = true;
        for (auto [a, c] : match.edges)
            if (!used.insert(a).second || !used.insert(c).second) disjoint = false;
        if (!disjoint || 8 * match.edges.size() < b.edges_l1.size()) ++matching_violations;
    }

    // (c) monotone coupling of Bernoulli site fields under a shared seed
    u64 coupling_violations = 0;
    for (u64 seed : {11ull, 12ull, 13ull}) {
        SiteField prev;
        bool first = true;
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            auto field = sample_site_field(box32, p, seed);
            if (!first)
                for (u32 s = 0; s < n32; ++s)
                    if (prev.open[s] && !field.open[s]) ++coupling_violations;
            prev = field;
            first = false;
        }
    }

    std::ostringstream s;
    s << "boundary_mismatches=" << boundary_mismatches
      << " matching_violations=" << matching_violations
      << " coupling_violations=" << coupling_violations;
    detail = s.str();
    return boundary_mismatches == 0 && matching_violations == 0 && coupling_violations == 0;
}

// ---- 10. renormalization ------------------------------------------------------

bool criterion10(std::string& detail) {
    constexpr double kR2Min = 0.8, kBudgetS = 600.0;
    double t0 = now_s();
    SweepPlan plan;
    plan.cells.push_back({262144.0, 2, 1.5, {1, 2, 3}});
    auto report = run_renormalization(plan, {15.0, 20.0, 30.0, 40.0});
    double elapsed = now_s() - t0;
    bool increasing = true;
    for (std::size_t i = 1; i < report.fraction.size(); ++i)
        if (report.fraction[i] <= report.fraction[i - 1]) increasing = false;
    std::ostringstream s;
    s << "fractions=";
    for (double f : report.fraction) s << f << " ";
    s << "slope=" << report.log_gap_fit.slope << " R2=" << report.log_gap_fit.r_squared
      << " saturated=" << (report.saturated ? "yes" : "no")
      << " elapsed=" << static_cast<int>(elapsed) << "s";
    detail = s.str();
    return increasing && report.log_gap_fit.slope < 0.0 &&
           report.log_gap_fit.r_squared >= kR2Min && elapsed <= kBudgetS;
}

// ---- 11. d = 1 mode ------------------------------------------------------------

bool criterion11(std::string& detail) {
    constexpr double kSlopeLo = 0.8, kSlopeHi = 1.2;
    constexpr u64 kSuffixSamples = 1000;
    SweepPlan plan;
    for (double n : {16384.0, 32768.0, 65536.0, 131072.0})
        plan.cells.push_back({n, 1, 2.0 * std::log(n), {1, 2}});
    auto report = run_d1(plan, kSuffixSamples);
    u64 nonpositive = 0;
    for (double ratio : report.suffix_ratios)
        if (!(ratio > 0.0)) ++nonpositive;
    std::ostringstream s;
    s << "slope=" << report.fit.slope << " R2=" << report.fit.r_squared
      << " suffix_samples=" << report.suffix_ratios.size() << " nonpositive=" << nonpositive;
    detail = s.str();
    return report.fit.failures.empty() && report.fit.slope >= kSlopeLo &&
           report.fit.slope <= kSlopeHi && report.suffix_ratios.size() == kSuffixSamples &&
           nonpositive == 0;
}

// ---- 12. figure export ---------------------------------------------------------

bool criterion12(std::string& detail) {
    namespace fs = std::filesystem;
    RggConfig cfg{400.0, 2, 2.0, 7};
    auto g = build_rgg(sample_ppp(cfg), cfg.radius_r);
    std::vector<u32> A;  // left half-space cut
    for (u32 v = 0; v < g.vertex_count(); ++v)
        if (g.pos(v)[0] < 0.0) A.push_back(v);

    const std::string base = "/tmp/geomix_accept_fig";
    fs::remove_all(base + "_a");
    fs::remove_all(base + "_b");
    export_figure_csvs(g, A, base + "_a");
    export_figure_csvs(g, A, base + "_b");

    const std::vector<std::pair<std::string, std::string>> expected = {
        {"vertices.csv", "id,x,y,in_giant,in_A,in_Aprime"},
        {"edges.csv", "i,j"},
        {"tiles.csv", "flag,a,b,side"},
        {"gridlines.csv", "coordinate"},
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    int header_mismatches = 0, byte_mismatches = 0;
    for (const auto& [name, header] : expected) {
        std::string a = slurp(base + "_a/" + name);
        std::string b = slurp(base + "_b/" + name);
        if (a.substr(0, header.size() + 1) != header + "\n") ++header_mismatches;
        if (a.empty() || a != b) ++byte_mismatches;
    }
    std::ostringstream s;
    s << "header_mismatches=" << header_mismatches << " byte_mismatches=" << byte_mismatches;
    detail = s.str();
    return header_mismatches == 0 && byte_mismatches == 0;
}

struct Criterion {
    int id;
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "scaling law, d=2 r=2, slope of log tau_rel vs log(n/r^2)", criterion1},
    {2, "radius dependence at n=65536, r in {2,3,4,6}", criterion2},
    {3, "matrix-free lambda2 matches dense eigensolver (300 graphs)", criterion3},
    {4, "exact mixing: K2 closed form + uniformization vs expm", criterion4},
    {5, "Monte Carlo TV vs exact TV with bootstrap error bars", criterion5},
    {6, "tau_rel lower/upper mixing inequalities (100 graphs)", criterion6},
    {7, "conductance heuristics vs exhaustion + Cheeger sandwich", criterion7},
    {8, "isoperimetric ratio positivity and constant-order check", criterion8},
    {9, "lattice boundaries, greedy matching, monotone coupling", criterion9},
    {10, "renormalized useful-tile fraction increasing in M", criterion10},
    {11, "d=1 scaling slope and suffix-set boundary positivity", criterion11},
    {12, "figure CSV column orders and byte stability", criterion12},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        double t0 = now_s();
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed = now_s() - t0;
        std::printf("[%s] %2d %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    detail.c_str(), elapsed);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
