#include "geomix/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"

#include "geomix/common.hpp"
#include "geomix/lattice.hpp"
#include "geomix/random.hpp"
#include "geomix/spectral.hpp"

namespace geomix {

namespace {

using nlohmann::json;

constexpr u64 kSeedPurposeIso = 5;
constexpr u64 kSeedPurposeIsoDense = 6;
constexpr u64 kSeedPurposeSuffix = 7;

double median(std::vector<double> v) {
    if (v.empty()) throw Error(ErrCode::EmptySet, "median of nothing");
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

GiantSubgraph build_giant(const SweepCell& cell, u64 seed) {
    RggConfig cfg{cell.n, cell.d, cell.r, seed};
    cfg.validate();
    auto pts = sample_ppp(cfg);
    auto graph = build_rgg(pts, cell.r);
    return extract_giant(graph, connected_components(graph));
}

double tau_rel_of(const GiantSubgraph& giant, const std::string& mode, double tol) {
    auto res = lambda2(giant, tol);
    double tau = mode == "abs" ? res.relax_abs : res.relax_signed;
    if (!std::isfinite(tau) || tau <= 0.0)
        throw Error(ErrCode::Domain, "degenerate relaxation time");
    return tau;
}

// Connected BFS-ball sample of about `target` giant vertices.
std::vector<u32> grow_ball(const GiantSubgraph& g, RngStream& rng, std::size_t target) {
    const std::size_t n = g.vertex_count();
    std::vector<char> in_A(n, 0);
    std::vector<u32> members, frontier;
    u32 start = static_cast<u32>(rng.next_below(n));
    in_A[start] = 1;
    members.push_back(start);
    for (u64 e = g.offsets[start]; e < g.offsets[start + 1]; ++e)
        frontier.push_back(g.neighbors[e]);
    while (members.size() < target && !frontier.empty()) {
        std::size_t pick = rng.next_below(frontier.size());
        u32 v = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        if (in_A[v]) continue;
        in_A[v] = 1;
        members.push_back(v);
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
            if (!in_A[g.neighbors[e]]) frontier.push_back(g.neighbors[e]);
    }
    std::sort(members.begin(), members.end());
    return members;
}

void finish_iso(IsoReport& report) {
    std::vector<double> ratios;
    for (const auto& s : report.samples) ratios.push_back(s.ratio);
    if (!ratios.empty()) {
        report.min_ratio = *std::min_element(ratios.begin(), ratios.end());
        report.median_ratio = median(ratios);
    }
}

}  // namespace

void SweepPlan::validate() const {
    if (cells.empty()) throw Error(ErrCode::ConfigError, "plan has no cells");
    for (const auto& cell : cells) {
        RggConfig cfg{cell.n, cell.d, cell.r, cell.seeds.empty() ? 0 : cell.seeds.front()};
        cfg.validate();
        if (cell.seeds.empty()) throw Error(ErrCode::ConfigError, "cell has no seeds");
        std::set<u64> distinct(cell.seeds.begin(), cell.seeds.end());
        if (distinct.size() != cell.seeds.size())
            throw Error(ErrCode::ConfigError, "cell seeds must be distinct");
    }
    static const std::set<std::string> kinds = {"relax", "mix_mc", "iso", "tiles", "perc", "chem"};
    if (!kinds.count(measurement))
        throw Error(ErrCode::ConfigError, "unknown measurement " + measurement);
    if (mode != "signed" && mode != "abs")
        throw Error(ErrCode::ConfigError, "mode must be signed or abs");
}

SweepPlan plan_from_json_text(const std::string& text) {
    json j = json::parse(text);
    SweepPlan plan;
    for (const auto& c : j.at("cells")) {
        SweepCell cell;
        cell.n = c.at("n").get<double>();
        cell.d = c.value("d", 2);
        cell.r = c.at("r").get<double>();
        cell.seeds = c.at("seeds").get<std::vector<u64>>();
        plan.cells.push_back(std::move(cell));
    }
    plan.measurement = j.value("measurement", plan.measurement);
    plan.out_dir = j.value("out", plan.out_dir);
    if (j.contains("t_grid")) plan.t_grid = j["t_grid"].get<std::vector<double>>();
    plan.budget = j.value("budget", plan.budget);
    plan.eps = j.value("eps", plan.eps);
    plan.tol = j.value("tol", plan.tol);
    plan.delta = j.value("delta", plan.delta);
    plan.mode = j.value("mode", plan.mode);
    plan.validate();
    return plan;
}

SweepPlan plan_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrCode::ConfigError, "cannot open plan " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return plan_from_json_text(buf.str());
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw Error(ErrCode::DimensionMismatch, "fit_line sizes");
    if (xs.size() < 2) throw Error(ErrCode::ConfigError, "fit needs >= 2 points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error(ErrCode::Domain, "degenerate predictor");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = 0, ss_res = 0, ybar = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

ScalingFit fit_scaling(const std::vector<ScalingPoint>& points) {
    if (points.size() < 4) throw Error(ErrCode::ConfigError, "scaling fit needs >= 4 cells");
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        xs.push_back(p.log_predictor);
        ys.push_back(p.log_response);
    }
    auto line = fit_line(xs, ys);
    ScalingFit fit;
    fit.points = points;
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r_squared = line.r_squared;
    return fit;
}

ScalingFit run_scaling(const SweepPlan& plan) {
    plan.validate();
    if (plan.measurement != "relax")
        throw Error(ErrCode::ConfigError, "run_scaling expects measurement=relax");

    struct Job {
        std::size_t cell;
        u64 seed;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < plan.cells.size(); ++c)
        for (u64 seed : plan.cells[c].seeds) jobs.push_back({c, seed});

    std::vector<std::vector<double>> responses(plan.cells.size());
    std::vector<std::string> failures;
    std::mutex mtx;
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto& cell = plan.cells[jobs[i].cell];
        try {
            auto giant = build_giant(cell, jobs[i].seed);
            double tau = tau_rel_of(giant, plan.mode, plan.tol);
            std::lock_guard<std::mutex> lock(mtx);
            responses[jobs[i].cell].push_back(tau);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(mtx);
            std::ostringstream msg;
            msg << "cell n=" << cell.n << " r=" << cell.r << " seed=" << jobs[i].seed << ": "
                << e.what();
            failures.push_back(msg.str());
        }
    });

    std::vector<ScalingPoint> points;
    for (std::size_t c = 0; c < plan.cells.size(); ++c) {
        if (responses[c].empty()) continue;
        const auto& cell = plan.cells[c];
        ScalingPoint p;
        p.n = cell.n;
        p.r = cell.r;
        std::sort(responses[c].begin(), responses[c].end());
        p.responses = responses[c];
        p.log_predictor = std::log(std::pow(cell.n, 2.0 / cell.d) / (cell.r * cell.r));
        p.log_response = std::log(median(responses[c]));
        points.push_back(std::move(p));
    }
    auto fit = fit_scaling(points);
    fit.failures = std::move(failures);
    return fit;
}

IsoReport run_iso(const SweepPlan& plan, u64 samples, double delta, u64 size_lo, double C1) {
    plan.validate();
    const auto& cell = plan.cells.front();
    if (cell.d < 2) throw Error(ErrCode::ConfigError, "run_iso requires d >= 2");
    auto giant = build_giant(cell, cell.seeds.front());

    IsoReport report;
    report.giant_size = giant.vertex_count();
    report.literal_lower_bound =
        C1 * std::pow(std::pow(cell.r, 2 * cell.d + 1) *
                          std::pow(std::log(cell.n), static_cast<double>(cell.d) / (cell.d - 1)),
                      cell.d);
    report.practical_lower_bound = size_lo;
    report.upper_bound = static_cast<u64>((1.0 - delta) * giant.vertex_count());
    if (report.upper_bound < size_lo) return report;  // empty window: reported, not fatal

    RngStream rng(derive_seed(cell.seeds.front(), kSeedPurposeIso, 0));
    double span = std::log(static_cast<double>(report.upper_bound) / size_lo);
    for (u64 s = 0; s < samples; ++s) {
        std::vector<u32> A;
        for (int attempt = 0; attempt < 10; ++attempt) {
            std::size_t target = static_cast<std::size_t>(
                std::round(size_lo * std::exp(span * rng.next_double())));
            A = grow_ball(giant, rng, target);
            if (A.size() >= size_lo && A.size() <= report.upper_bound) break;
            A.clear();
            ++report.window_rejections;
        }
        if (A.empty()) continue;
        IsoSample smp;
        smp.size = A.size();
        smp.boundary = boundary_edge_count(giant, A);
        smp.ratio = smp.boundary / (std::pow(static_cast<double>(smp.size),
                                             (cell.d - 1.0) / cell.d) *
                                    std::pow(cell.r, cell.d + 1));
        smp.meets_literal_lo = smp.size >= report.literal_lower_bound;
        smp.meets_practical_lo = true;
        smp.meets_hi = true;
        smp.connected = true;
        report.samples.push_back(smp);
    }
    finish_iso(report);
    return report;
}

IsoReport run_large_radii_iso(const SweepPlan& plan, u64 samples, double c2) {
    plan.validate();
    const auto& cell = plan.cells.front();
    auto giant = build_giant(cell, cell.seeds.front());

    IsoReport report;
    report.giant_size = giant.vertex_count();
    report.practical_lower_bound =
        std::max<u64>(1, static_cast<u64>(std::ceil(c2 * std::pow(cell.r, cell.d))));
    report.literal_lower_bound = static_cast<double>(report.practical_lower_bound);
    report.upper_bound = static_cast<u64>((1.0 - plan.delta) * giant.vertex_count());
    if (report.upper_bound < report.practical_lower_bound) return report;

    RngStream rng(derive_seed(cell.seeds.front(), kSeedPurposeIsoDense, 0));
    const std::size_t n = giant.vertex_count();
    std::vector<u32> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<u32>(i);
    double span = std::log(static_cast<double>(report.upper_bound) /
                           report.practical_lower_bound);
    for (u64 s = 0; s < samples; ++s) {
        std::size_t size = static_cast<std::size_t>(std::round(
            report.practical_lower_bound * std::exp(span * rng.next_double())));
        size = std::clamp<std::size_t>(size, report.practical_lower_bound, report.upper_bound);
        // partial Fisher-Yates: uniform subset, not necessarily connected
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t j = i + rng.next_below(n - i);
            std::swap(perm[i], perm[j]);
        }
        std::vector<u32> A(perm.begin(), perm.begin() + size);
        std::sort(A.begin(), A.end());
        IsoSample smp;
        smp.size = size;
        smp.boundary = boundary_edge_count(giant, A);
        smp.ratio = smp.boundary / (std::pow(static_cast<double>(size), (cell.d - 1.0) / cell.d) *
                                    std::pow(cell.r, cell.d + 1));
        smp.meets_literal_lo = true;
        smp.meets_practical_lo = true;
        smp.meets_hi = true;
        smp.connected = false;
        report.samples.push_back(smp);
    }
    finish_iso(report);
    return report;
}

RenormReport run_renormalization(const SweepPlan& plan, const std::vector<double>& M_grid) {
    plan.validate();
    if (M_grid.empty()) throw Error(ErrCode::ConfigError, "empty M grid");
    const auto& cell = plan.cells.front();

    // graphs are M-independent: build once per seed
    std::vector<SpatialGraph> graphs;
    for (u64 seed : cell.seeds) {
        RggConfig cfg{cell.n, cell.d, cell.r, seed};
        auto pts = sample_ppp(cfg);
        graphs.push_back(build_rgg(pts, cell.r));
    }

    RenormReport report;
    report.M_grid = M_grid;
    TileClassification last_cls;
    for (double M : M_grid) {
        u64 useful = 0, total = 0;
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            auto cls = classify_good_useful(graphs[gi], M);
            for (std::size_t t = 0; t < cls.tiling.tile_count(); ++t) {
                if (cls.clipped[t]) continue;
                ++total;
                useful += cls.useful[t];
            }
            if (gi == 0 && M == M_grid.back()) last_cls = std::move(cls);
        }
        double fraction = total ? static_cast<double>(useful) / total : 0.0;
        if (fraction >= 1.0 && total > 0) {
            fraction = 1.0 - 0.5 / total;  // half-count floor keeps log(1-f) finite
            report.saturated = true;
        }
        report.useful_counts.push_back(useful);
        report.tile_counts.push_back(total);
        report.fraction.push_back(fraction);
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < M_grid.size(); ++i) {
        xs.push_back(M_grid[i]);
        ys.push_back(std::log(1.0 - report.fraction[i]));
    }
    report.log_gap_fit = fit_line(xs, ys);
    report.p_hat = report.fraction.back();

    // dominated-percolation comparison at the largest M on the first seed
    if (last_cls.tiling.tile_count() > 0) {
        SiteField useful_field;
        useful_field.box = last_cls.tiling.box;
        useful_field.p = report.p_hat;
        useful_field.seed = cell.seeds.front();
        useful_field.open.assign(last_cls.useful.begin(), last_cls.useful.end());
        auto comp = largest_open_component(useful_field);
        report.useful_largest_frac =
            static_cast<double>(comp.size()) / last_cls.tiling.tile_count();
        auto bern = sample_site_field(last_cls.tiling.box, report.p_hat, cell.seeds.front());
        auto bern_comp = largest_open_component(bern);
        report.bernoulli_largest_frac =
            static_cast<double>(bern_comp.size()) / last_cls.tiling.tile_count();
    }
    return report;
}

GiantSubgraph reorder_by_coordinate(const GiantSubgraph& g, int axis) {
    if (axis < 0 || axis >= g.dim) throw Error(ErrCode::Domain, "axis out of range");
    const std::size_t n = g.vertex_count();
    std::vector<u32> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<u32>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](u32 a, u32 b) { return g.pos(a)[axis] < g.pos(b)[axis]; });
    std::vector<u32> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = static_cast<u32>(i);

    GiantSubgraph out;
    out.dim = g.dim;
    out.side = g.side;
    out.radius = g.radius;
    out.volume_n = g.volume_n;
    out.edge_count = g.edge_count;
    out.local_of_global = g.local_of_global;
    out.global_ids.resize(n);
    out.degrees.resize(n);
    out.coords.resize(n * g.dim);
    out.offsets.assign(n + 1, 0);
    for (std::size_t nv = 0; nv < n; ++nv) {
        u32 ov = order[nv];
        out.global_ids[nv] = g.global_ids[ov];
        out.local_of_global[g.global_ids[ov]] = static_cast<i64>(nv);
        out.degrees[nv] = g.degrees[ov];
        for (int k = 0; k < g.dim; ++k) out.coords[nv * g.dim + k] = g.pos(ov)[k];
        out.offsets[nv + 1] = out.offsets[nv] + g.degrees[ov];
    }
    out.neighbors.resize(g.neighbors.size());
    for (std::size_t nv = 0; nv < n; ++nv) {
        u32 ov = order[nv];
        u64 w = out.offsets[nv];
        for (u64 e = g.offsets[ov]; e < g.offsets[ov + 1]; ++e)
            out.neighbors[w++] = rank[g.neighbors[e]];
        std::sort(out.neighbors.begin() + out.offsets[nv],
                  out.neighbors.begin() + out.offsets[nv + 1]);
    }
    return out;
}

D1Report run_d1(const SweepPlan& plan, u64 suffix_samples) {
    plan.validate();
    for (const auto& cell : plan.cells)
        if (cell.d != 1) throw Error(ErrCode::ConfigError, "run_d1 requires d = 1 cells");

    D1Report report;
    std::vector<ScalingPoint> points;
    std::mutex mtx;
    struct Job {
        std::size_t cell;
        u64 seed;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < plan.cells.size(); ++c)
        for (u64 seed : plan.cells[c].seeds) jobs.push_back({c, seed});
    std::vector<std::vector<double>> responses(plan.cells.size());
    std::vector<std::string> failures;
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto& cell = plan.cells[jobs[i].cell];
        try {
            auto giant = reorder_by_coordinate(build_giant(cell, jobs[i].seed));
            double lam;
            if (has_interval_adjacency(giant))
                lam = lambda2_signed_banded(giant);
            else
                lam = lambda2(giant, plan.tol).lambda2_signed;
            if (lam >= 1.0 - 1e-15) throw Error(ErrCode::Domain, "vanishing gap");
            double tau = 1.0 / (1.0 - lam);
            std::lock_guard<std::mutex> lock(mtx);
            responses[jobs[i].cell].push_back(tau);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(mtx);
            failures.push_back(e.what());
        }
    });
    for (std::size_t c = 0; c < plan.cells.size(); ++c) {
        if (responses[c].empty()) continue;
        const auto& cell = plan.cells[c];
        if (cell.r >= cell.n) report.complete_flag = true;
        ScalingPoint p;
        p.n = cell.n;
        p.r = cell.r;
        std::sort(responses[c].begin(), responses[c].end());
        p.responses = responses[c];
        p.log_predictor = std::log(cell.n * cell.n / (cell.r * cell.r));
        p.log_response = std::log(median(responses[c]));
        points.push_back(std::move(p));
    }
    report.fit = fit_scaling(points);
    report.fit.failures = std::move(failures);

    // suffix sets on the first cell's first seed
    const auto& cell = plan.cells.front();
    auto giant = reorder_by_coordinate(build_giant(cell, cell.seeds.front()));
    RngStream rng(derive_seed(cell.seeds.front(), kSeedPurposeSuffix, 0));
    const std::size_t n = giant.vertex_count();
    for (u64 s = 0; s < suffix_samples; ++s) {
        std::size_t k = 1 + rng.next_below(std::max<std::size_t>(1, n / 2));
        std::vector<u32> A(k);
        for (std::size_t i = 0; i < k; ++i) A[i] = static_cast<u32>(n - k + i);
        double boundary = static_cast<double>(boundary_edge_count(giant, A));
        report.suffix_ratios.push_back(boundary / (cell.r * cell.r));
    }
    return report;
}

void export_figure_csvs(const SpatialGraph& g, const std::vector<u32>& A,
                        const std::string& dir) {
    const int d = g.points.config.dim_d;
    if (d != 2) throw Error(ErrCode::Unsupported, "figure export is d = 2 only");
    std::filesystem::create_directories(dir);

    auto labeling = connected_components(g);
    std::vector<char> in_giant(g.vertex_count(), 0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        in_giant[v] = labeling.labels[v] == labeling.giant_label;
    std::vector<char> in_A(g.vertex_count(), 0);
    for (u32 v : A) in_A[v] = 1;
    auto a_prime = interior_set(g, A);
    std::vector<char> in_Ap(g.vertex_count(), 0);
    for (u32 v : a_prime) in_Ap[v] = 1;

    auto open_csv = [&](const char* name) {
        std::ofstream out(std::filesystem::path(dir) / name);
        if (!out) throw Error(ErrCode::ConfigError, std::string("cannot open ") + name);
        out.precision(17);
        return out;
    };

    auto vertices = open_csv("vertices.csv");
    vertices << "id,x,y,in_giant,in_A,in_Aprime\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        vertices << v << ',' << g.points.point(v)[0] << ',' << g.points.point(v)[1] << ','
                 << int(in_giant[v]) << ',' << int(in_A[v]) << ',' << int(in_Ap[v]) << '\n';

    auto edges = open_csv("edges.csv");
    edges << "i,j\n";
    for (u32 v = 0; v < g.vertex_count(); ++v)
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
            if (g.neighbors[e] > v) edges << v << ',' << g.neighbors[e] << '\n';

    double rho = compute_r_d(g.points.config.volume_n, d, g.radius);
    auto tiling = build_tiling(g, rho);
    auto L_A = tiles_of_set(tiling, A);
    auto T_A = dense_tiles(tiling, A);
    std::vector<char> in_T(tiling.tile_count(), 0);
    for (u32 t : T_A) in_T[t] = 1;

    auto tiles = open_csv("tiles.csv");
    tiles << "flag,a,b,side\n";
    for (u32 t : L_A) {
        double lo[2], hi[2];
        tiling.tile_bounds(t, lo, hi);
        tiles << int(in_T[t]) << ',' << lo[0] << ',' << lo[1] << ',' << rho << '\n';
    }

    auto gridlines = open_csv("gridlines.csv");
    gridlines << "coordinate\n";
    int imax = tiling.box.hi[0];
    for (int i = -imax; i <= imax + 1; ++i)
        gridlines << (i - 0.5) * rho << '\n';
}

double kl_tail(double alpha, double p) {
    if (alpha <= 0.0 || alpha >= 1.0 || p <= 0.0 || p >= 1.0)
        throw Error(ErrCode::Domain, "kl_tail needs arguments in (0,1)");
    return alpha * std::log(alpha / p) + (1.0 - alpha) * std::log((1.0 - alpha) / (1.0 - p));
}

void write_census_json(const CensusReport& census, const std::string& path) {
    json j;
    j["n"] = census.n;
    j["d"] = census.d;
    j["r"] = census.r;
    j["seed"] = census.seed;
    j["total_vertices"] = census.total_vertices;
    j["giant_size"] = census.giant_size;
    j["giant_edges"] = census.giant_edges;
    j["second_size"] = census.second_size;
    j["giant_fraction"] = census.giant_fraction;
    j["second_over_logpow"] = census.second_over_logpow;
    std::ofstream out(path);
    if (!out) throw Error(ErrCode::ConfigError, "cannot open " + path);
    out << j.dump(2) << '\n';
}

void write_scaling_csv(const ScalingFit& fit, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrCode::ConfigError, "cannot open " + path);
    out.precision(17);
    out << "n,r,log_predictor,log_response,seed_min,seed_max\n";
    for (const auto& p : fit.points)
        out << p.n << ',' << p.r << ',' << p.log_predictor << ',' << p.log_response << ','
            << p.responses.front() << ',' << p.responses.back() << '\n';
}

void write_iso_csv(const IsoReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrCode::ConfigError, "cannot open " + path);
    out.precision(17);
    out << "size,boundary,ratio,meets_literal_lo,meets_practical_lo,meets_hi,connected\n";
    for (const auto& s : report.samples)
        out << s.size << ',' << s.boundary << ',' << s.ratio << ',' << int(s.meets_literal_lo)
            << ',' << int(s.meets_practical_lo) << ',' << int(s.meets_hi) << ','
            << int(s.connected) << '\n';
}

}  // namespace geomix
