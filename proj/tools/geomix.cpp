// geomix: generate/analyze random geometric graphs and their walk spectra.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "geomix/conductance.hpp"
#include "geomix/harness.hpp"
#include "geomix/lattice.hpp"
#include "geomix/random.hpp"
#include "geomix/spectral.hpp"
#include "geomix/tiling.hpp"
#include "geomix/walk.hpp"

using namespace geomix;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    double n = 1024.0;
    int d = 2;
    double r = 2.0;
    u64 seed = 1;
    int seeds = 1;
    std::string out;
    double eps = 0.25;
    double tol = 1e-8;
    u64 budget = 1000;
    double delta = 0.5;
    std::string mode = "signed";
    std::vector<double> M = {20.0};
    std::string plan_file;
};

void add_graph_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--n", a.n, "target volume / expected point count");
    cmd->add_option("--d", a.d, "dimension");
    cmd->add_option("--r", a.r, "connection radius");
    cmd->add_option("--seed", a.seed, "master seed");
}

std::vector<u64> seed_list(const CommonArgs& a) {
    std::vector<u64> seeds;
    for (int i = 0; i < std::max(1, a.seeds); ++i) seeds.push_back(a.seed + i);
    return seeds;
}

SpatialGraph make_graph(const CommonArgs& a) {
    RggConfig cfg{a.n, a.d, a.r, a.seed};
    cfg.validate();
    auto pts = sample_ppp(cfg);
    return build_rgg(pts, a.r);
}

GiantSubgraph make_giant(const CommonArgs& a) {
    auto g = make_graph(a);
    return extract_giant(g, connected_components(g));
}

fs::path ensure_out(const CommonArgs& a, const char* fallback) {
    fs::path dir = a.out.empty() ? fs::path(fallback) : fs::path(a.out);
    fs::create_directories(dir);
    return dir;
}

void emit(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

SweepPlan plan_from_args(const CommonArgs& a, const std::vector<double>& ns, int d) {
    if (!a.plan_file.empty()) return plan_from_json_file(a.plan_file);
    SweepPlan plan;
    for (double n : ns) {
        SweepCell cell;
        cell.n = n;
        cell.d = d;
        cell.r = a.r;
        cell.seeds = seed_list(a);
        plan.cells.push_back(cell);
    }
    plan.tol = a.tol;
    plan.mode = a.mode;
    plan.validate();
    return plan;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random geometric graph walk laboratory"};
    app.require_subcommand(1);
    CommonArgs a;

    auto* generate = app.add_subcommand("generate", "sample a PPP and write the RGG1 binary");
    add_graph_flags(generate, a);
    generate->add_option("--out", a.out, "output directory");

    auto* giant = app.add_subcommand("giant", "component census of an instance");
    add_graph_flags(giant, a);
    giant->add_option("--out", a.out, "output directory");

    auto* spectrum = app.add_subcommand("spectrum", "lambda2 / relaxation time of the giant");
    add_graph_flags(spectrum, a);
    spectrum->add_option("--tol", a.tol, "eigensolver tolerance");
    spectrum->add_option("--mode", a.mode, "signed | abs");
    spectrum->add_option("--out", a.out, "output directory");

    std::string mix_mode = "exact";
    auto* mix = app.add_subcommand("mix", "TV-vs-time mixing profile");
    add_graph_flags(mix, a);
    mix->add_option("--eps", a.eps, "target TV for tau_mix");
    mix->add_option("--budget", a.budget, "MC walkers (mode=mc)");
    mix->add_option("--mode", mix_mode, "exact | mc");
    mix->add_option("--out", a.out, "output directory");

    std::string iso_mode = "connected";
    auto* iso = app.add_subcommand("iso", "isoperimetry sampling campaign");
    add_graph_flags(iso, a);
    iso->add_option("--delta", a.delta, "upper window margin");
    iso->add_option("--budget", a.budget, "number of sampled sets");
    iso->add_option("--mode", iso_mode, "connected | dense");
    iso->add_option("--out", a.out, "output directory");

    auto* tiles = app.add_subcommand("tiles", "good/useful tile classification at scale M");
    add_graph_flags(tiles, a);
    tiles->add_option("--M", a.M, "enlargement scale(s)");
    tiles->add_option("--out", a.out, "output directory");

    double perc_p = 0.7;
    auto* perc = app.add_subcommand("perc", "Bernoulli site percolation on Phi_m");
    perc->add_option("--n", a.n, "lattice volume m");
    perc->add_option("--d", a.d, "dimension");
    perc->add_option("--seed", a.seed, "field seed");
    perc->add_option("--p", perc_p, "open probability");

    auto* renorm = app.add_subcommand("renorm", "useful-tile fraction vs M");
    add_graph_flags(renorm, a);
    renorm->add_option("--seeds", a.seeds, "seeds per cell (seed..seed+k-1)");
    renorm->add_option("--M", a.M, "M grid");
    renorm->add_option("--out", a.out, "output directory");

    std::vector<double> scaling_ns;
    auto* scaling = app.add_subcommand("scaling", "tau_rel scaling fit");
    scaling->add_option("--plan", a.plan_file, "sweep plan JSON");
    scaling->add_option("--n", scaling_ns, "cell volumes (repeatable)");
    scaling->add_option("--d", a.d, "dimension");
    scaling->add_option("--r", a.r, "connection radius");
    scaling->add_option("--seed", a.seed, "first seed");
    scaling->add_option("--seeds", a.seeds, "seeds per cell");
    scaling->add_option("--tol", a.tol, "eigensolver tolerance");
    scaling->add_option("--mode", a.mode, "signed | abs");
    scaling->add_option("--out", a.out, "output directory");

    std::vector<double> d1_ns;
    auto* d1 = app.add_subcommand("d1", "d = 1 banded scaling campaign");
    d1->add_option("--plan", a.plan_file, "sweep plan JSON");
    d1->add_option("--n", d1_ns, "cell volumes (repeatable)");
    d1->add_option("--r", a.r, "radius multiplier: r = this * log n");
    d1->add_option("--seed", a.seed, "first seed");
    d1->add_option("--seeds", a.seeds, "seeds per cell");
    d1->add_option("--budget", a.budget, "suffix-set samples");
    d1->add_option("--out", a.out, "output directory");

    auto* exportfig = app.add_subcommand("export-fig", "figure CSVs for a tiny d=2 instance");
    add_graph_flags(exportfig, a);
    u64 fig_size = 0;
    exportfig->add_option("--budget", fig_size, "size of the sampled connected A (0 = half-space)");
    exportfig->add_option("--out", a.out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            auto g = make_graph(a);
            auto dir = ensure_out(a, ".");
            auto path = (dir / "graph.rgg1").string();
            write_rgg1(g, path);
            emit({{"vertices", g.vertex_count()},
                  {"edges", g.edge_count},
                  {"complete", g.complete_flag},
                  {"file", path}});
        } else if (*giant) {
            auto g = make_graph(a);
            auto census = component_census(g, connected_components(g));
            if (!a.out.empty())
                write_census_json(census, (ensure_out(a, ".") / "census.json").string());
            emit({{"giant_size", census.giant_size},
                  {"giant_edges", census.giant_edges},
                  {"giant_fraction", census.giant_fraction},
                  {"second_size", census.second_size},
                  {"second_over_logpow", census.second_over_logpow}});
        } else if (*spectrum) {
            auto giant_g = make_giant(a);
            SpectralResult res;
            if (a.d == 1) {
                auto sorted = reorder_by_coordinate(giant_g);
                if (has_interval_adjacency(sorted)) {
                    double lam = lambda2_signed_banded(sorted);
                    res.lambda2_signed = lam;
                    res.lambda2_abs = lam;  // abs not computed on the banded path
                    res.relax_signed = lam < 1.0 ? 1.0 / (1.0 - lam) : kInf;
                    res.relax_abs = res.relax_signed;
                    res.converged = true;
                } else {
                    res = lambda2(sorted, a.tol);
                }
            } else {
                res = lambda2(giant_g, a.tol);
            }
            emit({{"lambda2_signed", res.lambda2_signed},
                  {"lambda2_abs", res.lambda2_abs},
                  {"relax_signed", std::isfinite(res.relax_signed) ? json(res.relax_signed)
                                                                   : json("inf")},
                  {"relax_abs",
                   std::isfinite(res.relax_abs) ? json(res.relax_abs) : json("inf")},
                  {"iterations", res.iterations},
                  {"residual", res.residual},
                  {"bipartite", res.bipartite},
                  {"giant_size", giant_g.vertex_count()}});
        } else if (*mix) {
            auto giant_g = make_giant(a);
            MixProfile prof;
            if (mix_mode == "exact") {
                double tau = tau_mix_exact(giant_g, a.eps);
                std::vector<double> grid;
                double t0 = std::max(1e-3, 0.1 * tau);
                for (int i = 0; i < 16; ++i)
                    grid.push_back(t0 * std::pow(30.0 * tau / std::max(tau, t0), i / 15.0));
                prof = mix_profile_exact(giant_g, grid, {a.eps});
            } else {
                std::vector<u32> starts = {0};
                std::vector<double> grid;
                for (int i = 0; i < 12; ++i) grid.push_back(0.25 * std::pow(2.0, i * 0.75));
                prof = simulate_ctrw(giant_g, starts, grid, a.budget, a.seed);
            }
            auto dir = ensure_out(a, ".");
            write_mix_profile_csv(prof, (dir / "mix_profile.csv").string());
            json j = {{"method", prof.method},
                      {"giant_size", giant_g.vertex_count()},
                      {"file", (dir / "mix_profile.csv").string()}};
            if (!prof.tau_mix.empty()) j["tau_mix"] = prof.tau_mix.front();
            emit(j);
        } else if (*iso) {
            SweepPlan plan;
            SweepCell cell{a.n, a.d, a.r, seed_list(a)};
            plan.cells.push_back(cell);
            plan.delta = a.delta;
            IsoReport report = iso_mode == "dense" ? run_large_radii_iso(plan, a.budget)
                                                 : run_iso(plan, a.budget, a.delta);
            auto dir = ensure_out(a, ".");
            write_iso_csv(report, (dir / "iso.csv").string());
            emit({{"samples", report.samples.size()},
                  {"min_ratio", report.min_ratio},
                  {"median_ratio", report.median_ratio},
                  {"giant_size", report.giant_size},
                  {"literal_lower_bound", report.literal_lower_bound},
                  {"window_rejections", report.window_rejections}});
        } else if (*tiles) {
            auto g = make_graph(a);
            auto cls = classify_good_useful(g, a.M.front());
            u64 good = 0, useful = 0, clipped = 0;
            for (std::size_t t = 0; t < cls.tiling.tile_count(); ++t) {
                good += cls.good[t];
                useful += cls.useful[t];
                clipped += cls.clipped[t];
            }
            emit({{"M", a.M.front()},
                  {"rho", cls.tiling.rho},
                  {"tiles", cls.tiling.tile_count()},
                  {"good", good},
                  {"useful", useful},
                  {"clipped", clipped}});
        } else if (*perc) {
            auto field = sample_site_field(a.n, a.d, perc_p, a.seed);
            auto comp = largest_open_component(field);
            u64 open = 0;
            for (char o : field.open) open += o;
            emit({{"sites", field.open.size()},
                  {"open", open},
                  {"largest_component", comp.size()},
                  {"largest_fraction",
                   static_cast<double>(comp.size()) / std::max<std::size_t>(1, field.open.size())}});
        } else if (*renorm) {
            SweepPlan plan;
            plan.cells.push_back({a.n, a.d, a.r, seed_list(a)});
            auto report = run_renormalization(plan, a.M);
            json j = {{"M", report.M_grid},
                      {"fraction", report.fraction},
                      {"fit_slope", report.log_gap_fit.slope},
                      {"fit_r2", report.log_gap_fit.r_squared},
                      {"p_hat", report.p_hat},
                      {"useful_largest_frac", report.useful_largest_frac},
                      {"bernoulli_largest_frac", report.bernoulli_largest_frac},
                      {"saturated", report.saturated}};
            emit(j);
        } else if (*scaling) {
            std::vector<double> ns = scaling_ns;
            if (ns.empty() && a.plan_file.empty())
                ns = {4096, 8192, 16384, 32768, 65536};
            auto plan = plan_from_args(a, ns, a.d);
            auto fit = run_scaling(plan);
            if (!a.out.empty())
                write_scaling_csv(fit, (ensure_out(a, ".") / "scaling.csv").string());
            emit({{"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"r_squared", fit.r_squared},
                  {"cells", fit.points.size()},
                  {"failures", fit.failures}});
        } else if (*d1) {
            SweepPlan plan;
            if (!a.plan_file.empty()) {
                plan = plan_from_json_file(a.plan_file);
            } else {
                std::vector<double> ns = d1_ns;
                if (ns.empty()) ns = {16384, 32768, 65536, 131072};
                for (double n : ns)
                    plan.cells.push_back({n, 1, a.r * std::log(n), seed_list(a)});
                plan.validate();
            }
            auto report = run_d1(plan, a.budget);
            double min_ratio = report.suffix_ratios.empty()
                                   ? 0.0
                                   : *std::min_element(report.suffix_ratios.begin(),
                                                       report.suffix_ratios.end());
            if (!a.out.empty())
                write_scaling_csv(report.fit, (ensure_out(a, ".") / "d1_scaling.csv").string());
            emit({{"slope", report.fit.slope},
                  {"r_squared", report.fit.r_squared},
                  {"cells", report.fit.points.size()},
                  {"suffix_samples", report.suffix_ratios.size()},
                  {"min_suffix_ratio", min_ratio},
                  {"complete_flag", report.complete_flag}});
        } else if (*exportfig) {
            auto g = make_graph(a);
            auto labeling = connected_components(g);
            std::vector<u32> A;
            if (fig_size > 0) {
                // seeded connected ball of about --budget giant vertices
                auto giant_g = extract_giant(g, labeling);
                RngStream rng(derive_seed(a.seed, 5, 1));
                std::vector<char> in(giant_g.vertex_count(), 0);
                std::vector<u32> frontier;
                u32 start = static_cast<u32>(rng.next_below(giant_g.vertex_count()));
                in[start] = 1;
                std::vector<u32> members = {start};
                for (u64 e = giant_g.offsets[start]; e < giant_g.offsets[start + 1]; ++e)
                    frontier.push_back(giant_g.neighbors[e]);
                while (members.size() < fig_size && !frontier.empty()) {
                    std::size_t pick = rng.next_below(frontier.size());
                    u32 v = frontier[pick];
                    frontier[pick] = frontier.back();
                    frontier.pop_back();
                    if (in[v]) continue;
                    in[v] = 1;
                    members.push_back(v);
                    for (u64 e = giant_g.offsets[v]; e < giant_g.offsets[v + 1]; ++e)
                        if (!in[giant_g.neighbors[e]]) frontier.push_back(giant_g.neighbors[e]);
                }
                for (u32 v : members) A.push_back(giant_g.global_ids[v]);
                std::sort(A.begin(), A.end());
            } else {
                for (u32 v = 0; v < g.vertex_count(); ++v)
                    if (labeling.labels[v] == labeling.giant_label && g.points.point(v)[0] < 0.0)
                        A.push_back(v);
            }
            auto dir = ensure_out(a, "figure");
            export_figure_csvs(g, A, dir.string());
            emit({{"out", dir.string()}, {"A_size", A.size()}});
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
