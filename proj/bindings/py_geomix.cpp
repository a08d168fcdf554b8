#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geomix/conductance.hpp"
#include "geomix/harness.hpp"
#include "geomix/lattice.hpp"
#include "geomix/random.hpp"
#include "geomix/spectral.hpp"
#include "geomix/tiling.hpp"
#include "geomix/walk.hpp"

namespace py = pybind11;
using namespace geomix;

namespace {

SpatialGraph generate(double n, int d, double r, u64 seed) {
    RggConfig cfg{n, d, r, seed};
    cfg.validate();
    auto pts = sample_ppp(cfg);
    return build_rgg(pts, r);
}

py::dict spectral_dict(const SpectralResult& res) {
    py::dict out;
    out["lambda2_abs"] = res.lambda2_abs;
    out["lambda2_signed"] = res.lambda2_signed;
    out["relax_abs"] = res.relax_abs;
    out["relax_signed"] = res.relax_signed;
    out["iterations"] = res.iterations;
    out["residual"] = res.residual;
    out["bipartite"] = res.bipartite;
    out["converged"] = res.converged;
    return out;
}

py::dict profile_dict(const MixProfile& prof) {
    py::dict out;
    out["method"] = prof.method;
    out["t_grid"] = prof.t_grid;
    out["tv"] = prof.tv;
    out["tv_lo"] = prof.tv_lo;
    out["tv_hi"] = prof.tv_hi;
    out["tv_se"] = prof.tv_se;
    out["eps_list"] = prof.eps_list;
    out["tau_mix"] = prof.tau_mix;
    out["starts"] = prof.starts;
    out["extremal_heuristic"] = prof.extremal_heuristic;
    return out;
}

py::dict conductance_dict(const ConductanceProfile& prof) {
    py::dict out;
    out["t_grid"] = prof.t_grid;
    out["phi"] = prof.phi;
    out["envelope"] = prof.envelope;
    out["witness_kind"] = prof.witness_kind;
    out["witness"] = prof.witness;
    out["pi0"] = prof.pi0;
    out["pi1"] = prof.pi1;
    return out;
}

py::dict scaling_dict(const ScalingFit& fit) {
    py::dict out;
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["r_squared"] = fit.r_squared;
    out["failures"] = fit.failures;
    py::list points;
    for (const auto& p : fit.points) {
        py::dict pt;
        pt["n"] = p.n;
        pt["r"] = p.r;
        pt["log_predictor"] = p.log_predictor;
        pt["log_response"] = p.log_response;
        pt["responses"] = p.responses;
        points.append(pt);
    }
    out["points"] = points;
    return out;
}

py::dict iso_dict(const IsoReport& report) {
    py::dict out;
    out["min_ratio"] = report.min_ratio;
    out["median_ratio"] = report.median_ratio;
    out["giant_size"] = report.giant_size;
    out["literal_lower_bound"] = report.literal_lower_bound;
    out["practical_lower_bound"] = report.practical_lower_bound;
    out["upper_bound"] = report.upper_bound;
    out["window_rejections"] = report.window_rejections;
    py::list sizes, boundaries, ratios;
    for (const auto& s : report.samples) {
        sizes.append(s.size);
        boundaries.append(s.boundary);
        ratios.append(s.ratio);
    }
    out["sizes"] = sizes;
    out["boundaries"] = boundaries;
    out["ratios"] = ratios;
    return out;
}

}  // namespace

PYBIND11_MODULE(_geomix, m) {
    m.doc() = "random geometric graph walk laboratory";

    py::register_exception<Error>(m, "GeomixError");

    py::class_<SpatialGraph>(m, "Graph")
        .def_property_readonly("vertex_count", [](const SpatialGraph& g) { return g.vertex_count(); })
        .def_property_readonly("edge_count", [](const SpatialGraph& g) { return g.edge_count; })
        .def_property_readonly("complete", [](const SpatialGraph& g) { return g.complete_flag; })
        .def("position",
             [](const SpatialGraph& g, u32 v) {
                 if (v >= g.vertex_count()) throw Error(ErrCode::Domain, "vertex out of range");
                 const double* p = g.points.point(v);
                 return std::vector<double>(p, p + g.points.config.dim_d);
             })
        .def("neighbors", [](const SpatialGraph& g, u32 v) {
            if (v >= g.vertex_count()) throw Error(ErrCode::Domain, "vertex out of range");
            return std::vector<u32>(g.neighbors.begin() + g.offsets[v],
                                    g.neighbors.begin() + g.offsets[v + 1]);
        });

    py::class_<GiantSubgraph>(m, "Giant")
        .def_property_readonly("vertex_count",
                               [](const GiantSubgraph& g) { return g.vertex_count(); })
        .def_property_readonly("edge_count", [](const GiantSubgraph& g) { return g.edge_count; })
        .def_property_readonly("radius", [](const GiantSubgraph& g) { return g.radius; })
        .def("degree", [](const GiantSubgraph& g, u32 v) { return g.degrees.at(v); })
        .def("neighbors", [](const GiantSubgraph& g, u32 v) {
            if (v >= g.vertex_count()) throw Error(ErrCode::Domain, "vertex out of range");
            return std::vector<u32>(g.neighbors.begin() + g.offsets[v],
                                    g.neighbors.begin() + g.offsets[v + 1]);
        });

    m.def("generate", &generate, py::arg("n"), py::arg("d"), py::arg("r"), py::arg("seed"),
          "sample a unit-intensity PPP on Lambda_n and connect pairs within r");
    m.def(
        "giant",
        [](const SpatialGraph& g) { return extract_giant(g, connected_components(g)); },
        "largest connected component as an induced subgraph");
    m.def(
        "census",
        [](const SpatialGraph& g) {
            auto c = component_census(g, connected_components(g));
            py::dict out;
            out["total_vertices"] = c.total_vertices;
            out["giant_size"] = c.giant_size;
            out["giant_edges"] = c.giant_edges;
            out["second_size"] = c.second_size;
            out["giant_fraction"] = c.giant_fraction;
            out["second_over_logpow"] = c.second_over_logpow;
            return out;
        },
        "component census of an instance");

    m.def(
        "lambda2",
        [](const GiantSubgraph& g, double tol, int max_iter) {
            return spectral_dict(lambda2(g, tol, max_iter));
        },
        py::arg("giant"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100000);
    m.def("fiedler_vector", &fiedler_vector, py::arg("giant"), py::arg("tol") = 1e-8);

    m.def("heat_kernel_row", &heat_kernel_row, py::arg("giant"), py::arg("x"), py::arg("t"),
          py::arg("tol") = 1e-12);
    m.def("tv_distance", &tv_distance);
    m.def("tau_mix_exact", &tau_mix_exact, py::arg("giant"), py::arg("eps"),
          py::arg("time_tol") = 1e-6, py::arg("kernel_tol") = 1e-12);
    m.def(
        "mix_profile_exact",
        [](const GiantSubgraph& g, const std::vector<double>& t_grid,
           const std::vector<double>& eps_list) {
            return profile_dict(mix_profile_exact(g, t_grid, eps_list));
        },
        py::arg("giant"), py::arg("t_grid"), py::arg("eps_list"));
    m.def(
        "simulate_ctrw",
        [](const GiantSubgraph& g, const std::vector<u32>& starts,
           const std::vector<double>& t_grid, u64 walkers, u64 seed) {
            return profile_dict(simulate_ctrw(g, starts, t_grid, walkers, seed));
        },
        py::arg("giant"), py::arg("starts"), py::arg("t_grid"), py::arg("walkers"),
        py::arg("seed"));
    m.def("cutoff_ratio", &cutoff_ratio);
    m.def(
        "distance_functional",
        [](const GiantSubgraph& g, u32 v) {
            auto f = distance_functional(g, v);
            py::dict out;
            out["source"] = f.source;
            out["pi_mean"] = f.pi_mean;
            out["value"] = f.value;
            return out;
        },
        py::arg("giant"), py::arg("v"));

    m.def("conductance_of_set", &conductance_of_set);
    m.def("exact_profile",
          [](const GiantSubgraph& g) { return conductance_dict(exact_profile(g)); });
    m.def(
        "heuristic_profile",
        [](const GiantSubgraph& g, u64 sampled_sets, bool tile_cuts, u64 seed) {
            return conductance_dict(heuristic_profile(g, {sampled_sets, tile_cuts, seed}));
        },
        py::arg("giant"), py::arg("sampled_sets") = 200, py::arg("tile_cuts") = true,
        py::arg("seed") = 1);
    m.def("cheeger_constant", &cheeger_constant);
    m.def("iso_reference_curve", &iso_reference_curve, py::arg("n"), py::arg("d"), py::arg("r"),
          py::arg("t"), py::arg("cprime") = 1.0);

    m.def("compute_r_d", &compute_r_d, py::arg("n"), py::arg("d"), py::arg("r"));
    m.def("kl_tail", &kl_tail);

    m.def(
        "run_scaling",
        [](const std::string& plan_json) {
            return scaling_dict(run_scaling(plan_from_json_text(plan_json)));
        },
        py::arg("plan_json"), "run the tau_rel scaling sweep from a JSON plan string");
    m.def(
        "run_iso",
        [](const std::string& plan_json, u64 samples, double delta, u64 size_lo) {
            return iso_dict(run_iso(plan_from_json_text(plan_json), samples, delta, size_lo));
        },
        py::arg("plan_json"), py::arg("samples"), py::arg("delta") = 0.5,
        py::arg("size_lo") = 64);
    m.def("export_figure_csvs", &export_figure_csvs, py::arg("graph"), py::arg("A"),
          py::arg("out_dir"));
}
