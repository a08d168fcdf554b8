#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "geomix/harness.hpp"
#include "geomix/spectral.hpp"
#include "test_util.hpp"

using namespace geomix;
using namespace testutil;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SweepPlan tiny_plan(std::vector<SweepCell> cells) {
    SweepPlan plan;
    plan.cells = std::move(cells);
    return plan;
}

}  // namespace

TEST_CASE("kl_tail") {
    CHECK(kl_tail(0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(kl_tail(0.5, 0.9) == doctest::Approx(0.5 * std::log(25.0 / 9.0)).epsilon(1e-12));
    // increasing as p -> 1 at fixed alpha < p
    double prev = 0.0;
    for (double p : {0.6, 0.7, 0.8, 0.9, 0.99}) {
        double v = kl_tail(0.5, p);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(kl_tail(0.0, 0.5), Error);
    CHECK_THROWS_AS(kl_tail(0.5, 1.0), Error);
}

TEST_CASE("fit_line and synthetic scaling recovery") {
    SUBCASE("planted slope recovered within 1e-10") {
        std::vector<ScalingPoint> points;
        for (double x : {1.0, 2.0, 3.5, 5.0, 7.25}) {
            ScalingPoint p;
            p.log_predictor = x;
            p.log_response = 0.73 * x - 2.1;
            points.push_back(p);
        }
        auto fit = fit_scaling(points);
        CHECK(std::fabs(fit.slope - 0.73) <= 1e-10);
        CHECK(std::fabs(fit.intercept + 2.1) <= 1e-10);
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("fewer than 4 cells rejected") {
        std::vector<ScalingPoint> points(3);
        CHECK_THROWS_AS(fit_scaling(points), Error);
    }
    SUBCASE("r_squared stays in [0,1] under noise") {
        std::vector<double> xs = {1, 2, 3, 4, 5, 6}, ys = {2.0, 1.0, 2.5, 1.5, 3.0, 0.5};
        auto fit = fit_line(xs, ys);
        CHECK(fit.r_squared >= 0.0);
        CHECK(fit.r_squared <= 1.0);
    }
    CHECK_THROWS_AS(fit_line({1.0}, {2.0}), Error);
    CHECK_THROWS_AS(fit_line({1, 1, 1}, {1, 2, 3}), Error);
}

TEST_CASE("plan JSON parsing and validation") {
    SUBCASE("round trip with defaults") {
        auto plan = plan_from_json_text(R"({
            "cells": [{"n": 1024, "d": 2, "r": 2.0, "seeds": [1, 2]}],
            "measurement": "relax", "eps": 0.25, "mode": "signed"
        })");
        REQUIRE(plan.cells.size() == 1);
        CHECK(plan.cells[0].n == 1024.0);
        CHECK(plan.cells[0].seeds == std::vector<u64>{1, 2});
        CHECK(plan.eps == 0.25);
        CHECK(plan.tol == 1e-8);  // default preserved
    }
    SUBCASE("invalid plans throw") {
        CHECK_THROWS_AS(plan_from_json_text(R"({"cells": []})"), Error);
        CHECK_THROWS_AS(plan_from_json_text(
                            R"({"cells": [{"n": 100, "r": 1.0, "seeds": [1, 1]}]})"),
                        Error);
        CHECK_THROWS_AS(plan_from_json_text(
                            R"({"cells": [{"n": 100, "r": 1.0, "seeds": [1]}],
                                "measurement": "bogus"})"),
                        Error);
    }
}

TEST_CASE("run_scaling on a small grid") {
    SweepPlan plan = tiny_plan({{256, 2, 2.0, {1, 2}},
                                {512, 2, 2.0, {1, 2}},
                                {1024, 2, 2.0, {1, 2}},
                                {2048, 2, 2.0, {1, 2}}});
    auto fit = run_scaling(plan);
    CHECK(fit.points.size() == 4);
    CHECK(fit.slope > 0.0);  // tau_rel grows with n
    CHECK(fit.failures.empty());
    for (const auto& p : fit.points) CHECK(p.responses.size() == 2);
    // pure function of the plan
    auto again = run_scaling(plan);
    CHECK(again.slope == fit.slope);
    CHECK(again.r_squared == fit.r_squared);

    SUBCASE("single cell rejected") {
        SweepPlan small = tiny_plan({{256, 2, 2.0, {1}}});
        CHECK_THROWS_AS(run_scaling(small), Error);
    }
    SUBCASE("wrong measurement rejected") {
        plan.measurement = "iso";
        CHECK_THROWS_AS(run_scaling(plan), Error);
    }
}

TEST_CASE("run_iso samples respect the window") {
    SweepPlan plan = tiny_plan({{4096, 2, 2.0, {3}}});
    auto report = run_iso(plan, 100, 0.5, 16);
    CHECK(report.giant_size > 2000);
    CHECK(report.samples.size() > 80);
    CHECK(report.min_ratio > 0.0);
    CHECK(report.median_ratio >= report.min_ratio);
    for (const auto& s : report.samples) {
        CHECK(s.connected);
        CHECK(s.size >= report.practical_lower_bound);
        CHECK(s.size <= report.upper_bound);
        CHECK(s.boundary >= 1);  // giant connectivity
        CHECK(s.meets_practical_lo);
        CHECK(s.meets_hi);
        // desk-scale sets sit far below the literal Thm-1.2 window
        CHECK(s.meets_literal_lo == (s.size >= report.literal_lower_bound));
    }
    // deterministic
    auto again = run_iso(plan, 100, 0.5, 16);
    CHECK(again.min_ratio == report.min_ratio);
    CHECK(again.median_ratio == report.median_ratio);

    SUBCASE("d = 1 rejected") {
        SweepPlan bad = tiny_plan({{4096, 1, 20.0, {3}}});
        CHECK_THROWS_AS(run_iso(bad, 10, 0.5), Error);
    }
    SUBCASE("empty window reported, not fatal") {
        auto empty = run_iso(plan, 10, 0.5, 1u << 30);
        CHECK(empty.samples.empty());
    }
}

TEST_CASE("run_large_radii_iso uses non-connected sets above r^d") {
    double n = 2048;
    double r = 1.5 * std::sqrt(2.0 * std::log(n));
    SweepPlan plan = tiny_plan({{n, 2, r, {5}}});
    auto report = run_large_radii_iso(plan, 60);
    REQUIRE(!report.samples.empty());
    CHECK(report.min_ratio > 0.0);
    for (const auto& s : report.samples) {
        CHECK_FALSE(s.connected);
        CHECK(s.size >= static_cast<u64>(std::ceil(r * r)));
        CHECK(s.boundary >= 1);
    }
}

TEST_CASE("reorder_by_coordinate yields the d=1 interval form") {
    RggConfig cfg{2048, 1, 2.0 * std::log(2048.0), 11};
    auto pts = sample_ppp(cfg);
    auto graph = build_rgg(pts, cfg.radius_r);
    auto giant = extract_giant(graph, connected_components(graph));
    auto sorted = reorder_by_coordinate(giant);
    CHECK(sorted.vertex_count() == giant.vertex_count());
    CHECK(sorted.edge_count == giant.edge_count);
    for (std::size_t v = 1; v < sorted.vertex_count(); ++v)
        CHECK(sorted.pos(v)[0] >= sorted.pos(v - 1)[0]);
    CHECK(has_interval_adjacency(sorted));
    // degree multiset preserved
    auto da = giant.degrees, db = sorted.degrees;
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    CHECK(da == db);
}

TEST_CASE("run_d1 fit and suffix ratios") {
    auto rfor = [](double n) { return 2.0 * std::log(n); };
    SweepPlan plan = tiny_plan({{1024, 1, rfor(1024), {1, 2}},
                                {2048, 1, rfor(2048), {1, 2}},
                                {4096, 1, rfor(4096), {1, 2}},
                                {8192, 1, rfor(8192), {1, 2}}});
    auto report = run_d1(plan, 50);
    CHECK(report.fit.points.size() == 4);
    CHECK(report.fit.slope > 0.5);  // tau_rel ~ n^2/r^2 at this scale
    CHECK(report.suffix_ratios.size() == 50);
    for (double ratio : report.suffix_ratios) CHECK(ratio > 0.0);
    SUBCASE("d = 2 cells rejected") {
        SweepPlan bad = tiny_plan({{1024, 2, 2.0, {1}}});
        CHECK_THROWS_AS(run_d1(bad, 5), Error);
    }
}

TEST_CASE("run_renormalization fractions and fit") {
    SweepPlan plan = tiny_plan({{16384, 2, 1.5, {1, 2}}});
    auto report = run_renormalization(plan, {12.0, 25.0});
    REQUIRE(report.fraction.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(report.fraction[i] >= 0.0);
        CHECK(report.fraction[i] < 1.0);  // floor applied if saturated
        CHECK(report.tile_counts[i] > 0);
    }
    CHECK(report.p_hat == report.fraction.back());
    CHECK(report.useful_largest_frac >= 0.0);
    CHECK(report.useful_largest_frac <= 1.0);
    CHECK(report.bernoulli_largest_frac >= 0.0);
    CHECK(report.bernoulli_largest_frac <= 1.0);
    SUBCASE("M below 10/3 propagates ConfigError") {
        CHECK_THROWS_AS(run_renormalization(plan, {3.0}), Error);
    }
}

TEST_CASE("figure export columns and byte stability") {
    RggConfig cfg{36.0, 2, 1.2, 21};
    auto pts = sample_ppp(cfg);
    auto graph = build_rgg(pts, cfg.radius_r);
    REQUIRE(graph.vertex_count() > 4);
    // A: the giant's vertices with positive x, as graph-global ids
    auto labeling = connected_components(graph);
    std::vector<u32> A;
    for (u32 v = 0; v < graph.vertex_count(); ++v)
        if (labeling.labels[v] == labeling.giant_label && pts.point(v)[0] > 0.0) A.push_back(v);

    fs::path dir = fs::temp_directory_path() / "geomix_fig_test";
    fs::remove_all(dir);
    export_figure_csvs(graph, A, dir.string());

    auto head = [&](const char* name) {
        std::ifstream in(dir / name);
        std::string line;
        std::getline(in, line);
        return line;
    };
    CHECK(head("vertices.csv") == "id,x,y,in_giant,in_A,in_Aprime");
    CHECK(head("edges.csv") == "i,j");
    CHECK(head("tiles.csv") == "flag,a,b,side");
    CHECK(head("gridlines.csv") == "coordinate");

    auto first = slurp(dir / "vertices.csv") + slurp(dir / "edges.csv") +
                 slurp(dir / "tiles.csv") + slurp(dir / "gridlines.csv");
    export_figure_csvs(graph, A, dir.string());
    auto second = slurp(dir / "vertices.csv") + slurp(dir / "edges.csv") +
                  slurp(dir / "tiles.csv") + slurp(dir / "gridlines.csv");
    CHECK(first == second);

    SUBCASE("empty A leaves the tiles file empty") {
        export_figure_csvs(graph, {}, dir.string());
        std::ifstream in(dir / "tiles.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line == "flag,a,b,side");
        CHECK_FALSE(std::getline(in, line));
    }
    SUBCASE("d != 2 unsupported") {
        RggConfig c1{64.0, 1, 3.0, 2};
        auto p1 = sample_ppp(c1);
        auto g1 = build_rgg(p1, c1.radius_r);
        CHECK_THROWS_AS(export_figure_csvs(g1, {}, dir.string()), Error);
    }
    fs::remove_all(dir);
}

TEST_CASE("report writers") {
    fs::path dir = fs::temp_directory_path() / "geomix_writer_test";
    fs::create_directories(dir);
    SUBCASE("census json") {
        RggConfig cfg{512.0, 2, 2.0, 9};
        auto pts = sample_ppp(cfg);
        auto graph = build_rgg(pts, cfg.radius_r);
        auto census = component_census(graph, connected_components(graph));
        auto path = (dir / "census.json").string();
        write_census_json(census, path);
        auto text = slurp(path);
        CHECK(text.find("\"giant_size\"") != std::string::npos);
        CHECK(text.find("\"second_over_logpow\"") != std::string::npos);
    }
    SUBCASE("scaling and iso csv") {
        SweepPlan plan = tiny_plan({{256, 2, 2.0, {1}},
                                    {512, 2, 2.0, {1}},
                                    {1024, 2, 2.0, {1}},
                                    {2048, 2, 2.0, {1}}});
        auto fit = run_scaling(plan);
        auto spath = (dir / "scaling.csv").string();
        write_scaling_csv(fit, spath);
        std::ifstream in(spath);
        std::string line;
        std::getline(in, line);
        CHECK(line == "n,r,log_predictor,log_response,seed_min,seed_max");

        SweepPlan iso_plan = tiny_plan({{2048, 2, 2.0, {4}}});
        auto report = run_iso(iso_plan, 20, 0.5, 16);
        auto ipath = (dir / "iso.csv").string();
        write_iso_csv(report, ipath);
        std::ifstream iin(ipath);
        std::getline(iin, line);
        CHECK(line == "size,boundary,ratio,meets_literal_lo,meets_practical_lo,meets_hi,connected");
    }
    fs::remove_all(dir);
}
