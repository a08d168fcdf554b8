#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "geomix/conductance.hpp"
#include "geomix/spectral.hpp"
#include "test_util.hpp"

using namespace geomix;
using namespace testutil;

namespace {

// Independent brute-force phi(1/2) for cross-checking exact_profile.
double brute_phi_half(const GiantSubgraph& g) {
    const std::size_t n = g.vertex_count();
    double best = kInf;
    for (u32 mask = 1; mask + 1 < (1u << n); ++mask) {
        u64 vol = 0, cut = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!(mask >> v & 1)) continue;
            vol += g.degrees[v];
            for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
                cut += !(mask >> g.neighbors[e] & 1);
        }
        double p = static_cast<double>(vol) / (2.0 * g.edge_count);
        if (p > 0.5) continue;
        double q = static_cast<double>(cut) / (2.0 * g.edge_count);
        best = std::min(best, q / (p * (1.0 - p)));
    }
    return best;
}

}  // namespace

TEST_CASE("conductance_of_set hand values and symmetry") {
    CHECK(conductance_of_set(complete_graph(2), {0}) == doctest::Approx(2.0));
    CHECK(conductance_of_set(path_graph(3), {0}) == doctest::Approx(4.0 / 3.0));
    for (u64 seed = 1; seed <= 10; ++seed) {
        auto g = random_connected_graph(12, 0.3, seed + 40);
        std::vector<u32> A = {0, 3, 5}, Ac;
        for (u32 v = 0; v < 12; ++v)
            if (v != 0 && v != 3 && v != 5) Ac.push_back(v);
        CHECK(conductance_of_set(g, A) ==
              doctest::Approx(conductance_of_set(g, Ac)).epsilon(1e-14));
    }
    auto g = path_graph(4);
    CHECK_THROWS_AS(conductance_of_set(g, {}), Error);
    CHECK_THROWS_AS(conductance_of_set(g, {0, 1, 2, 3}), Error);
    CHECK_THROWS_AS(conductance_of_set(g, {0, 0}), Error);
    CHECK_THROWS_AS(conductance_of_set(g, {9}), Error);
}

TEST_CASE("pi_zero and pi_one") {
    auto p3 = path_graph(3);
    CHECK(pi_zero(p3) == doctest::Approx(0.25));
    // endpoint: pi(x) + pi(center) = 1/4 + 1/2 = 3/4; center needs both ends -> 1
    CHECK(pi_one(p3) == doctest::Approx(0.75));
    CHECK(pi_one(complete_graph(2)) == doctest::Approx(1.0));
}

TEST_CASE("exact_profile") {
    SUBCASE("P3 Cheeger-type value 4/3 with endpoint witness") {
        auto prof = exact_profile(path_graph(3));
        CHECK(prof.envelope.back() == doctest::Approx(4.0 / 3.0));
        // the first admissible grid point holds the singleton endpoint
        CHECK(prof.phi.front() == doctest::Approx(4.0 / 3.0));
        CHECK(prof.witness.front().size() == 1);
    }
    SUBCASE("K2") {
        auto prof = exact_profile(complete_graph(2));
        CHECK(prof.envelope.back() == doctest::Approx(2.0));
    }
    SUBCASE("matches an independent brute force") {
        for (u64 seed = 1; seed <= 15; ++seed) {
            std::size_t n = 5 + seed % 8;
            auto g = random_connected_graph(n, 0.35, seed + 70);
            auto prof = exact_profile(g);
            CHECK(prof.envelope.back() == doctest::Approx(brute_phi_half(g)).epsilon(1e-13));
            // envelope monotone nonincreasing
            for (std::size_t i = 1; i < prof.envelope.size(); ++i)
                CHECK(prof.envelope[i] <= prof.envelope[i - 1] + 1e-15);
            // witness recomputation reproduces the stored value exactly
            for (std::size_t i = 0; i < prof.phi.size(); ++i)
                if (std::isfinite(prof.phi[i]))
                    CHECK(conductance_of_set(g, prof.witness[i]) == prof.phi[i]);
        }
    }
    SUBCASE("size guard") {
        CHECK_THROWS_AS(exact_profile(path_graph(19)), Error);
    }
}

TEST_CASE("heuristic never beats the exhaustive minimum") {
    for (u64 seed = 1; seed <= 20; ++seed) {
        std::size_t n = 6 + seed % 9;  // up to 14
        auto g = random_connected_graph(n, 0.3, seed + 90);
        auto exact = exact_profile(g);
        auto heur = heuristic_profile(g, {100, true, seed});
        REQUIRE(heur.t_grid.size() == exact.t_grid.size());
        for (std::size_t i = 0; i < heur.envelope.size(); ++i)
            if (std::isfinite(heur.envelope[i]))
                CHECK(heur.envelope[i] >= exact.envelope[i] - 1e-12);
        // witness invariant holds for heuristics too
        for (std::size_t i = 0; i < heur.phi.size(); ++i)
            if (std::isfinite(heur.phi[i]))
                CHECK(conductance_of_set(g, heur.witness[i]) == heur.phi[i]);
    }
}

TEST_CASE("zero budget leaves only sweep witnesses") {
    auto g = random_connected_graph(20, 0.2, 13);
    auto prof = heuristic_profile(g, {0, false, 1});
    for (const auto& kind : prof.witness_kind)
        CHECK((kind.empty() || kind == "sweep"));
    // and at least one sweep witness landed
    CHECK(std::any_of(prof.witness_kind.begin(), prof.witness_kind.end(),
                      [](const std::string& k) { return k == "sweep"; }));
}

TEST_CASE("tile-cut witnesses are axis half-spaces") {
    RggConfig cfg{300.0, 2, 1.6, 5};
    auto pts = sample_ppp(cfg);
    auto graph = build_rgg(pts, cfg.radius_r);
    auto g = extract_giant(graph, connected_components(graph));
    REQUIRE(g.vertex_count() > 30);
    auto prof = heuristic_profile(g, {50, true, 2});
    int tile_witnesses = 0;
    for (std::size_t i = 0; i < prof.phi.size(); ++i) {
        if (prof.witness_kind[i] != "tile-cut") continue;
        ++tile_witnesses;
        std::vector<char> in_A(g.vertex_count(), 0);
        for (u32 v : prof.witness[i]) in_A[v] = 1;
        bool half_space = false;
        for (int axis = 0; axis < g.dim && !half_space; ++axis) {
            double max_in = -1e300, min_out = 1e300;
            for (u32 v = 0; v < g.vertex_count(); ++v) {
                double c = g.pos(v)[axis];
                if (in_A[v])
                    max_in = std::max(max_in, c);
                else
                    min_out = std::min(min_out, c);
            }
            half_space = max_in <= min_out;
        }
        CHECK(half_space);
    }
    INFO("tile-cut witnesses: " << tile_witnesses);
}

TEST_CASE("Cheeger sandwich against the spectral gap") {
    for (u64 seed = 1; seed <= 25; ++seed) {
        std::size_t n = 4 + seed % 9;  // up to 12
        auto g = random_connected_graph(n, 0.4, seed + 200);
        double h = cheeger_constant(g);
        double gap = 1.0 - lambda2(g).lambda2_signed;
        CHECK(h * h / 2.0 <= gap + 1e-10);
        CHECK(gap <= 2.0 * h + 1e-10);
    }
}

TEST_CASE("lk_bound closed forms") {
    auto make_constant_profile = [](double pi0, double c) {
        ConductanceProfile prof;
        prof.pi0 = pi0;
        prof.pi1 = pi0;
        int pts = 64;
        double ratio = std::log(0.5 / pi0);
        for (int i = 0; i < pts; ++i) {
            prof.t_grid.push_back(pi0 * std::exp(ratio * i / (pts - 1)));
            prof.phi.push_back(c);
            prof.witness_kind.push_back("exhaustive");
            prof.witness.emplace_back();
        }
        prof.envelope = prof.phi;
        return prof;
    };
    SUBCASE("constant profile: ln(1/(2 pi0))/c^2 + 1/c") {
        double pi0 = 0.01, c = 0.3;
        auto b = lk_bound(make_constant_profile(pi0, c));
        CHECK(b.value == doctest::Approx(std::log(1.0 / (2.0 * pi0)) / (c * c) + 1.0 / c)
                             .epsilon(1e-10));
    }
    SUBCASE("doubling phi quarters the integral") {
        auto b1 = lk_bound(make_constant_profile(0.02, 0.4));
        auto b2 = lk_bound(make_constant_profile(0.02, 0.8));
        CHECK(b2.integral == doctest::Approx(b1.integral / 4.0).epsilon(1e-12));
    }
    SUBCASE("pi1 variant integrates a shorter range") {
        auto prof = make_constant_profile(0.01, 0.5);
        prof.pi1 = 0.1;
        auto b = lk_bound(prof);
        CHECK(b.integral_pi1 < b.integral);
        CHECK(b.integral_pi1 == doctest::Approx(std::log(0.5 / 0.1) / 0.25).epsilon(0.05));
        CHECK(b.value_pi1 <= b.value);
    }
    SUBCASE("zero phi gives the +inf sentinel") {
        auto prof = make_constant_profile(0.05, 0.0);
        CHECK(lk_bound(prof).value == kInf);
    }
}

TEST_CASE("iso reference curve") {
    SUBCASE("large-r branch at t = 1/2") {
        double n = 1e4;
        double r = 50.0;
        CHECK(iso_reference_curve(n, 2, r, 0.5) ==
              doctest::Approx(r / std::sqrt(n / 2.0)).epsilon(1e-12));
    }
    SUBCASE("decreasing on the decaying branch") {
        double prev = kInf;
        for (double t : {0.05, 0.1, 0.2, 0.3, 0.5}) {
            double v = iso_reference_curve(1e4, 2, 40.0, t);
            CHECK(v <= prev);
            prev = v;
        }
    }
    SUBCASE("branches meet at the crossover") {
        double n = 1e4;
        int d = 2;
        double r = 2.0;
        double ts = iso_reference_crossover(n, d, r);
        if (ts > 0.0 && ts <= 0.5) {
            double f = std::pow(std::log(n), 5.0 * d) * std::pow(r, d) / n;
            double flat = 1.0 / (n * f * std::pow(r, d));
            double decaying = r / std::pow(n * ts, 1.0 / d);
            CHECK(flat == doctest::Approx(decaying).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(iso_reference_curve(1e4, 2, 2.0, 0.0), Error);
    CHECK_THROWS_AS(iso_reference_curve(1e4, 2, 2.0, 0.6), Error);
}

TEST_CASE("profile CSV writer") {
    auto prof = exact_profile(path_graph(4));
    const char* path = "profile_test.csv";
    write_profile_csv(prof, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,phi,envelope,witness_kind,witness_size");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 64);
    in.close();
    std::remove(path);
}
