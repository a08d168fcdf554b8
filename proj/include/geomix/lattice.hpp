#pragma once

#include <utility>
#include <vector>

#include "geomix/common.hpp"

namespace geomix {

// Axis-aligned box of integer sites, per-dim inclusive ranges. Site order
// (and the flat index) is lexicographic on coordinates with axis 0 most
// significant; every "smallest site" tie-break below refers to this order.
struct Box {
    int d = 0;
    std::vector<int> lo, hi;  // inclusive

    // Phi_m = Lambda_m ∩ Z^d: integer points of [-m^{1/d}/2, m^{1/d}/2)^d.
    static Box phi_m(double m, int d);
    // Convenience: a d-dimensional box with `count` sites per axis, centered.
    static Box cube(int d, int count);

    std::size_t extent(int axis) const { return static_cast<std::size_t>(hi[axis] - lo[axis] + 1); }
    std::size_t size() const;
    bool contains(const std::vector<int>& c) const;
    u32 index_of(const std::vector<int>& c) const;
    std::vector<int> coords_of(u32 idx) const;
};

struct Boundaries {
    std::vector<u32> outer_l1;    // ∂⁺K
    std::vector<u32> inner_l1;    // ∂⁻K
    std::vector<u32> outer_star;  // ∂*⁺K (ℓ∞ = 1)
    std::vector<u32> inner_star;  // ∂*⁻K
    std::vector<std::pair<u32, u32>> edges_l1;    // E(K,Kᶜ), (in-site, out-site)
    std::vector<std::pair<u32, u32>> edges_star;  // E_*(K,Kᶜ)
};

struct SiteField {
    Box box;
    double p = 0.0;
    u64 seed = 0;
    std::vector<char> open;  // per flat site index
};

Boundaries boundaries(const Box& box, const std::vector<u32>& K);

// D(K,Kᶜ): scan E(K,Kᶜ) in lexicographic (min-site, max-site) order, keep an
// edge iff both endpoints are still unused. Guaranteed |D| >= |E|/(4d).
// open_open counts members of D with both endpoints open under `field`
// (pass nullptr to skip).
struct Matching {
    std::vector<std::pair<u32, u32>> edges;
    u64 open_open = 0;
};
Matching greedy_disjoint_matching(const Box& box, const std::vector<u32>& K,
                                  const SiteField* field = nullptr);

// Bernoulli(p) site field; uniforms are drawn once per site in flat order
// from the seed stream, so fields with the same seed are monotone-coupled
// across p (open(p1) ⊆ open(p2) for p1 <= p2).
SiteField sample_site_field(double m, int d, double p, u64 seed);
SiteField sample_site_field(const Box& box, double p, u64 seed);

// Largest ℓ1-connected open cluster F_m; tie -> smallest min site index.
std::vector<u32> largest_open_component(const SiteField& field);

// Connected components of `sites` where u ~ v iff ℓ1 (or ℓ∞) distance <= k.
// Boxes are convex so lattice-graph distance equals the norm distance.
std::vector<std::vector<u32>> lattice_components(const Box& box, const std::vector<u32>& sites,
                                                 int k, bool use_linf);

// |E(K,Kᶜ)| / |K|^{(d-1)/d}; `window_ok` false when |K| > (2/3)(1-eps)·|box|.
struct IsoRatio {
    double ratio = 0.0;
    bool window_ok = true;
};
IsoRatio lattice_iso_check(const Box& box, const std::vector<u32>& K, double eps = 0.0);

}  // namespace geomix
