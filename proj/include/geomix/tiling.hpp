#pragma once

#include <vector>

#include "geomix/geometry.hpp"
#include "geomix/lattice.hpp"
#include "geomix/structure.hpp"

namespace geomix {

// r_d = n^{1/d} / (2*ceil(sqrt(d)*n^{1/d}/r - 1/2) + 1): the largest tile side
// making n^{1/d}/r_d an odd integer with r_d <= r/(2*sqrt(d)), so any two
// points in adjacent tiles are graph-adjacent.
double compute_r_d(double n, int d, double r);

// Tessellation Lambda_n^rho: tiles tau_i = rho*i + [-rho/2, rho/2)^d fully
// contained in Lambda_n; center indices form a Box. Occupancy indexes the
// vertices of the SpatialGraph the tiling was built over.
struct Tiling {
    Box box;
    int d = 0;
    double rho = 0.0;
    double side = 0.0;     // n^{1/d}
    double vol_rho = 0.0;  // rho^d
    std::vector<std::vector<u32>> occupancy;  // per flat tile index
    std::vector<u32> tile_of;                 // per vertex; kNoTile if outside all tiles

    static constexpr u32 kNoTile = ~u32(0);
    std::size_t tile_count() const { return box.size(); }
    double volume_n() const;
    // [lo, hi) bounds of tile idx (untruncated; tiles always lie inside Lambda_n)
    void tile_bounds(u32 idx, double* lo, double* hi) const;
};

Tiling build_tiling(const SpatialGraph& g, double rho);

// k prescribed for lattice animals over a side-rho tessellation.
int lattice_k(double r, double rho, int d);

// L_A: tiles containing at least one vertex of A.
std::vector<u32> tiles_of_set(const Tiling& tiling, const std::vector<u32>& A);

// A' = {x in A : every graph neighbor of x lies in A}. Works on the full
// graph or the giant (any type with offsets/neighbors CSR).
std::vector<u32> interior_set(const SpatialGraph& g, const std::vector<u32>& A);

// Connected components of the induced subgraph on `vertices`.
std::vector<std::vector<u32>> induced_components(const SpatialGraph& g,
                                                 const std::vector<u32>& vertices);

// A'' and the list of retained components (size >= mu*(log n)^{d/(d-1)}*vol_rho,
// with vol_rho taken from `tiling`, normally the r_d tessellation).
struct InteriorCore {
    std::vector<std::vector<u32>> comps_keep;  // the components at or above threshold
    std::vector<u32> core;                     // their union, sorted
    double threshold = 0.0;
};
InteriorCore interior_core(const SpatialGraph& g, const std::vector<u32>& a_prime,
                           const Tiling& tiling, double mu);

// T_A: tiles with |tau ∩ A| >= |tau ∩ G_n|/2 > 0.
std::vector<u32> dense_tiles(const Tiling& tiling, const std::vector<u32>& A);

// L(A): maximal k-lattice animals inside T_A that touch A''.
std::vector<std::vector<u32>> augmented_animals(const Tiling& tiling,
                                                const std::vector<u32>& T_A,
                                                const std::vector<u32>& a_core, int k);

// K(A): *-components of the tile complement of ∪L(A) that contain a vertex of
// giant\A. in_giant/in_A are per-graph-vertex masks.
std::vector<std::vector<u32>> complement_components(const Tiling& tiling,
                                                    const std::vector<std::vector<u32>>& animals,
                                                    const std::vector<char>& in_giant,
                                                    const std::vector<char>& in_A);

struct TileClassification {
    Tiling tiling;            // the rho = 2(3M/10 - 1) r tessellation (or r_d for bands)
    double M = 0.0;
    std::vector<char> normal_wide;   // 19/20..21/20 of vol_rho
    std::vector<char> normal_loose;  // 1/2..2 of vol_rho
    std::vector<char> good;
    std::vector<char> useful;
    std::vector<char> clipped;       // enlarged tile tau' hits the domain boundary
    std::vector<char> in_T_A;        // set by classify_against_set
    std::vector<char> in_L_A;
};

// Good/useful classification of §3.3 at scale M (rho = 2(3M/10-1) r, tau' of
// side M r). M <= 10/3 -> ConfigError.
TileClassification classify_good_useful(const SpatialGraph& g, double M);

// Band flags only, for an arbitrary tiling (used by the iso campaigns).
void classify_bands(TileClassification& cls);

// Fill in_T_A / in_L_A for a vertex set A (L_A = tiles_of_set, T_A = dense_tiles).
void classify_against_set(TileClassification& cls, const std::vector<u32>& A);

// Normal pairs N_L: l1-adjacent tile pairs, both normal (loose band), first in
// L and second outside L.
u64 count_normal_pairs(const Tiling& tiling, const std::vector<char>& normal,
                       const std::vector<u32>& L);

}  // namespace geomix
