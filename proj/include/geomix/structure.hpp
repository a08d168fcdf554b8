#pragma once

#include <vector>

#include "geomix/geometry.hpp"

namespace geomix {

struct ComponentLabeling {
    std::vector<u32> labels;      // component id per vertex; ids in order of smallest member
    std::vector<u64> sizes;       // size per component id
    std::vector<u64> sizes_desc;  // sizes in decreasing order
    u32 giant_label = 0;          // max size, tie -> smallest min global index
    std::size_t component_count() const { return sizes.size(); }
};

// Induced subgraph on the giant component, with its own CSR and positions.
struct GiantSubgraph {
    std::vector<u32> global_ids;          // local -> global, ascending
    std::vector<i64> local_of_global;     // global -> local or -1
    std::vector<u64> offsets;
    std::vector<u32> neighbors;
    std::vector<u32> degrees;
    u64 edge_count = 0;
    std::vector<double> coords;  // local, row-major
    int dim = 0;
    double side = 0.0;
    double radius = 0.0;
    double volume_n = 0.0;

    std::size_t vertex_count() const { return global_ids.size(); }
    const double* pos(std::size_t v) const { return coords.data() + v * dim; }
};

struct CensusReport {
    double n = 0.0;
    int d = 0;
    double r = 0.0;
    u64 seed = 0;
    u64 total_vertices = 0;
    u64 giant_size = 0;
    u64 giant_edges = 0;
    u64 second_size = 0;
    double giant_fraction = 0.0;
    double second_over_logpow = 0.0;  // second_size / (log n)^{d/(d-1)}; d=1 -> second/log n
};

ComponentLabeling connected_components(const SpatialGraph& g);
GiantSubgraph extract_giant(const SpatialGraph& g, const ComponentLabeling& labeling);
std::vector<double> stationary_distribution(const GiantSubgraph& g);
CensusReport component_census(const SpatialGraph& g, const ComponentLabeling& labeling);

// Fraction of giant vertices with degree in [c_lo*r^d, c_hi*r^d].
double degree_band_census(const GiantSubgraph& g, double c_lo, double c_hi, double r, int d);

// (sum of degrees over A) / (|A| * r^d) — empirical eta of Thm-2.12 flavor.
double total_degree_ratio(const GiantSubgraph& g, const std::vector<u32>& A, double r, int d);

// Edges from A to giant\A inside the giant (A holds local ids).
u64 boundary_edge_count(const GiantSubgraph& g, const std::vector<u32>& A);

// BFS distances from a local vertex (giant is connected, so all finite).
std::vector<u32> bfs_distances(const GiantSubgraph& g, u32 source);

}  // namespace geomix
