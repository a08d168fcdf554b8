#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "geomix/common.hpp"

namespace geomix {

struct RggConfig {
    double volume_n = 0.0;  // cube volume == expected point count
    int dim_d = 0;
    double radius_r = 0.0;
    u64 seed = 0;

    double side() const { return std::pow(volume_n, 1.0 / dim_d); }
    void validate() const;
};

// Poisson point cloud in Lambda_n = [-side/2, side/2)^d, row-major coords.
struct PointSet {
    RggConfig config;
    std::size_t count = 0;
    std::vector<double> coords;  // count * dim_d

    const double* point(std::size_t v) const { return coords.data() + v * config.dim_d; }
};

// Immutable CSR adjacency over a PointSet. Edge iff Euclidean distance <= r.
struct SpatialGraph {
    PointSet points;
    double radius = 0.0;
    std::vector<u64> offsets;    // count + 1
    std::vector<u32> neighbors;  // 2 * edge_count, sorted within each row
    std::vector<u32> degrees;
    u64 edge_count = 0;
    bool complete_flag = false;  // r >= side: trivially complete, permitted but flagged

    std::size_t vertex_count() const { return points.count; }
    const double* pos(std::size_t v) const { return points.point(v); }
    int dim() const { return points.config.dim_d; }
    double side() const { return points.config.side(); }
};

PointSet sample_ppp(const RggConfig& config);
SpatialGraph build_rgg(PointSet points, double r);

// Uniform grid over Lambda_n with cell side >= r (so a radius-r ball is
// covered by the 3^d cells around a point). Built on demand for region
// queries; build_rgg uses the same structure internally.
class CellIndex {
  public:
    CellIndex(const PointSet& points, double min_cell_side);

    // Vertices whose coordinates lie in the axis-aligned box [lo, hi) per dim.
    std::vector<u32> query_box(const double* lo, const double* hi) const;

    const std::vector<u32>& cell_of() const { return cell_of_; }
    std::size_t cell_count() const { return cells_.size(); }
    const std::vector<u32>& cell_members(std::size_t c) const { return cells_[c]; }

  private:
    friend SpatialGraph build_rgg(PointSet, double);
    const PointSet* points_;
    int d_;
    double half_side_;
    double cell_side_;
    std::vector<int> dims_;   // grid cells per axis
    std::vector<u32> cell_of_;
    std::vector<std::vector<u32>> cells_;

    std::size_t flat(const std::vector<int>& c) const;
    int coord_cell(double x, int axis) const;
};

// ---- File formats -------------------------------------------------------
// Binary "RGG1": magic, u32 d, f64 n, f64 r, u64 seed, u64 vcount, u64 ecount,
// positions (vcount*d f64), CSR offsets (vcount+1 u64), neighbors (2*ecount u32).
// All little-endian.
void write_rgg1(const SpatialGraph& g, const std::string& path);
SpatialGraph read_rgg1(const std::string& path);

// Plain-text edge list, "i j" per line, 0-based, i < j, sorted.
void write_edge_list(const SpatialGraph& g, const std::string& path);

}  // namespace geomix
