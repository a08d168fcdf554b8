#include "geomix/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "geomix/random.hpp"

namespace geomix {

void RggConfig::validate() const {
    if (!std::isfinite(volume_n) || volume_n <= 0.0)
        throw Error(ErrCode::ConfigError, "volume_n must be finite and positive");
    if (dim_d < 1) throw Error(ErrCode::ConfigError, "dim_d must be >= 1");
    if (!std::isfinite(radius_r) || radius_r <= 0.0)
        throw Error(ErrCode::ConfigError, "radius_r must be finite and positive");
}

PointSet sample_ppp(const RggConfig& config) {
    config.validate();
    PointSet ps;
    ps.config = config;
    RngStream rng(derive_seed(config.seed, /*purpose=*/1, 0));
    ps.count = static_cast<std::size_t>(rng.next_poisson(config.volume_n));
    ps.coords.resize(ps.count * static_cast<std::size_t>(config.dim_d));
    const double side = config.side();
    for (double& c : ps.coords) c = (rng.next_double() - 0.5) * side;
    return ps;
}

// ---- CellIndex ----------------------------------------------------------

CellIndex::CellIndex(const PointSet& points, double min_cell_side)
    : points_(&points), d_(points.config.dim_d) {
    const double side = points.config.side();
    half_side_ = side / 2.0;
    dims_.resize(d_);
    std::size_t total = 1;
    for (int j = 0; j < d_; ++j) {
        int g = static_cast<int>(std::floor(side / min_cell_side));
        if (g < 1) g = 1;
        // floor guarantees side/g >= min_cell_side up to rounding
        dims_[j] = g;
        total *= static_cast<std::size_t>(g);
    }
    cell_side_ = side / dims_[0];
    cells_.resize(total);
    cell_of_.resize(points.count);
    std::vector<int> c(d_);
    for (std::size_t v = 0; v < points.count; ++v) {
        const double* p = points.point(v);
        for (int j = 0; j < d_; ++j) c[j] = coord_cell(p[j], j);
        std::size_t f = flat(c);
        cell_of_[v] = static_cast<u32>(f);
        cells_[f].push_back(static_cast<u32>(v));
    }
}

int CellIndex::coord_cell(double x, int axis) const {
    double side = 2.0 * half_side_;
    int g = dims_[axis];
    int c = static_cast<int>(std::floor((x + half_side_) / side * g));
    if (c < 0) c = 0;
    if (c >= g) c = g - 1;
    return c;
}

std::size_t CellIndex::flat(const std::vector<int>& c) const {
    std::size_t f = 0;
    for (int j = 0; j < d_; ++j) f = f * static_cast<std::size_t>(dims_[j]) + c[j];
    return f;
}

std::vector<u32> CellIndex::query_box(const double* lo, const double* hi) const {
    std::vector<int> clo(d_), chi(d_), cur(d_);
    for (int j = 0; j < d_; ++j) {
        clo[j] = coord_cell(lo[j], j);
        chi[j] = coord_cell(hi[j], j);
        cur[j] = clo[j];
    }
    std::vector<u32> out;
    for (;;) {
        for (u32 v : cells_[flat(cur)]) {
            const double* p = points_->point(v);
            bool inside = true;
            for (int j = 0; j < d_; ++j)
                if (!(p[j] >= lo[j] && p[j] < hi[j])) { inside = false; break; }
            if (inside) out.push_back(v);
        }
        int j = d_ - 1;
        while (j >= 0 && cur[j] == chi[j]) {
            cur[j] = clo[j];
            --j;
        }
        if (j < 0) break;
        ++cur[j];
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- build_rgg ----------------------------------------------------------

SpatialGraph build_rgg(PointSet points, double r) {
    if (!(r > 0.0)) throw Error(ErrCode::ConfigError, "radius must be positive");
    SpatialGraph g;
    g.radius = r;
    const int d = points.config.dim_d;
    const std::size_t n = points.count;
    const double side = points.config.side();
    g.complete_flag = r > side;
    g.points = std::move(points);
    g.degrees.assign(n, 0);
    g.offsets.assign(n + 1, 0);
    if (n == 0) return g;

    CellIndex idx(g.points, r);
    const double r2 = r * r;

    // Two passes over the 3^d surrounding cells: count degrees, then fill CSR.
    auto scan_pairs = [&](std::size_t v, auto&& emit) {
        const double* pv = g.points.point(v);
        std::vector<int> base(d), cur(d);
        std::size_t f = idx.cell_of()[v];
        for (int j = d - 1; j >= 0; --j) {
            base[j] = static_cast<int>(f % idx.dims_[j]);
            f /= idx.dims_[j];
        }
        std::vector<int> lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
            lo[j] = std::max(0, base[j] - 1);
            hi[j] = std::min(idx.dims_[j] - 1, base[j] + 1);
            cur[j] = lo[j];
        }
        for (;;) {
            for (u32 u : idx.cell_members(idx.flat(cur))) {
                if (u == v) continue;
                const double* pu = g.points.point(u);
                double dist2 = 0.0;
                for (int j = 0; j < d; ++j) {
                    double dx = pv[j] - pu[j];
                    dist2 += dx * dx;
                }
                if (dist2 <= r2) emit(u);
            }
            int j = d - 1;
            while (j >= 0 && cur[j] == hi[j]) {
                cur[j] = lo[j];
                --j;
            }
            if (j < 0) break;
            ++cur[j];
        }
    };

    parallel_for(n, [&](std::size_t v) {
        u32 deg = 0;
        scan_pairs(v, [&](u32) { ++deg; });
        g.degrees[v] = deg;
    });
    for (std::size_t v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + g.degrees[v];
    g.edge_count = g.offsets[n] / 2;
    g.neighbors.resize(g.offsets[n]);
    parallel_for(n, [&](std::size_t v) {
        u64 at = g.offsets[v];
        scan_pairs(v, [&](u32 u) { g.neighbors[at++] = u; });
        std::sort(g.neighbors.begin() + g.offsets[v], g.neighbors.begin() + at);
    });
    return g;
}

// ---- File formats -------------------------------------------------------

namespace {
template <typename T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void get(std::ifstream& f, T& v) {
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void write_rgg1(const SpatialGraph& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrCode::ConfigError, "cannot open " + path + " for writing");
    f.write("RGG1", 4);
    put(f, static_cast<u32>(g.dim()));
    put(f, g.points.config.volume_n);
    put(f, g.radius);
    put(f, g.points.config.seed);
    put(f, static_cast<u64>(g.vertex_count()));
    put(f, g.edge_count);
    f.write(reinterpret_cast<const char*>(g.points.coords.data()),
            static_cast<std::streamsize>(g.points.coords.size() * sizeof(double)));
    f.write(reinterpret_cast<const char*>(g.offsets.data()),
            static_cast<std::streamsize>(g.offsets.size() * sizeof(u64)));
    f.write(reinterpret_cast<const char*>(g.neighbors.data()),
            static_cast<std::streamsize>(g.neighbors.size() * sizeof(u32)));
    if (!f) throw Error(ErrCode::ConfigError, "short write to " + path);
}

SpatialGraph read_rgg1(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrCode::ConfigError, "cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (std::memcmp(magic, "RGG1", 4) != 0) throw Error(ErrCode::ConfigError, "bad magic in " + path);
    SpatialGraph g;
    u32 d;
    u64 vcount;
    get(f, d);
    get(f, g.points.config.volume_n);
    get(f, g.radius);
    get(f, g.points.config.seed);
    get(f, vcount);
    get(f, g.edge_count);
    g.points.config.dim_d = static_cast<int>(d);
    g.points.config.radius_r = g.radius;
    g.points.count = static_cast<std::size_t>(vcount);
    g.points.coords.resize(vcount * d);
    g.offsets.resize(vcount + 1);
    g.neighbors.resize(2 * g.edge_count);
    f.read(reinterpret_cast<char*>(g.points.coords.data()),
           static_cast<std::streamsize>(g.points.coords.size() * sizeof(double)));
    f.read(reinterpret_cast<char*>(g.offsets.data()),
           static_cast<std::streamsize>(g.offsets.size() * sizeof(u64)));
    f.read(reinterpret_cast<char*>(g.neighbors.data()),
           static_cast<std::streamsize>(g.neighbors.size() * sizeof(u32)));
    if (!f) throw Error(ErrCode::ConfigError, "truncated file " + path);
    g.degrees.resize(vcount);
    for (u64 v = 0; v < vcount; ++v) g.degrees[v] = static_cast<u32>(g.offsets[v + 1] - g.offsets[v]);
    g.complete_flag = g.radius > g.points.config.side();
    return g;
}

void write_edge_list(const SpatialGraph& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrCode::ConfigError, "cannot open " + path + " for writing");
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
            if (g.neighbors[e] > v) f << v << ' ' << g.neighbors[e] << '\n';
}

}  // namespace geomix
