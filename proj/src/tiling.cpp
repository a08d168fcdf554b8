#include "geomix/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace geomix {

double compute_r_d(double n, int d, double r) {
    if (d < 1 || !(n > 0.0) || !(r > 0.0))
        throw Error(ErrCode::ConfigError, "compute_r_d needs n > 0, d >= 1, r > 0");
    double side = std::pow(n, 1.0 / d);
    double q = std::ceil(std::sqrt(static_cast<double>(d)) * side / r - 0.5);
    if (q < 0.0) q = 0.0;
    return side / (2.0 * q + 1.0);
}

double Tiling::volume_n() const { return std::pow(side, d); }

void Tiling::tile_bounds(u32 idx, double* lo, double* hi) const {
    auto c = box.coords_of(idx);
    for (int j = 0; j < d; ++j) {
        double center = rho * c[j];
        lo[j] = center - rho / 2.0;
        hi[j] = center + rho / 2.0;
    }
}

Tiling build_tiling(const SpatialGraph& g, double rho) {
    if (!(rho > 0.0)) throw Error(ErrCode::ConfigError, "rho must be positive");
    Tiling t;
    t.d = g.dim();
    t.rho = rho;
    t.side = g.side();
    t.vol_rho = std::pow(rho, t.d);
    // centers i with rho*i ± rho/2 inside [-side/2, side/2]: |i| <= (side/rho - 1)/2
    int imax = static_cast<int>(std::floor((t.side / rho - 1.0) / 2.0 + 1e-9));
    if (imax < 0) throw Error(ErrCode::ConfigError, "rho larger than the domain");
    t.box.d = t.d;
    t.box.lo.assign(t.d, -imax);
    t.box.hi.assign(t.d, imax);
    t.occupancy.resize(t.box.size());
    t.tile_of.assign(g.vertex_count(), Tiling::kNoTile);
    std::vector<int> c(t.d);
    for (u32 v = 0; v < g.vertex_count(); ++v) {
        const double* p = g.pos(v);
        bool ok = true;
        for (int j = 0; j < t.d; ++j) {
            c[j] = static_cast<int>(std::floor(p[j] / rho + 0.5));
            if (c[j] < t.box.lo[j] || c[j] > t.box.hi[j]) { ok = false; break; }
        }
        if (!ok) continue;
        u32 idx = t.box.index_of(c);
        t.tile_of[v] = idx;
        t.occupancy[idx].push_back(v);
    }
    return t;
}

int lattice_k(double r, double rho, int d) {
    return static_cast<int>(std::ceil(r / (rho * std::sqrt(static_cast<double>(d))))) * d;
}

std::vector<u32> tiles_of_set(const Tiling& tiling, const std::vector<u32>& A) {
    std::vector<u32> out;
    for (u32 v : A)
        if (tiling.tile_of[v] != Tiling::kNoTile) out.push_back(tiling.tile_of[v]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<u32> interior_set(const SpatialGraph& g, const std::vector<u32>& A) {
    std::vector<char> in(g.vertex_count(), 0);
    for (u32 v : A) in[v] = 1;
    std::vector<u32> out;
    for (u32 v : A) {
        bool interior = true;
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
            if (!in[g.neighbors[e]]) { interior = false; break; }
        if (interior) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<u32>> induced_components(const SpatialGraph& g,
                                                 const std::vector<u32>& vertices) {
    std::unordered_set<u32> member(vertices.begin(), vertices.end());
    std::unordered_set<u32> seen;
    std::vector<std::vector<u32>> comps;
    std::vector<u32> stack;
    for (u32 s : vertices) {
        if (seen.count(s)) continue;
        comps.emplace_back();
        auto& comp = comps.back();
        stack.assign(1, s);
        seen.insert(s);
        while (!stack.empty()) {
            u32 x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            for (u64 e = g.offsets[x]; e < g.offsets[x + 1]; ++e) {
                u32 y = g.neighbors[e];
                if (member.count(y) && !seen.count(y)) {
                    seen.insert(y);
                    stack.push_back(y);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
    }
    return comps;
}

InteriorCore interior_core(const SpatialGraph& g, const std::vector<u32>& a_prime,
                           const Tiling& tiling, double mu) {
    InteriorCore out;
    double n = tiling.volume_n();
    double logn = std::log(std::max(n, 2.0));
    double pw = tiling.d > 1 ? std::pow(logn, static_cast<double>(tiling.d) / (tiling.d - 1)) : logn;
    out.threshold = mu * pw * tiling.vol_rho;
    for (auto& comp : induced_components(g, a_prime)) {
        if (static_cast<double>(comp.size()) >= out.threshold) {
            out.core.insert(out.core.end(), comp.begin(), comp.end());
            out.comps_keep.push_back(std::move(comp));
        }
    }
    std::sort(out.core.begin(), out.core.end());
    return out;
}

std::vector<u32> dense_tiles(const Tiling& tiling, const std::vector<u32>& A) {
    std::vector<u32> a_count(tiling.tile_count(), 0);
    for (u32 v : A)
        if (tiling.tile_of[v] != Tiling::kNoTile) ++a_count[tiling.tile_of[v]];
    std::vector<u32> out;
    for (u32 t = 0; t < tiling.tile_count(); ++t) {
        std::size_t total = tiling.occupancy[t].size();
        if (total > 0 && 2 * static_cast<std::size_t>(a_count[t]) >= total)
            out.push_back(t);
    }
    return out;
}

std::vector<std::vector<u32>> augmented_animals(const Tiling& tiling,
                                                const std::vector<u32>& T_A,
                                                const std::vector<u32>& a_core, int k) {
    std::unordered_set<u32> core_tiles;
    for (u32 v : a_core)
        if (tiling.tile_of[v] != Tiling::kNoTile) core_tiles.insert(tiling.tile_of[v]);
    std::vector<std::vector<u32>> out;
    for (auto& animal : lattice_components(tiling.box, T_A, k, /*linf=*/false)) {
        bool touches = std::any_of(animal.begin(), animal.end(),
                                   [&](u32 t) { return core_tiles.count(t) > 0; });
        if (touches) out.push_back(std::move(animal));
    }
    return out;
}

std::vector<std::vector<u32>> complement_components(const Tiling& tiling,
                                                    const std::vector<std::vector<u32>>& animals,
                                                    const std::vector<char>& in_giant,
                                                    const std::vector<char>& in_A) {
    std::vector<char> in_L(tiling.tile_count(), 0);
    for (const auto& animal : animals)
        for (u32 t : animal) in_L[t] = 1;
    std::vector<u32> comp_tiles;
    for (u32 t = 0; t < tiling.tile_count(); ++t)
        if (!in_L[t]) comp_tiles.push_back(t);
    std::vector<std::vector<u32>> out;
    for (auto& comp : lattice_components(tiling.box, comp_tiles, 1, /*linf=*/true)) {
        bool keep = false;
        for (u32 t : comp) {
            for (u32 v : tiling.occupancy[t])
                if (in_giant[v] && !in_A[v]) { keep = true; break; }
            if (keep) break;
        }
        if (keep) out.push_back(std::move(comp));
    }
    return out;
}

// ---- good / useful tiles --------------------------------------------------

namespace {

// Does the point set have Euclidean diameter >= thr? Bounding-box bounds
// first; exact pair scan when inconclusive (hull-based refinement for the
// 2-d case above 2000 points).
bool diameter_at_least(const SpatialGraph& g, const std::vector<u32>& pts, double thr) {
    if (pts.size() < 2) return false;
    const int d = g.dim();
    std::vector<double> mn(d, kInf), mx(d, -kInf);
    for (u32 v : pts) {
        const double* p = g.pos(v);
        for (int j = 0; j < d; ++j) {
            mn[j] = std::min(mn[j], p[j]);
            mx[j] = std::max(mx[j], p[j]);
        }
    }
    double diag2 = 0.0, maxext = 0.0;
    for (int j = 0; j < d; ++j) {
        double e = mx[j] - mn[j];
        diag2 += e * e;
        maxext = std::max(maxext, e);
    }
    if (maxext >= thr) return true;          // some pair spans the extent
    if (diag2 < thr * thr) return false;     // no pair can reach thr
    auto dist2 = [&](u32 a, u32 b) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            double dx = g.pos(a)[j] - g.pos(b)[j];
            s += dx * dx;
        }
        return s;
    };
    if (pts.size() <= 2000 || d != 2) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (dist2(pts[i], pts[j]) >= thr * thr) return true;
        return false;
    }
    // d = 2: diameter is attained on the convex hull (monotone chain + scan)
    std::vector<u32> h(pts);
    std::sort(h.begin(), h.end(), [&](u32 a, u32 b) {
        const double* pa = g.pos(a);
        const double* pb = g.pos(b);
        return pa[0] < pb[0] || (pa[0] == pb[0] && pa[1] < pb[1]);
    });
    auto cross = [&](u32 o, u32 a, u32 b) {
        const double* po = g.pos(o);
        const double* pa = g.pos(a);
        const double* pb = g.pos(b);
        return (pa[0] - po[0]) * (pb[1] - po[1]) - (pa[1] - po[1]) * (pb[0] - po[0]);
    };
    std::vector<u32> hull(2 * h.size());
    std::size_t k = 0;
    for (u32 v : h) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], v) <= 0) --k;
        hull[k++] = v;
    }
    std::size_t lower = k + 1;
    for (auto it = h.rbegin(); it != h.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            if (dist2(hull[i], hull[j]) >= thr * thr) return true;
    return false;
}

// Crossing component of the region [lo, hi): a component of the induced
// subgraph with a member within distance r of every face.
bool has_crossing_component(const SpatialGraph& g, const CellIndex& idx, const double* lo,
                            const double* hi, double r) {
    const int d = g.dim();
    auto verts = idx.query_box(lo, hi);
    if (verts.empty()) return false;
    for (const auto& comp : induced_components(g, verts)) {
        bool crossing = true;
        for (int j = 0; j < d && crossing; ++j) {
            bool near_lo = false, near_hi = false;
            for (u32 v : comp) {
                const double* p = g.pos(v);
                if (p[j] - lo[j] <= r) near_lo = true;
                if (hi[j] - p[j] <= r) near_hi = true;
                if (near_lo && near_hi) break;
            }
            crossing = near_lo && near_hi;
        }
        if (crossing) return true;
    }
    return false;
}

// good(λ): every half-side subtile has a crossing component, and all
// components of diameter >= side/5 coincide (and at least one exists).
bool region_good(const SpatialGraph& g, const CellIndex& idx, const double* lo,
                 const double* hi, double nominal_side, double r) {
    const int d = g.dim();
    std::vector<double> slo(d), shi(d);
    for (u32 corner = 0; corner < (1u << d); ++corner) {
        for (int j = 0; j < d; ++j) {
            double half = (hi[j] - lo[j]) / 2.0;
            slo[j] = lo[j] + ((corner >> j) & 1 ? half : 0.0);
            shi[j] = slo[j] + half;
        }
        if (!has_crossing_component(g, idx, slo.data(), shi.data(), r)) return false;
    }
    auto verts = idx.query_box(lo, hi);
    auto comps = induced_components(g, verts);
    int large = 0;
    for (const auto& comp : comps)
        if (diameter_at_least(g, comp, nominal_side / 5.0)) ++large;
    return large == 1;
}

}  // namespace

TileClassification classify_good_useful(const SpatialGraph& g, double M) {
    if (!(M > 10.0 / 3.0)) throw Error(ErrCode::ConfigError, "need M > 10/3 so rho > 0");
    const double r = g.radius;
    const double rho = 2.0 * (3.0 * M / 10.0 - 1.0) * r;
    TileClassification cls;
    cls.M = M;
    cls.tiling = build_tiling(g, rho);
    const Tiling& t = cls.tiling;
    const int d = t.d;
    std::size_t m = t.tile_count();
    cls.normal_wide.assign(m, 0);
    cls.normal_loose.assign(m, 0);
    cls.good.assign(m, 0);
    cls.useful.assign(m, 0);
    cls.clipped.assign(m, 0);
    cls.in_T_A.assign(m, 0);
    cls.in_L_A.assign(m, 0);
    classify_bands(cls);

    CellIndex idx(g.points, std::max(r, t.side / 64.0));
    const double half_dom = t.side / 2.0;
    parallel_for(m, [&](std::size_t ti) {
        u32 tile = static_cast<u32>(ti);
        std::vector<double> lo(d), hi(d), elo(d), ehi(d);
        t.tile_bounds(tile, lo.data(), hi.data());
        bool clipped = false;
        for (int j = 0; j < d; ++j) {
            double center = (lo[j] + hi[j]) / 2.0;
            elo[j] = center - M * r / 2.0;
            ehi[j] = center + M * r / 2.0;
            if (elo[j] < -half_dom) { elo[j] = -half_dom; clipped = true; }
            if (ehi[j] > half_dom) { ehi[j] = half_dom; clipped = true; }
        }
        cls.clipped[tile] = clipped ? 1 : 0;
        bool good_tau = region_good(g, idx, lo.data(), hi.data(), rho, r);
        cls.good[tile] = good_tau ? 1 : 0;
        if (good_tau) {
            bool good_enlarged = region_good(g, idx, elo.data(), ehi.data(), M * r, r);
            cls.useful[tile] = good_enlarged ? 1 : 0;
        }
    });
    return cls;
}

void classify_bands(TileClassification& cls) {
    const Tiling& t = cls.tiling;
    cls.normal_wide.assign(t.tile_count(), 0);
    cls.normal_loose.assign(t.tile_count(), 0);
    for (u32 i = 0; i < t.tile_count(); ++i) {
        double cnt = static_cast<double>(t.occupancy[i].size());
        cls.normal_wide[i] = (cnt >= 19.0 / 20.0 * t.vol_rho && cnt <= 21.0 / 20.0 * t.vol_rho);
        cls.normal_loose[i] = (cnt >= 0.5 * t.vol_rho && cnt <= 2.0 * t.vol_rho);
    }
}

void classify_against_set(TileClassification& cls, const std::vector<u32>& A) {
    cls.in_T_A.assign(cls.tiling.tile_count(), 0);
    cls.in_L_A.assign(cls.tiling.tile_count(), 0);
    for (u32 t : tiles_of_set(cls.tiling, A)) cls.in_L_A[t] = 1;
    for (u32 t : dense_tiles(cls.tiling, A)) cls.in_T_A[t] = 1;
}

u64 count_normal_pairs(const Tiling& tiling, const std::vector<char>& normal,
                       const std::vector<u32>& L) {
    std::vector<char> in_L(tiling.tile_count(), 0);
    for (u32 t : L) in_L[t] = 1;
    u64 pairs = 0;
    std::vector<int> nb(tiling.d);
    for (u32 t : L) {
        if (!normal[t]) continue;
        auto c = tiling.box.coords_of(t);
        for (int j = 0; j < tiling.d; ++j) {
            for (int s : {-1, +1}) {
                nb = c;
                nb[j] += s;
                if (!tiling.box.contains(nb)) continue;
                u32 o = tiling.box.index_of(nb);
                if (!in_L[o] && normal[o]) ++pairs;
            }
        }
    }
    return pairs;
}

}  // namespace geomix
