#include "geomix/structure.hpp"

#include <algorithm>
#include <cmath>

namespace geomix {

ComponentLabeling connected_components(const SpatialGraph& g) {
    const std::size_t n = g.vertex_count();
    ComponentLabeling out;
    out.labels.assign(n, ~u32(0));
    std::vector<u32> queue;
    for (std::size_t v = 0; v < n; ++v) {
        if (out.labels[v] != ~u32(0)) continue;
        // New component: label ids increase with the smallest member index,
        // which makes the documented tie-break (smallest min global index)
        // equal to "smallest label among max-size components".
        u32 label = static_cast<u32>(out.sizes.size());
        u64 size = 0;
        queue.clear();
        queue.push_back(static_cast<u32>(v));
        out.labels[v] = label;
        while (!queue.empty()) {
            u32 x = queue.back();
            queue.pop_back();
            ++size;
            for (u64 e = g.offsets[x]; e < g.offsets[x + 1]; ++e) {
                u32 y = g.neighbors[e];
                if (out.labels[y] == ~u32(0)) {
                    out.labels[y] = label;
                    queue.push_back(y);
                }
            }
        }
        out.sizes.push_back(size);
    }
    out.sizes_desc = out.sizes;
    std::sort(out.sizes_desc.begin(), out.sizes_desc.end(), std::greater<>());
    u64 best = 0;
    for (std::size_t c = 0; c < out.sizes.size(); ++c) {
        if (out.sizes[c] > best) {
            best = out.sizes[c];
            out.giant_label = static_cast<u32>(c);
        }
    }
    return out;
}

GiantSubgraph extract_giant(const SpatialGraph& g, const ComponentLabeling& labeling) {
    if (g.vertex_count() == 0) throw Error(ErrCode::EmptyGraph, "extract_giant on empty graph");
    GiantSubgraph sub;
    sub.dim = g.dim();
    sub.side = g.side();
    sub.radius = g.radius;
    sub.volume_n = g.points.config.volume_n;
    sub.local_of_global.assign(g.vertex_count(), -1);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (labeling.labels[v] == labeling.giant_label) {
            sub.local_of_global[v] = static_cast<i64>(sub.global_ids.size());
            sub.global_ids.push_back(static_cast<u32>(v));
        }
    }
    const std::size_t m = sub.global_ids.size();
    sub.offsets.assign(m + 1, 0);
    sub.degrees.assign(m, 0);
    sub.coords.resize(m * static_cast<std::size_t>(sub.dim));
    for (std::size_t v = 0; v < m; ++v) {
        u32 gv = sub.global_ids[v];
        sub.degrees[v] = g.degrees[gv];  // giant is a full component: all neighbors stay
        const double* p = g.pos(gv);
        std::copy(p, p + sub.dim, sub.coords.begin() + v * sub.dim);
    }
    for (std::size_t v = 0; v < m; ++v) sub.offsets[v + 1] = sub.offsets[v] + sub.degrees[v];
    sub.edge_count = sub.offsets[m] / 2;
    sub.neighbors.resize(sub.offsets[m]);
    for (std::size_t v = 0; v < m; ++v) {
        u32 gv = sub.global_ids[v];
        u64 at = sub.offsets[v];
        for (u64 e = g.offsets[gv]; e < g.offsets[gv + 1]; ++e)
            sub.neighbors[at++] = static_cast<u32>(sub.local_of_global[g.neighbors[e]]);
        // parent adjacency is sorted and local ids are order-preserving
    }
    return sub;
}

std::vector<double> stationary_distribution(const GiantSubgraph& g) {
    if (g.edge_count == 0) throw Error(ErrCode::NoEdges, "stationary distribution needs >= 1 edge");
    std::vector<double> pi(g.vertex_count());
    const double denom = 2.0 * static_cast<double>(g.edge_count);
    for (std::size_t v = 0; v < pi.size(); ++v) pi[v] = g.degrees[v] / denom;
    return pi;
}

CensusReport component_census(const SpatialGraph& g, const ComponentLabeling& labeling) {
    CensusReport rep;
    rep.n = g.points.config.volume_n;
    rep.d = g.dim();
    rep.r = g.radius;
    rep.seed = g.points.config.seed;
    rep.total_vertices = g.vertex_count();
    if (!labeling.sizes_desc.empty()) rep.giant_size = labeling.sizes_desc[0];
    if (labeling.sizes_desc.size() > 1) rep.second_size = labeling.sizes_desc[1];
    u64 giant_edges = 0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (labeling.labels[v] == labeling.giant_label) giant_edges += g.degrees[v];
    rep.giant_edges = giant_edges / 2;
    rep.giant_fraction = rep.total_vertices ? static_cast<double>(rep.giant_size) / rep.total_vertices : 0.0;
    double logn = std::log(std::max(rep.n, 2.0));
    double pw = rep.d > 1 ? std::pow(logn, static_cast<double>(rep.d) / (rep.d - 1)) : logn;
    rep.second_over_logpow = rep.second_size / pw;
    return rep;
}

double degree_band_census(const GiantSubgraph& g, double c_lo, double c_hi, double r, int d) {
    if (!(c_lo >= 0.0) || !(c_hi >= c_lo)) throw Error(ErrCode::ConfigError, "need 0 <= c_lo <= c_hi");
    if (g.vertex_count() == 0) return 0.0;
    const double rd = std::pow(r, d);
    u64 hits = 0;
    for (u32 deg : g.degrees)
        if (deg >= c_lo * rd && deg <= c_hi * rd) ++hits;
    return static_cast<double>(hits) / g.vertex_count();
}

double total_degree_ratio(const GiantSubgraph& g, const std::vector<u32>& A, double r, int d) {
    if (A.empty()) throw Error(ErrCode::EmptySet, "total_degree_ratio needs nonempty A");
    u64 sum = 0;
    for (u32 v : A) {
        if (v >= g.vertex_count()) throw Error(ErrCode::Domain, "vertex outside giant");
        sum += g.degrees[v];
    }
    return static_cast<double>(sum) / (static_cast<double>(A.size()) * std::pow(r, d));
}

u64 boundary_edge_count(const GiantSubgraph& g, const std::vector<u32>& A) {
    std::vector<char> in(g.vertex_count(), 0);
    for (u32 v : A) in[v] = 1;
    u64 cut = 0;
    for (u32 v : A)
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
            if (!in[g.neighbors[e]]) ++cut;
    return cut;
}

std::vector<u32> bfs_distances(const GiantSubgraph& g, u32 source) {
    std::vector<u32> dist(g.vertex_count(), ~u32(0));
    std::vector<u32> frontier{source}, next;
    dist[source] = 0;
    u32 level = 0;
    while (!frontier.empty()) {
        ++level;
        next.clear();
        for (u32 x : frontier) {
            for (u64 e = g.offsets[x]; e < g.offsets[x + 1]; ++e) {
                u32 y = g.neighbors[e];
                if (dist[y] == ~u32(0)) {
                    dist[y] = level;
                    next.push_back(y);
                }
            }
        }
        frontier.swap(next);
    }
    return dist;
}

}  // namespace geomix
