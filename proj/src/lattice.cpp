#include "geomix/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "geomix/random.hpp"

namespace geomix {

Box Box::phi_m(double m, int d) {
    if (!(m > 0.0) || d < 1) throw Error(ErrCode::ConfigError, "phi_m needs m > 0, d >= 1");
    double side = std::pow(m, 1.0 / d);
    Box b;
    b.d = d;
    b.lo.assign(d, static_cast<int>(std::ceil(-side / 2.0)));
    // largest integer strictly below side/2
    int hi = static_cast<int>(std::ceil(side / 2.0)) - 1;
    b.hi.assign(d, hi);
    return b;
}

Box Box::cube(int d, int count) {
    if (d < 1 || count < 1) throw Error(ErrCode::ConfigError, "cube needs d >= 1, count >= 1");
    Box b;
    b.d = d;
    b.lo.assign(d, -(count / 2));
    b.hi.assign(d, count - 1 - count / 2);
    return b;
}

std::size_t Box::size() const {
    std::size_t s = 1;
    for (int j = 0; j < d; ++j) s *= extent(j);
    return s;
}

bool Box::contains(const std::vector<int>& c) const {
    for (int j = 0; j < d; ++j)
        if (c[j] < lo[j] || c[j] > hi[j]) return false;
    return true;
}

u32 Box::index_of(const std::vector<int>& c) const {
    std::size_t f = 0;
    for (int j = 0; j < d; ++j) f = f * extent(j) + static_cast<std::size_t>(c[j] - lo[j]);
    return static_cast<u32>(f);
}

std::vector<int> Box::coords_of(u32 idx) const {
    std::vector<int> c(d);
    std::size_t f = idx;
    for (int j = d - 1; j >= 0; --j) {
        c[j] = lo[j] + static_cast<int>(f % extent(j));
        f /= extent(j);
    }
    return c;
}

namespace {

// Relative offsets with ℓ1 (or ℓ∞) norm in [1, k].
std::vector<std::vector<int>> norm_ball_offsets(int d, int k, bool use_linf) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(d, -k);
    for (;;) {
        int l1 = 0, linf = 0;
        for (int j = 0; j < d; ++j) {
            l1 += std::abs(cur[j]);
            linf = std::max(linf, std::abs(cur[j]));
        }
        int norm = use_linf ? linf : l1;
        if (norm >= 1 && norm <= k) out.push_back(cur);
        int j = d - 1;
        while (j >= 0 && cur[j] == k) {
            cur[j] = -k;
            --j;
        }
        if (j < 0) break;
        ++cur[j];
    }
    return out;
}

}  // namespace

Boundaries boundaries(const Box& box, const std::vector<u32>& K) {
    Boundaries out;
    std::unordered_set<u32> in_K(K.begin(), K.end());
    auto offs_star = norm_ball_offsets(box.d, 1, true);
    std::unordered_set<u32> outer_l1, outer_star;
    std::vector<int> nb(box.d);
    for (u32 s : K) {
        auto c = box.coords_of(s);
        bool on_inner = false, on_inner_star = false;
        for (const auto& off : offs_star) {
            bool is_l1 = true;
            int l1 = 0;
            for (int j = 0; j < box.d; ++j) {
                nb[j] = c[j] + off[j];
                l1 += std::abs(off[j]);
            }
            is_l1 = (l1 == 1);
            if (!box.contains(nb)) continue;
            u32 t = box.index_of(nb);
            if (in_K.count(t)) continue;
            on_inner_star = true;
            out.edges_star.emplace_back(s, t);
            outer_star.insert(t);
            if (is_l1) {
                on_inner = true;
                out.edges_l1.emplace_back(s, t);
                outer_l1.insert(t);
            }
        }
        if (on_inner) out.inner_l1.push_back(s);
        if (on_inner_star) out.inner_star.push_back(s);
    }
    out.outer_l1.assign(outer_l1.begin(), outer_l1.end());
    out.outer_star.assign(outer_star.begin(), outer_star.end());
    std::sort(out.outer_l1.begin(), out.outer_l1.end());
    std::sort(out.outer_star.begin(), out.outer_star.end());
    std::sort(out.inner_l1.begin(), out.inner_l1.end());
    std::sort(out.inner_star.begin(), out.inner_star.end());
    auto edge_key = [](const std::pair<u32, u32>& e) {
        return std::make_pair(std::min(e.first, e.second), std::max(e.first, e.second));
    };
    auto edge_less = [&](const std::pair<u32, u32>& a, const std::pair<u32, u32>& b) {
        return edge_key(a) < edge_key(b);
    };
    std::sort(out.edges_l1.begin(), out.edges_l1.end(), edge_less);
    std::sort(out.edges_star.begin(), out.edges_star.end(), edge_less);
    return out;
}

Matching greedy_disjoint_matching(const Box& box, const std::vector<u32>& K,
                                  const SiteField* field) {
    Matching m;
    Boundaries b = boundaries(box, K);  // edges_l1 already in (min,max) lexicographic order
    std::unordered_set<u32> used;
    for (const auto& e : b.edges_l1) {
        if (used.count(e.first) || used.count(e.second)) continue;
        used.insert(e.first);
        used.insert(e.second);
        m.edges.push_back(e);
        if (field && field->open[e.first] && field->open[e.second]) ++m.open_open;
    }
    return m;
}

SiteField sample_site_field(const Box& box, double p, u64 seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrCode::ConfigError, "p must be in [0,1]");
    SiteField f;
    f.box = box;
    f.p = p;
    f.seed = seed;
    f.open.resize(box.size());
    RngStream rng(derive_seed(seed, /*purpose=*/2, 0));
    for (auto& bit : f.open) bit = rng.next_double() < p ? 1 : 0;
    return f;
}

SiteField sample_site_field(double m, int d, double p, u64 seed) {
    return sample_site_field(Box::phi_m(m, d), p, seed);
}

std::vector<u32> largest_open_component(const SiteField& field) {
    const Box& box = field.box;
    std::vector<char> seen(field.open.size(), 0);
    std::vector<u32> best, comp, stack;
    auto offs = norm_ball_offsets(box.d, 1, false);
    std::vector<int> nb(box.d);
    for (u32 s = 0; s < field.open.size(); ++s) {
        if (!field.open[s] || seen[s]) continue;
        comp.clear();
        stack.assign(1, s);
        seen[s] = 1;
        while (!stack.empty()) {
            u32 x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            auto c = box.coords_of(x);
            for (const auto& off : offs) {
                for (int j = 0; j < box.d; ++j) nb[j] = c[j] + off[j];
                if (!box.contains(nb)) continue;
                u32 t = box.index_of(nb);
                if (field.open[t] && !seen[t]) {
                    seen[t] = 1;
                    stack.push_back(t);
                }
            }
        }
        // strict > keeps the first (smallest min index) component on ties
        if (comp.size() > best.size()) best = comp;
    }
    std::sort(best.begin(), best.end());
    return best;
}

std::vector<std::vector<u32>> lattice_components(const Box& box, const std::vector<u32>& sites,
                                                 int k, bool use_linf) {
    if (k < 1) throw Error(ErrCode::ConfigError, "k must be >= 1");
    std::unordered_set<u32> members(sites.begin(), sites.end());
    std::vector<u32> sorted(sites);
    std::sort(sorted.begin(), sorted.end());
    std::unordered_set<u32> seen;
    auto offs = norm_ball_offsets(box.d, k, use_linf);
    std::vector<std::vector<u32>> out;
    std::vector<int> nb(box.d);
    std::vector<u32> stack;
    for (u32 s : sorted) {
        if (seen.count(s)) continue;
        out.emplace_back();
        auto& comp = out.back();
        stack.assign(1, s);
        seen.insert(s);
        while (!stack.empty()) {
            u32 x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            auto c = box.coords_of(x);
            for (const auto& off : offs) {
                for (int j = 0; j < box.d; ++j) nb[j] = c[j] + off[j];
                if (!box.contains(nb)) continue;
                u32 t = box.index_of(nb);
                if (members.count(t) && !seen.count(t)) {
                    seen.insert(t);
                    stack.push_back(t);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
    }
    return out;
}

IsoRatio lattice_iso_check(const Box& box, const std::vector<u32>& K, double eps) {
    if (K.empty()) throw Error(ErrCode::EmptySet, "lattice_iso_check needs nonempty K");
    IsoRatio r;
    Boundaries b = boundaries(box, K);
    double pw = std::pow(static_cast<double>(K.size()),
                         static_cast<double>(box.d - 1) / box.d);
    r.ratio = static_cast<double>(b.edges_l1.size()) / pw;
    r.window_ok = static_cast<double>(K.size()) <=
                  (2.0 / 3.0) * (1.0 - eps) * static_cast<double>(box.size());
    return r;
}

}  // namespace geomix
