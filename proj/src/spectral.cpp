#include "geomix/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "geomix/random.hpp"

namespace geomix {

std::vector<double> transition_matvec(const GiantSubgraph& g, const std::vector<double>& v) {
    if (v.size() != g.vertex_count())
        throw Error(ErrCode::DimensionMismatch, "matvec dimension mismatch");
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t x = 0; x < v.size(); ++x) {
        double s = 0.0;
        for (u64 e = g.offsets[x]; e < g.offsets[x + 1]; ++e) s += v[g.neighbors[e]];
        out[x] = g.degrees[x] ? s / g.degrees[x] : 0.0;
    }
    return out;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LanczosState {
    SpectralResult res;
    VectorXd top_vec;  // Ritz vector of the top (signed) deflated eigenvalue
};

// Symmetrized operator S = D^{1/2} P D^{-1/2}: S v = D^{-1/2} A D^{-1/2} v.
void s_matvec(const GiantSubgraph& g, const std::vector<double>& inv_sqrt_deg,
              const VectorXd& v, VectorXd& out, VectorXd& scratch) {
    const std::size_t n = g.vertex_count();
    for (std::size_t x = 0; x < n; ++x) scratch[x] = v[x] * inv_sqrt_deg[x];
    for (std::size_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (u64 e = g.offsets[x]; e < g.offsets[x + 1]; ++e) s += scratch[g.neighbors[e]];
        out[x] = s * inv_sqrt_deg[x];
    }
}

// Deflated Lanczos with full reorthogonalization against the stored basis and
// sqrt(pi), with thick restarts. The projected matrix H = Q^T S Q is kept
// dense (columns come for free from the reorthogonalization dot products), so
// restarts need no tridiagonal bookkeeping.
LanczosState run_lanczos(const GiantSubgraph& g, double tol, int max_iter, bool want_vector) {
    const std::size_t n = g.vertex_count();
    if (n < 2) throw Error(ErrCode::ConfigError, "lambda2 needs >= 2 vertices");
    if (g.edge_count == 0) throw Error(ErrCode::NoEdges, "lambda2 needs edges");

    std::vector<double> inv_sqrt_deg(n);
    VectorXd u(n);  // sqrt(pi), unit norm
    for (std::size_t x = 0; x < n; ++x) {
        if (g.degrees[x] == 0) throw Error(ErrCode::ConfigError, "graph must be connected");
        inv_sqrt_deg[x] = 1.0 / std::sqrt(static_cast<double>(g.degrees[x]));
        u[x] = std::sqrt(static_cast<double>(g.degrees[x]) / (2.0 * g.edge_count));
    }

    const std::size_t dim = n - 1;  // deflated space dimension
    const std::size_t m_max = std::min<std::size_t>(dim, 240);
    const std::size_t keep_each = 15;  // Ritz pairs kept per spectrum end on restart

    std::vector<VectorXd> Q;
    Q.reserve(m_max);
    MatrixXd H = MatrixXd::Zero(m_max, m_max);
    VectorXd w(n), scratch(n);

    RngStream rng(derive_seed(0x5eedULL, n, g.edge_count));
    auto fresh_vector = [&](VectorXd& q) -> bool {
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (std::size_t x = 0; x < n; ++x) q[x] = rng.next_double() - 0.5;
            for (int pass = 0; pass < 2; ++pass) {
                q -= (u.dot(q)) * u;
                for (const auto& b : Q) q -= (b.dot(q)) * b;
            }
            double norm = q.norm();
            if (norm > 1e-8) {
                q /= norm;
                return true;
            }
        }
        return false;
    };

    LanczosState st;
    VectorXd q(n);
    if (!fresh_vector(q)) throw Error(ErrCode::ConfigError, "degenerate start space");

    double beta = 1.0;
    bool have_next = true;
    bool exhausted = false;
    int iterations = 0;
    double prev_top = 2.0, prev_bot = -2.0;
    const int check_every = 10;
    int stable_checks = 0;

    auto finish = [&](double res_top, double res_bot, const MatrixXd& Y, const VectorXd& theta,
                      bool converged) {
        const std::size_t j = Q.size();
        double top = theta[j - 1];
        double bot = theta[0];
        st.res.lambda2_signed = std::min(1.0, top);
        st.res.lambda2_abs = std::min(1.0, std::max(top, -bot));
        if (st.res.lambda2_abs < st.res.lambda2_signed) st.res.lambda2_abs = st.res.lambda2_signed;
        st.res.iterations = iterations;
        st.res.residual = std::max(res_top, res_bot);
        st.res.bipartite = st.res.lambda2_abs >= 1.0 - 1e-9;
        st.res.relax_abs = st.res.lambda2_abs >= 1.0 - 1e-15 ? kInf : 1.0 / (1.0 - st.res.lambda2_abs);
        st.res.relax_signed =
            st.res.lambda2_signed >= 1.0 - 1e-15 ? kInf : 1.0 / (1.0 - st.res.lambda2_signed);
        st.res.converged = converged;
        if (want_vector) {
            st.top_vec = VectorXd::Zero(n);
            for (std::size_t k = 0; k < j; ++k) st.top_vec += Y(k, j - 1) * Q[k];
        }
    };

    while (iterations < max_iter) {
        if (!have_next) {
            if (Q.size() >= dim || !fresh_vector(q)) {
                exhausted = true;
            } else {
                have_next = true;
            }
        }
        if (!exhausted) {
            Q.push_back(q);
            const std::size_t j = Q.size() - 1;
            s_matvec(g, inv_sqrt_deg, Q[j], w, scratch);
            w -= (u.dot(w)) * u;
            for (std::size_t i = 0; i <= j; ++i) {
                double h = Q[i].dot(w);
                H(i, j) = H(j, i) = h;
                w -= h * Q[i];
            }
            // second orthogonalization pass (rounding cleanup only)
            w -= (u.dot(w)) * u;
            for (std::size_t i = 0; i <= j; ++i) w -= (Q[i].dot(w)) * Q[i];
            beta = w.norm();
            ++iterations;
            if (beta > 1e-13) {
                q = w / beta;
                have_next = true;
            } else {
                have_next = false;
            }
        }

        const std::size_t j = Q.size();
        bool at_restart = (j == m_max);
        bool do_check = exhausted || at_restart || !have_next || iterations >= max_iter ||
                        iterations % check_every == 0;
        if (do_check && j > 0) {
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(H.topLeftCorner(j, j));
            const VectorXd& theta = es.eigenvalues();  // ascending
            const MatrixXd& Y = es.eigenvectors();
            double b_eff = have_next ? beta : 0.0;
            double res_top = b_eff * std::fabs(Y(j - 1, j - 1));
            double res_bot = b_eff * std::fabs(Y(j - 1, 0));
            double top = theta[j - 1], bot = theta[0];
            double rel = std::max(std::fabs(top - prev_top) / std::max(1.0, std::fabs(top)),
                                  std::fabs(bot - prev_bot) / std::max(1.0, std::fabs(bot)));
            prev_top = top;
            prev_bot = bot;
            stable_checks = rel < tol ? stable_checks + 1 : 0;
            bool converged = (res_top <= tol && res_bot <= tol && stable_checks >= 1) ||
                             (exhausted && !have_next) || (!have_next && Q.size() >= dim);
            if (converged || exhausted) {
                finish(res_top, res_bot, Y, theta, true);
                return st;
            }
            if (iterations >= max_iter) {
                finish(res_top, res_bot, Y, theta, false);
                return st;
            }
            if (at_restart) {
                // thick restart: keep extreme Ritz vectors, H becomes diagonal
                std::size_t keep = std::min(2 * keep_each, j - 1);
                std::vector<std::size_t> sel;
                for (std::size_t i = 0; i < keep_each && i < j; ++i) sel.push_back(i);
                for (std::size_t i = 0; i < keep_each && j - 1 - i > (keep_each - 1); ++i)
                    sel.push_back(j - 1 - i);
                std::sort(sel.begin(), sel.end());
                sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
                keep = sel.size();
                std::vector<VectorXd> newQ(keep, VectorXd::Zero(n));
                for (std::size_t c = 0; c < keep; ++c) {
                    for (std::size_t k = 0; k < j; ++k) newQ[c] += Y(k, sel[c]) * Q[k];
                }
                Q = std::move(newQ);
                H.setZero();
                for (std::size_t c = 0; c < keep; ++c) H(c, c) = theta[sel[c]];
                // q (the pending next vector) is orthogonal to span(Q) already
            }
        }
    }
    // unreachable: the loop exits via finish()
    throw Error(ErrCode::NoConvergence, "lanczos did not finish");
}

}  // namespace

SpectralResult lambda2_try(const GiantSubgraph& g, double tol, int max_iter) {
    return run_lanczos(g, tol, max_iter, /*want_vector=*/false).res;
}

SpectralResult lambda2(const GiantSubgraph& g, double tol, int max_iter) {
    SpectralResult res = lambda2_try(g, tol, max_iter);
    if (!res.converged)
        throw Error(ErrCode::NoConvergence,
                    "lambda2 residual " + std::to_string(res.residual) + " after " +
                        std::to_string(res.iterations) + " iterations");
    return res;
}

double relaxation_time(const SpectralResult& res, RelaxMode mode) {
    return mode == RelaxMode::Abs ? res.relax_abs : res.relax_signed;
}

std::vector<double> fiedler_vector(const GiantSubgraph& g, double tol) {
    auto st = run_lanczos(g, tol, 100000, /*want_vector=*/true);
    std::vector<double> out(g.vertex_count());
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = st.top_vec[x] / std::sqrt(static_cast<double>(g.degrees[x]));
    return out;
}

// ---- banded d=1 path ------------------------------------------------------

bool has_interval_adjacency(const GiantSubgraph& g) {
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        u64 b = g.offsets[v], e = g.offsets[v + 1];
        if (b == e) return false;
        u32 expect = g.neighbors[b];
        for (u64 i = b; i < e; ++i) {
            if (expect == v) ++expect;
            if (g.neighbors[i] != expect) return false;
            ++expect;
        }
    }
    return true;
}

namespace {

// Eigenvalue count below sigma via the inertia of a banded LDL^T (no
// pivoting; zero pivots handled by retrying at a jittered shift).
int count_below(const std::vector<std::vector<double>>& band, std::size_t n, int b, double sigma,
                bool& ok) {
    // work[o][i] = entry (i, i+o), o = 0..b
    std::vector<std::vector<double>> w(band);
    for (std::size_t i = 0; i < n; ++i) w[0][i] -= sigma;
    int negatives = 0;
    ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        double d = w[0][i];
        if (std::fabs(d) < 1e-300) {
            ok = false;
            return 0;
        }
        if (d < 0.0) ++negatives;
        std::size_t reach = std::min<std::size_t>(b, n - 1 - i);
        for (std::size_t r = 1; r <= reach; ++r) {
            double lr = w[r][i] / d;
            for (std::size_t c = r; c <= reach; ++c) {
                // M[i+r][i+c] -= l_r * M[i][i+c]
                w[c - r][i + r] -= lr * w[c][i];
            }
        }
    }
    return negatives;
}

}  // namespace

double lambda2_signed_banded(const GiantSubgraph& g, double tol) {
    const std::size_t n = g.vertex_count();
    if (n < 2) throw Error(ErrCode::ConfigError, "needs >= 2 vertices");
    if (!has_interval_adjacency(g))
        throw Error(ErrCode::Unsupported, "banded path needs interval adjacency");
    int b = 0;
    for (std::size_t v = 0; v < n; ++v) {
        u32 first = g.neighbors[g.offsets[v]];
        u32 last = g.neighbors[g.offsets[v + 1] - 1];
        b = std::max({b, static_cast<int>(v) - static_cast<int>(first),
                      static_cast<int>(last) - static_cast<int>(v)});
    }
    std::vector<std::vector<double>> band(b + 1, std::vector<double>(n, 0.0));
    for (std::size_t v = 0; v < n; ++v) {
        for (u64 e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
            u32 y = g.neighbors[e];
            if (y > v)
                band[y - v][v] = 1.0 / std::sqrt(static_cast<double>(g.degrees[v]) * g.degrees[y]);
        }
    }
    auto count_ge = [&](double sigma) {
        for (int jitter = 0; jitter < 6; ++jitter) {
            bool ok;
            double s = sigma + jitter * 1e-13;
            int below = count_below(band, n, b, s, ok);
            if (ok) return static_cast<int>(n) - below;
        }
        throw Error(ErrCode::NoConvergence, "banded factorization kept hitting zero pivots");
    };
    double lo = -1.0, hi = 1.0;
    // invariant: count_ge(lo) >= 2, count_ge(hi) < 2
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (count_ge(mid) >= 2)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace geomix
