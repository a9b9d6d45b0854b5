#pragma once

// Brute-force reference oracles for the polytope queries: dense grid search
// over the mixture weights with window refinement, plus exact planar geometry
// for d <= 2. Deliberately independent of the LP / Frank-Wolfe implementation
// paths they cross-check.

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>

#include "pdfw/core.hpp"
#include "pdfw/polytope.hpp"

namespace pdfw::bruteforce {

using Vec = pdfw::Vec;

// Minimizes eval(v) over the mixture polytope by grid search on the free
// simplex coordinates (k_s - 1 per state), refining the window around the
// incumbent. eval returns nullopt for points it rejects (e.g. infeasible).
inline double grid_minimize(const MixturePolytope& poly,
                            const std::function<std::optional<double>(const Vec&)>& eval,
                            int pts_per_dim = 9, int levels = 20) {
    struct FreeCoord {
        int state;
        int index;
    };
    std::vector<FreeCoord> coords;
    for (int s = 0; s < poly.n_states(); ++s)
        for (int k = 0; k + 1 < static_cast<int>(poly.vertices[s].size()); ++k)
            coords.push_back({s, k});
    const int nd = static_cast<int>(coords.size());

    std::vector<double> lo(nd, 0.0), hi(nd, 1.0);
    std::vector<double> best_coord(nd, 0.0);
    double best = std::numeric_limits<double>::infinity();
    bool have_best = false;

    std::vector<double> c(nd);
    std::vector<Vec> weights;
    for (const auto& vs : poly.vertices) weights.emplace_back(vs.size(), 0.0);

    const auto eval_coords = [&]() -> std::optional<double> {
        for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
        for (int i = 0; i < nd; ++i) weights[coords[i].state][coords[i].index] = c[i];
        for (int s = 0; s < poly.n_states(); ++s) {
            double sum = 0.0;
            for (std::size_t k = 0; k + 1 < weights[s].size(); ++k) sum += weights[s][k];
            if (sum > 1.0 + 1e-12) return std::nullopt;
            weights[s].back() = std::max(0.0, 1.0 - sum);
        }
        return eval(poly.point_of_weights(weights));
    };

    if (nd == 0) {
        auto v = eval_coords();
        return v ? *v : std::numeric_limits<double>::infinity();
    }

    for (int level = 0; level < levels; ++level) {
        std::vector<int> idx(nd, 0);
        for (;;) {
            for (int i = 0; i < nd; ++i)
                c[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / double(pts_per_dim - 1);
            if (auto v = eval_coords(); v && (!have_best || *v < best)) {
                best = *v;
                best_coord = c;
                have_best = true;
            }
            int d = 0;
            while (d < nd && ++idx[d] == pts_per_dim) idx[d++] = 0;
            if (d == nd) break;
        }
        if (!have_best) break;
        for (int i = 0; i < nd; ++i) {
            const double w = (hi[i] - lo[i]) * 0.5;
            lo[i] = std::max(0.0, best_coord[i] - 0.5 * w);
            hi[i] = std::min(1.0, lo[i] + w);
            lo[i] = std::max(0.0, hi[i] - w);
        }
    }
    return best;
}

inline double grid_dist(const MixturePolytope& poly, const Vec& gamma, int pts_per_dim = 9,
                        int levels = 20) {
    return grid_minimize(poly, [&](const Vec& v) { return dist2(v, gamma); }, pts_per_dim,
                         levels);
}

inline double grid_fw_gap(const ProblemInstance& inst, const MixturePolytope& poly,
                          const Vec& gamma, int pts_per_dim = 9, int levels = 20) {
    const Vec grad = inst.objective.gradient(gamma);
    const double lin_min = grid_minimize(
        poly,
        [&](const Vec& v) -> std::optional<double> {
            const Vec r = inst.constraints.residual(v);
            for (double ri : r)
                if (ri > 1e-12) return std::nullopt;
            return dot(grad, v);
        },
        pts_per_dim, levels);
    return dot(grad, gamma) - lin_min;
}

inline double grid_min_objective(const ProblemInstance& inst,
                                 const MixturePolytope& poly) {
    return grid_minimize(poly, [&](const Vec& v) -> std::optional<double> {
        const Vec r = inst.constraints.residual(v);
        for (double ri : r)
            if (ri > 1e-12) return std::nullopt;
        return inst.objective.value(v);
    });
}

inline double grid_slater_margin(const ProblemInstance& inst,
                                 const MixturePolytope& poly) {
    // max over v of min_i (b_i - <a_i, v>) == -min over v of max_i residual_i
    return -grid_minimize(poly, [&](const Vec& v) -> std::optional<double> {
        const Vec r = inst.constraints.residual(v);
        double worst = -std::numeric_limits<double>::infinity();
        for (double ri : r) worst = std::max(worst, ri);
        return worst;
    });
}

// --- exact low-dimensional geometry oracles (d <= 2) ------------------------
//
// The polytope's extreme points are among the probability-weighted sums of
// one vertex per state; with <= 3 states and <= 3 vertices that is at most 27
// candidate points, so hull construction, halfplane clipping, and vertex
// enumeration give machine-precision references with no optimizer involved.

inline std::vector<Vec> product_points(const MixturePolytope& poly) {
    std::vector<Vec> pts{Vec(static_cast<std::size_t>(poly.dim), 0.0)};
    for (int s = 0; s < poly.n_states(); ++s) {
        std::vector<Vec> next;
        next.reserve(pts.size() * poly.vertices[s].size());
        for (const auto& base : pts)
            for (const auto& v : poly.vertices[s]) {
                Vec q = base;
                for (int j = 0; j < poly.dim; ++j) q[j] += poly.probs[s] * v[j];
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }
    return pts;
}

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Counterclockwise convex hull (monotone chain); collinear points dropped.
inline std::vector<Vec> hull2(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const auto n = pts.size();
    if (n <= 2) return pts;
    std::vector<Vec> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// Clips a convex polygon by the halfplane a . v <= b.
inline std::vector<Vec> clip_halfplane(const std::vector<Vec>& poly, const Vec& a, double b) {
    std::vector<Vec> out;
    const auto n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& p = poly[i];
        const Vec& q = poly[(i + 1) % n];
        const double rp = pdfw::dot(a, p) - b;
        const double rq = pdfw::dot(a, q) - b;
        if (rp <= 1e-14) out.push_back(p);
        if ((rp < -1e-14 && rq > 1e-14) || (rp > 1e-14 && rq < -1e-14)) {
            const double t = rp / (rp - rq);
            Vec m(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) m[j] = p[j] + t * (q[j] - p[j]);
            out.push_back(std::move(m));
        }
    }
    return out;
}

// Exact FW gap via hull + clipping + vertex enumeration; d must be 1 or 2.
inline double geo_fw_gap(const ProblemInstance& inst, const MixturePolytope& poly,
                         const Vec& gamma) {
    const Vec grad = inst.objective.gradient(gamma);
    const auto pts = product_points(poly);
    double best = std::numeric_limits<double>::infinity();
    bool feasible_exists = false;
    if (poly.dim == 1) {
        double lo = pts[0][0], hi = pts[0][0];
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        for (int i = 0; i < inst.constraints.count(); ++i) {
            const double a = inst.constraints.A(i, 0), b = inst.constraints.b[i];
            if (a > 0)
                hi = std::min(hi, b / a);
            else if (a < 0)
                lo = std::max(lo, b / a);
            else if (b < 0)
                hi = lo - 1.0;  // infeasible row
        }
        if (lo <= hi + 1e-12) {
            feasible_exists = true;
            best = std::min(grad[0] * lo, grad[0] * hi);
        }
    } else if (poly.dim == 2) {
        auto region = hull2(pts);
        if (region.size() == 1) region.push_back(region.front());
        for (int i = 0; i < inst.constraints.count() && !region.empty(); ++i) {
            const auto row = inst.constraints.A.row(i);
            region = clip_halfplane(region, Vec(row.begin(), row.end()), inst.constraints.b[i]);
        }
        for (const auto& v : region) {
            feasible_exists = true;
            best = std::min(best, dot(grad, v));
        }
    } else {
        throw std::invalid_argument("geo_fw_gap: d must be 1 or 2");
    }
    if (!feasible_exists) throw std::runtime_error("geo_fw_gap: empty feasible region");
    return dot(grad, gamma) - best;
}

// Exact distance to the polytope (no linear constraints); d must be 1 or 2.
inline double geo_dist(const MixturePolytope& poly, const Vec& gamma) {
    const auto pts = product_points(poly);
    if (poly.dim == 1) {
        double lo = pts[0][0], hi = pts[0][0];
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return std::max({gamma[0] - hi, lo - gamma[0], 0.0});
    }
    if (poly.dim != 2) throw std::invalid_argument("geo_dist: d must be 1 or 2");
    const auto h = hull2(pts);
    if (h.size() == 1) return pdfw::dist2(gamma, h[0]);
    const auto seg_dist = [&](const Vec& p, const Vec& q) {
        const double qx = q[0] - p[0], qy = q[1] - p[1];
        const double len2 = qx * qx + qy * qy;
        double t = len2 > 0 ? ((gamma[0] - p[0]) * qx + (gamma[1] - p[1]) * qy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const Vec m{p[0] + t * qx, p[1] + t * qy};
        return pdfw::dist2(gamma, m);
    };
    bool inside = h.size() >= 3;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Vec& p = h[i];
        const Vec& q = h[(i + 1) % h.size()];
        if (cross2(p, q, gamma) < 0) inside = false;
        best = std::min(best, seg_dist(p, q));
    }
    return inside ? 0.0 : best;
}

}  // namespace pdfw::bruteforce
