#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "htrm/canonical.hpp"

namespace htrm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mark_distance(const Mark& a, const Mark& b) {
    if (a.color != b.color || a.omega != b.omega) return kInf;
    if (a.omega) return 0;
    if (a.value.size() != b.value.size()) return kInf;
    double s = 0;
    for (std::size_t i = 0; i < a.value.size(); ++i) s += (a.value[i] - b.value[i]) * (a.value[i] - b.value[i]);
    return std::sqrt(s);
}

// Kuhn matching on entries <= t.
bool has_perfect_matching(const std::vector<std::vector<double>>& c, double t) {
    const std::size_t k = c.size();
    std::vector<int> match(k, -1);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<char> seen(k, 0);
        std::function<bool(std::size_t)> augment = [&](std::size_t a) {
            for (std::size_t b = 0; b < k; ++b) {
                if (c[a][b] > t || seen[b]) continue;
                seen[b] = 1;
                if (match[b] < 0 || augment(static_cast<std::size_t>(match[b]))) {
                    match[b] = static_cast<int>(a);
                    return true;
                }
            }
            return false;
        };
        if (!augment(i)) return false;
    }
    return true;
}

double bottleneck(const std::vector<std::vector<double>>& c) {
    std::vector<double> vals;
    for (const auto& row : c)
        for (double x : row)
            if (std::isfinite(x)) vals.push_back(x);
    if (c.empty()) return 0;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty() || !has_perfect_matching(c, vals.back())) return kInf;
    std::size_t lo = 0, hi = vals.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (has_perfect_matching(c, vals[mid])) hi = mid;
        else lo = mid + 1;
    }
    return vals[lo];
}

// Minimal sup mark distance over isomorphisms of the radius-r subtrees.
double tree_cost(const MarkedGraph& a, Vertex va, Vertex pa, const MarkedGraph& b, Vertex vb, Vertex pb, int r) {
    if (r == 0) return 0;
    std::vector<MarkedGraph::Half> ca, cb;
    for (const auto& h : a.adj(va))
        if (h.to != pa) ca.push_back(h);
    for (const auto& h : b.adj(vb))
        if (h.to != pb) cb.push_back(h);
    if (ca.size() != cb.size()) return kInf;
    std::vector<std::vector<double>> c(ca.size(), std::vector<double>(cb.size()));
    for (std::size_t i = 0; i < ca.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j) {
            double m = std::max(mark_distance(a.mark_out(va, ca[i]), b.mark_out(vb, cb[j])),
                                mark_distance(a.mark_in(va, ca[i]), b.mark_in(vb, cb[j])));
            if (std::isfinite(m)) m = std::max(m, tree_cost(a, ca[i].to, va, b, cb[j].to, vb, r - 1));
            c[i][j] = m;
        }
    return bottleneck(c);
}

double general_cost(const MarkedGraph& a, const MarkedGraph& b, long budget) {
    const int n = a.n();
    if (n != b.n() || a.num_edges() != b.num_edges()) return kInf;
    auto da = bfs_distances(a, {0}, n), db = bfs_distances(b, {0}, n);
    std::vector<std::vector<int>> ea(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1)),
        eb = ea;
    for (std::size_t i = 0; i < a.num_edges(); ++i) {
        ea[static_cast<std::size_t>(a.edge(static_cast<int>(i)).u)][static_cast<std::size_t>(a.edge(static_cast<int>(i)).v)] = static_cast<int>(i);
        ea[static_cast<std::size_t>(a.edge(static_cast<int>(i)).v)][static_cast<std::size_t>(a.edge(static_cast<int>(i)).u)] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < b.num_edges(); ++i) {
        eb[static_cast<std::size_t>(b.edge(static_cast<int>(i)).u)][static_cast<std::size_t>(b.edge(static_cast<int>(i)).v)] = static_cast<int>(i);
        eb[static_cast<std::size_t>(b.edge(static_cast<int>(i)).v)][static_cast<std::size_t>(b.edge(static_cast<int>(i)).u)] = static_cast<int>(i);
    }
    auto out_mark = [](const MarkedGraph& g, int e, Vertex from) -> const Mark& {
        return g.edge(e).u == from ? g.edge(e).fwd : g.edge(e).bwd;
    };
    std::vector<Vertex> map(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    double best = kInf;
    std::function<void(int, double)> rec = [&](int i, double cost) {
        if (--budget < 0) throw SizeCapError("local_distance: isomorphism search budget exhausted");
        if (cost >= best) return;
        if (i == n) {
            best = cost;
            return;
        }
        for (Vertex w = 0; w < n; ++w) {
            if (used[static_cast<std::size_t>(w)] || db[static_cast<std::size_t>(w)] != da[static_cast<std::size_t>(i)]) continue;
            if ((i == 0) != (w == 0)) continue;
            double c = cost;
            bool ok = true;
            for (Vertex u = 0; u < i && ok; ++u) {
                int e1 = ea[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)];
                int e2 = eb[static_cast<std::size_t>(w)][static_cast<std::size_t>(map[static_cast<std::size_t>(u)])];
                if ((e1 < 0) != (e2 < 0)) ok = false;
                else if (e1 >= 0)
                    c = std::max({c, mark_distance(out_mark(a, e1, i), out_mark(b, e2, w)),
                                  mark_distance(out_mark(a, e1, u), out_mark(b, e2, map[static_cast<std::size_t>(u)]))});
            }
            if (!ok || c >= best) continue;
            map[static_cast<std::size_t>(i)] = w;
            used[static_cast<std::size_t>(w)] = 1;
            rec(i + 1, c);
            used[static_cast<std::size_t>(w)] = 0;
        }
    };
    rec(0, 0.0);
    return best;
}

}  // namespace

double local_distance(const RootedGraph& a, const RootedGraph& b, const CanonicalOptions& opt) {
    const int h = std::min(a.depth, b.depth);
    double best = 1.0;  // r = 0 is always good with delta = 0
    for (int r = 1; r <= h; ++r) {
        RootedGraph ba = ball(a.graph, a.root, r), bb = ball(b.graph, b.root, r);
        double delta;
        if (ba.graph.is_forest() && bb.graph.is_forest()) {
            delta = tree_cost(ba.graph, 0, -1, bb.graph, 0, -1, r);
        } else {
            if (ba.graph.n() > opt.max_vertices || bb.graph.n() > opt.max_vertices)
                throw SizeCapError("local_distance: neighborhood exceeds size cap");
            delta = general_cost(ba.graph, bb.graph, opt.search_budget);
        }
        if (!std::isfinite(delta)) break;  // no isomorphism at r means none beyond
        best = std::min(best, 1.0 / (1.0 + r) + delta);
    }
    return best;
}

double local_distance(const RootedNeighborhood& a, const RootedNeighborhood& b, const CanonicalOptions& opt) {
    return local_distance(a.representative, b.representative, opt);
}

}  // namespace htrm
