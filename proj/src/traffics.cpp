#include "htrm/traffics.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace htrm {

namespace {

std::vector<std::vector<int>> undirected_adjacency(const TestGraph& H) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(H.vertices));
    for (const auto& e : H.edges) {
        if (e.from < 0 || e.to < 0 || e.from >= H.vertices || e.to >= H.vertices)
            throw std::invalid_argument("test graph: edge endpoint out of range");
        adj[static_cast<std::size_t>(e.from)].push_back(e.to);
        adj[static_cast<std::size_t>(e.to)].push_back(e.from);
    }
    return adj;
}

std::vector<int> bfs_from(const TestGraph& H, int s) {
    auto adj = undirected_adjacency(H);
    std::vector<int> dist(static_cast<std::size_t>(H.vertices), -1);
    std::deque<int> q{s};
    dist[static_cast<std::size_t>(s)] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : adj[static_cast<std::size_t>(u)])
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

}  // namespace

bool TestGraph::connected() const {
    if (vertices < 1) return false;
    auto d = bfs_from(*this, 0);
    return std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; });
}

bool TestGraph::is_cycle() const {
    if (!connected() || static_cast<int>(edges.size()) != vertices) return false;
    std::vector<int> deg(static_cast<std::size_t>(vertices), 0);
    for (const auto& e : edges) {
        ++deg[static_cast<std::size_t>(e.from)];
        ++deg[static_cast<std::size_t>(e.to)];
    }
    return std::all_of(deg.begin(), deg.end(), [](int x) { return x == 2; });
}

int TestGraph::depth_from_root() const {
    if (root < 0) throw std::invalid_argument("test graph has no root");
    auto d = bfs_from(*this, root);
    return *std::max_element(d.begin(), d.end());
}

namespace {

struct DenseSource {
    const Matrices& Y;
    std::vector<std::vector<int>> nbr;

    explicit DenseSource(const Matrices& m) : Y(m) {
        if (Y.empty()) throw std::invalid_argument("traffic: no matrices");
        const auto n = Y[0].rows();
        nbr.resize(static_cast<std::size_t>(n));
        for (const auto& M : Y) {
            if (M.rows() != n || M.cols() != n) throw std::invalid_argument("traffic: matrices must be square and equal size");
        }
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                for (const auto& M : Y)
                    if (M(a, b) != Complex(0) || M(b, a) != Complex(0)) {
                        nbr[static_cast<std::size_t>(a)].push_back(static_cast<int>(b));
                        break;
                    }
    }
    int size() const { return static_cast<int>(nbr.size()); }
    const std::vector<int>& neighbors(int a) const { return nbr[static_cast<std::size_t>(a)]; }
    Complex value(int label, int row, int col) const {
        if (label < 0 || label >= static_cast<int>(Y.size())) throw std::invalid_argument("traffic: label out of range");
        return Y[static_cast<std::size_t>(label)](row, col);
    }
};

bool complex_labels(const MarkSpace& s) {
    const int k = s.inv.dim();
    return k % 2 == 0 && s.inv == Involution::conjugation(k / 2);
}

struct GraphSource {
    const MarkedGraph& g;
    bool cplx;
    int labels;
    std::vector<std::vector<int>> nbr;

    explicit GraphSource(const MarkedGraph& graph)
        : g(graph), cplx(complex_labels(graph.space())),
          labels(cplx ? graph.space().inv.dim() / 2 : graph.space().inv.dim()) {
        nbr.resize(static_cast<std::size_t>(g.n()));
        for (Vertex v = 0; v < g.n(); ++v)
            for (const auto& h : g.adj(v)) nbr[static_cast<std::size_t>(v)].push_back(h.to);
        for (auto& l : nbr) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
        }
    }
    int size() const { return g.n(); }
    const std::vector<int>& neighbors(int a) const { return nbr[static_cast<std::size_t>(a)]; }
    Complex value(int label, int row, int col) const {
        if (label < 0 || label >= labels) throw std::invalid_argument("traffic: label out of range");
        for (const auto& h : g.adj(row)) {
            if (h.to != col) continue;
            const Mark& m = g.mark_out(row, h);
            if (m.omega) throw std::invalid_argument("traffic: overflow mark has no value");
            if (cplx) return {m.value[static_cast<std::size_t>(2 * label)], m.value[static_cast<std::size_t>(2 * label + 1)]};
            return m.value[static_cast<std::size_t>(label)];
        }
        return 0.0;
    }
};

template <class Source>
Complex edge_term(const Source& S, const TestEdge& e, int a_from, int a_to) {
    if (!e.star) return S.value(e.label, a_to, a_from);
    return std::conj(S.value(e.label, a_from, a_to));
}

// Sum over maps phi: V_H -> [n] of prod_e term, built vertex by vertex along a BFS
// of H; every later vertex is mapped next to the image of its BFS parent.
template <class Source>
Complex hom_sum(const Source& S, const TestGraph& H, int start, int fixed_value, bool injective) {
    const int k = H.vertices;
    auto adj = undirected_adjacency(H);
    std::vector<int> order{start}, pos(static_cast<std::size_t>(k), -1), anchor(static_cast<std::size_t>(k), -1);
    pos[static_cast<std::size_t>(start)] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int w : adj[static_cast<std::size_t>(order[i])])
            if (pos[static_cast<std::size_t>(w)] < 0) {
                pos[static_cast<std::size_t>(w)] = static_cast<int>(order.size());
                anchor[static_cast<std::size_t>(w)] = order[i];
                order.push_back(w);
            }
    if (static_cast<int>(order.size()) != k) throw std::invalid_argument("test graph must be connected");
    std::vector<std::vector<const TestEdge*>> closing(static_cast<std::size_t>(k));
    for (const auto& e : H.edges)
        closing[static_cast<std::size_t>(std::max(pos[static_cast<std::size_t>(e.from)], pos[static_cast<std::size_t>(e.to)]))].push_back(&e);

    std::vector<int> phi(static_cast<std::size_t>(k), -1);
    std::vector<int> used(static_cast<std::size_t>(S.size()), 0);
    std::function<Complex(int, Complex)> rec = [&](int i, Complex acc) -> Complex {
        if (i == k) return acc;
        const int x = order[static_cast<std::size_t>(i)];
        auto visit = [&](int a) -> Complex {
            if (injective && used[static_cast<std::size_t>(a)]) return 0.0;
            phi[static_cast<std::size_t>(x)] = a;
            Complex c = acc;
            for (const TestEdge* e : closing[static_cast<std::size_t>(i)]) {
                c *= edge_term(S, *e, phi[static_cast<std::size_t>(e->from)], phi[static_cast<std::size_t>(e->to)]);
                if (c == Complex(0)) return 0.0;
            }
            ++used[static_cast<std::size_t>(a)];
            Complex r = rec(i + 1, c);
            --used[static_cast<std::size_t>(a)];
            return r;
        };
        Complex sum = 0;
        if (i == 0) {
            if (fixed_value >= 0) return visit(fixed_value);
            for (int a = 0; a < S.size(); ++a) sum += visit(a);
            return sum;
        }
        const int base = phi[static_cast<std::size_t>(anchor[static_cast<std::size_t>(x)])];
        // An edge to the anchor vanishes unless phi(x) is a support neighbor of phi(anchor).
        for (int a : S.neighbors(base)) sum += visit(a);
        return sum;
    };
    return rec(0, Complex(1.0));
}

Complex cycle_trace(const Matrices& Y, const TestGraph& H) {
    const auto n = Y.at(0).rows();
    // Walk the cycle from vertex 0, recording each edge with its traversal direction.
    std::vector<char> done(H.edges.size(), 0);
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(n, n);
    int x = 0;
    for (std::size_t step = 0; step < H.edges.size(); ++step) {
        std::size_t pick = H.edges.size();
        for (std::size_t i = 0; i < H.edges.size(); ++i)
            if (!done[i] && (H.edges[i].from == x || H.edges[i].to == x)) {
                pick = i;
                break;
            }
        const TestEdge& e = H.edges[pick];
        done[pick] = 1;
        const Eigen::MatrixXcd& Yl = Y.at(static_cast<std::size_t>(e.label));
        Eigen::MatrixXcd M = e.star ? Eigen::MatrixXcd(Yl.adjoint()) : Yl;
        // term(phi(next), phi(x)) is M for a forward edge and M^T for a backward one.
        bool forward = e.from == x;
        int next = forward ? e.to : e.from;
        P = (forward ? M : Eigen::MatrixXcd(M.transpose())) * P;
        x = next;
    }
    return P.trace() / static_cast<double>(n);
}

}  // namespace

Complex traffic_eval(const Matrices& Y, const TestGraph& H, const TrafficOptions& opt) {
    if (Y.empty()) throw std::invalid_argument("traffic_eval: no matrices");
    if (H.is_cycle()) return cycle_trace(Y, H);
    if (H.vertices > opt.max_vertices) throw SizeCapError("traffic_eval: test graph exceeds vertex cap");
    DenseSource S(Y);
    return hom_sum(S, H, 0, -1, false) / static_cast<double>(S.size());
}

Complex traffic_eval_injective(const Matrices& Y, const TestGraph& H, const TrafficOptions& opt) {
    if (H.vertices > opt.max_vertices) throw SizeCapError("traffic_eval: test graph exceeds vertex cap");
    DenseSource S(Y);
    return hom_sum(S, H, 0, -1, true) / static_cast<double>(S.size());
}

Matrices traffic_matrices(const MarkedGraph& g) {
    GraphSource S(g);
    Matrices out(static_cast<std::size_t>(S.labels), Eigen::MatrixXcd::Zero(g.n(), g.n()));
    for (Vertex u = 0; u < g.n(); ++u)
        for (int v : S.neighbors(u))
            for (int l = 0; l < S.labels; ++l) out[static_cast<std::size_t>(l)](u, v) = S.value(l, u, v);
    return out;
}

Complex rooted_traffic_eval(const RootedGraph& g, const TestGraph& H, bool injective, const TrafficOptions& opt) {
    if (H.root < 0) throw std::invalid_argument("rooted_traffic_eval: test graph has no root");
    if (H.vertices > opt.max_vertices) throw SizeCapError("rooted_traffic_eval: test graph exceeds vertex cap");
    GraphSource S(g.graph);
    return hom_sum(S, H, H.root, g.root, injective);
}

Complex rooted_traffic_eval(const RootedNeighborhood& g, const TestGraph& H, bool injective, const TrafficOptions& opt) {
    if (H.root >= 0 && H.depth_from_root() > g.depth)
        throw std::invalid_argument("rooted_traffic_eval: test graph deeper than the neighborhood");
    return rooted_traffic_eval(g.representative, H, injective, opt);
}

std::vector<Partition> set_partitions(int n) {
    std::vector<Partition> out;
    if (n <= 0) return {Partition{}};
    Partition p(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int mx) {
        if (i == n) {
            out.push_back(p);
            return;
        }
        for (int b = 0; b <= mx + 1; ++b) {
            p[static_cast<std::size_t>(i)] = b;
            rec(i + 1, std::max(mx, b));
        }
    };
    rec(1, 0);
    return out;
}

bool refines(const Partition& fine, const Partition& coarse) {
    if (fine.size() != coarse.size()) return false;
    std::map<int, int> image;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        auto [it, fresh] = image.emplace(fine[i], coarse[i]);
        if (!fresh && it->second != coarse[i]) return false;
    }
    return true;
}

TestGraph quotient(const TestGraph& H, const Partition& p) {
    if (static_cast<int>(p.size()) != H.vertices) throw std::invalid_argument("quotient: partition size mismatch");
    TestGraph Q;
    Q.vertices = p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
    Q.root = H.root < 0 ? -1 : p[static_cast<std::size_t>(H.root)];
    for (const auto& e : H.edges)
        Q.edges.push_back({p[static_cast<std::size_t>(e.from)], p[static_cast<std::size_t>(e.to)], e.label, e.star});
    return Q;
}

namespace {

const Complex& lookup(const PartitionTable& t, const Partition& p) {
    auto it = t.find(p);
    if (it == t.end()) throw std::invalid_argument("mobius: quotient missing from table");
    return it->second;
}

double mobius_coefficient(const Partition& fine, const Partition& coarse) {
    std::map<int, std::set<int>> merged;
    for (std::size_t i = 0; i < fine.size(); ++i) merged[coarse[i]].insert(fine[i]);
    double c = 1;
    for (const auto& [b, s] : merged) {
        const int k = static_cast<int>(s.size());
        c *= ((k - 1) % 2 ? -1.0 : 1.0) * std::tgamma(static_cast<double>(k));
    }
    return c;
}

}  // namespace

PartitionTable mobius_forward(const PartitionTable& tau0, int n) {
    auto parts = set_partitions(n);
    PartitionTable out;
    for (const auto& s : parts) {
        Complex sum = 0;
        for (const auto& p : parts)
            if (refines(s, p)) sum += lookup(tau0, p);
        out[s] = sum;
    }
    return out;
}

PartitionTable mobius_inverse(const PartitionTable& tau, int n) {
    auto parts = set_partitions(n);
    PartitionTable out;
    for (const auto& s : parts) {
        Complex sum = 0;
        for (const auto& p : parts)
            if (refines(s, p)) sum += mobius_coefficient(s, p) * lookup(tau, p);
        out[s] = sum;
    }
    return out;
}

TestGraph chromatic_skeleton(const MarkedGraph& g, int root) {
    GraphSource S(g);
    TestGraph H;
    H.vertices = g.n();
    H.root = root;
    for (const auto& e : g.edges())
        for (int l = 0; l < S.labels; ++l)
            if (S.value(l, e.u, e.v) != Complex(0)) H.edges.push_back({e.u, e.v, l, false});
    return H;
}

ColoredComponents colored_components(const TestGraph& H, const std::function<bool(int)>& in_first) {
    const int k = H.vertices;
    ColoredComponents out;
    for (int side = 0; side < 2; ++side) {
        std::vector<int> uf(static_cast<std::size_t>(k));
        std::iota(uf.begin(), uf.end(), 0);
        std::function<int(int)> find = [&](int x) {
            return uf[static_cast<std::size_t>(x)] == x ? x : uf[static_cast<std::size_t>(x)] = find(uf[static_cast<std::size_t>(x)]);
        };
        std::vector<int> mine;
        for (std::size_t i = 0; i < H.edges.size(); ++i)
            if (in_first(H.edges[i].label) == (side == 0)) {
                mine.push_back(static_cast<int>(i));
                uf[static_cast<std::size_t>(find(H.edges[i].from))] = find(H.edges[i].to);
            }
        std::map<int, std::size_t> comp;
        for (int i : mine) {
            int r = find(H.edges[static_cast<std::size_t>(i)].from);
            auto [it, fresh] = comp.emplace(r, out.edges.size());
            if (fresh) {
                out.edges.emplace_back();
                out.vertices.emplace_back();
                out.side.push_back(side);
            }
            out.edges[it->second].push_back(i);
            for (int v : {H.edges[static_cast<std::size_t>(i)].from, H.edges[static_cast<std::size_t>(i)].to}) {
                auto& vs = out.vertices[it->second];
                if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
            }
        }
    }
    for (auto& vs : out.vertices) std::sort(vs.begin(), vs.end());
    // Incidence graph on vertices + components: a tree iff connected with nodes - 1 edges.
    const int nodes = k + static_cast<int>(out.vertices.size());
    long inc = 0;
    std::vector<int> uf(static_cast<std::size_t>(nodes));
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return uf[static_cast<std::size_t>(x)] == x ? x : uf[static_cast<std::size_t>(x)] = find(uf[static_cast<std::size_t>(x)]);
    };
    int merges = 0;
    for (std::size_t c = 0; c < out.vertices.size(); ++c)
        for (int v : out.vertices[c]) {
            ++inc;
            int a = find(v), b = find(k + static_cast<int>(c));
            if (a != b) {
                uf[static_cast<std::size_t>(a)] = b;
                ++merges;
            }
        }
    out.is_tree = merges == nodes - 1 && inc == nodes - 1;
    return out;
}

RootedGraph free_product_sample(const RootedSampler& mu1, const RootedSampler& mu2, int h, Rng& rng, long max_vertices) {
    if (h < 0) throw std::invalid_argument("free_product_sample: negative depth");
    const RootedSampler* mus[2] = {&mu1, &mu2};
    auto draw = [&](int side, int depth) {
        RootedGraph s = (*mus[side])(rng, depth);
        const Involution& inv = s.graph.space().inv;
        if (inv != Involution::identity(inv.dim())) throw std::invalid_argument("free_product_sample: real marks required");
        return ball(s.graph, s.root, depth);
    };
    RootedGraph first[2] = {draw(0, h), draw(1, h)};
    const int k1 = first[0].graph.space().inv.dim(), k2 = first[1].graph.space().inv.dim();
    MarkedGraph out(1, MarkSpace{Involution::identity(k1 + k2), {}});
    auto pad = [&](const Mark& m, int side) {
        Mark p(m.color, std::vector<double>(static_cast<std::size_t>(k1 + k2), 0.0));
        for (std::size_t i = 0; i < m.value.size(); ++i) p.value[i + static_cast<std::size_t>(side ? k1 : 0)] = m.value[i];
        p.omega = m.omega;
        return p;
    };
    struct Item {
        Vertex v;
        int dist, side;
    };
    std::deque<Item> queue{{0, 0, 0}, {0, 0, 1}};
    bool initial[2] = {true, true};
    while (!queue.empty()) {
        Item it = queue.front();
        queue.pop_front();
        if (it.dist >= h) continue;
        RootedGraph s = initial[it.side] && it.v == 0 ? first[it.side] : draw(it.side, h - it.dist);
        if (it.v == 0) initial[it.side] = false;
        auto d = bfs_distances(s.graph, {0}, s.graph.n());
        std::vector<Vertex> map(static_cast<std::size_t>(s.graph.n()), -1);
        map[0] = it.v;
        for (Vertex u = 1; u < s.graph.n(); ++u) {
            if (out.n() >= max_vertices) throw SizeCapError("free_product_sample: population cap exceeded");
            map[static_cast<std::size_t>(u)] = out.add_vertex();
        }
        for (const auto& e : s.graph.edges())
            out.add_edge_raw(map[static_cast<std::size_t>(e.u)], map[static_cast<std::size_t>(e.v)], pad(e.fwd, it.side), pad(e.bwd, it.side));
        for (Vertex u = 1; u < s.graph.n(); ++u) {
            int du = it.dist + d[static_cast<std::size_t>(u)];
            if (du < h) queue.push_back({map[static_cast<std::size_t>(u)], du, 1 - it.side});
        }
    }
    return {std::move(out), 0, h};
}

FreenessCheck traffic_freeness_check(const RootedGraph& g, const RootedGraph& g1, const RootedGraph& g2,
                                     const TestGraph& H, int labels_first, double tol) {
    if (H.root < 0) throw std::invalid_argument("traffic_freeness_check: test graph has no root");
    FreenessCheck r;
    r.lhs = rooted_traffic_eval(g, H, true);
    auto cc = colored_components(H, [&](int l) { return l < labels_first; });
    r.gcc_tree = cc.is_tree;
    if (!cc.is_tree) {
        r.rhs = 0;
    } else {
        auto dist = bfs_from(H, H.root);
        Complex prod = 1;
        for (std::size_t c = 0; c < cc.edges.size(); ++c) {
            const auto& vs = cc.vertices[c];
            int top = *std::min_element(vs.begin(), vs.end(), [&](int a, int b) {
                return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
            });
            TestGraph S;
            S.vertices = static_cast<int>(vs.size());
            auto index = [&](int v) { return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin()); };
            S.root = index(top);
            const int shift = cc.side[c] ? labels_first : 0;
            for (int i : cc.edges[c]) {
                const auto& e = H.edges[static_cast<std::size_t>(i)];
                S.edges.push_back({index(e.from), index(e.to), e.label - shift, e.star});
            }
            prod *= rooted_traffic_eval(cc.side[c] ? g2 : g1, S, true);
        }
        r.rhs = prod;
    }
    r.equal = std::abs(r.lhs - r.rhs) <= tol * std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
    return r;
}

}  // namespace htrm
