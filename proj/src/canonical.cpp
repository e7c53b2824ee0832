#include "htrm/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace htrm {

namespace {

void put_varint(std::string& s, std::uint64_t x) {
    while (x >= 0x80) {
        s.push_back(static_cast<char>((x & 0x7f) | 0x80));
        x >>= 7;
    }
    s.push_back(static_cast<char>(x));
}

void put_block(std::string& s, const std::string& b) {
    put_varint(s, b.size());
    s += b;
}

// AHU encoding of the tree hanging from `root`, never stepping to `blocked`.
// Fills `order` with a canonical preorder of the visited vertices.
struct AhuResult {
    std::string enc;
    double log_aut = 0;
};

AhuResult ahu(const MarkedGraph& g, Vertex root, Vertex blocked, const Quantizer& q, std::vector<Vertex>* order,
              std::vector<Vertex>* parent_out) {
    const auto n = static_cast<std::size_t>(g.n());
    std::vector<Vertex> parent(n, -2), bfs{root};
    parent[static_cast<std::size_t>(root)] = blocked;
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        Vertex u = bfs[i];
        for (const auto& h : g.adj(u)) {
            if (h.to == parent[static_cast<std::size_t>(u)]) continue;
            parent[static_cast<std::size_t>(h.to)] = u;
            bfs.push_back(h.to);
        }
    }
    std::vector<std::string> enc(n);
    std::vector<double> laut(n, 0.0);
    // children items sorted, kept for the preorder pass
    std::vector<std::vector<std::pair<std::string, Vertex>>> items(n);
    for (std::size_t i = bfs.size(); i-- > 0;) {
        Vertex u = bfs[i];
        auto& it = items[static_cast<std::size_t>(u)];
        for (const auto& h : g.adj(u)) {
            if (h.to == parent[static_cast<std::size_t>(u)]) continue;
            std::string item;
            put_block(item, q.key(g.mark_out(u, h)));
            put_block(item, q.key(g.mark_in(u, h)));
            put_block(item, enc[static_cast<std::size_t>(h.to)]);
            it.emplace_back(std::move(item), h.to);
        }
        std::sort(it.begin(), it.end());
        std::string e = "(";
        put_varint(e, it.size());
        double la = 0;
        for (std::size_t a = 0; a < it.size();) {
            std::size_t b = a;
            while (b < it.size() && it[b].first == it[a].first) ++b;
            la += std::lgamma(static_cast<double>(b - a) + 1.0);
            for (std::size_t c = a; c < b; ++c) la += laut[static_cast<std::size_t>(it[c].second)];
            a = b;
        }
        for (const auto& [s, v] : it) put_block(e, s);
        e.push_back(')');
        enc[static_cast<std::size_t>(u)] = std::move(e);
        laut[static_cast<std::size_t>(u)] = la;
    }
    if (order) {
        std::vector<Vertex> stack{root};
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            order->push_back(u);
            const auto& it = items[static_cast<std::size_t>(u)];
            for (std::size_t c = it.size(); c-- > 0;) stack.push_back(it[c].second);
        }
    }
    if (parent_out) *parent_out = parent;
    return {enc[static_cast<std::size_t>(root)], laut[static_cast<std::size_t>(root)]};
}

MarkedGraph relabel(const MarkedGraph& g, const std::vector<Vertex>& order, const Quantizer& q) {
    MarkedGraph sub = g.induced(order);
    return quantize_graph(sub, q);
}

// Individualization-refinement canonical labeling for small general graphs.
class IRCanon {
public:
    IRCanon(const MarkedGraph& g, const std::vector<int>& init, const Quantizer& q, long budget)
        : g_(g), budget_(budget) {
        const int m = g.n();
        std::vector<std::pair<std::string, std::string>> pairs;
        for (Vertex v = 0; v < m; ++v)
            for (const auto& h : g.adj(v)) pairs.emplace_back(q.key(g.mark_out(v, h)), q.key(g.mark_in(v, h)));
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        for (const auto& p : pairs) {
            put_block(table_, p.first);
            put_block(table_, p.second);
        }
        adj_.resize(static_cast<std::size_t>(m));
        for (Vertex v = 0; v < m; ++v)
            for (const auto& h : g.adj(v)) {
                auto key = std::make_pair(q.key(g.mark_out(v, h)), q.key(g.mark_in(v, h)));
                int id = static_cast<int>(std::lower_bound(pairs.begin(), pairs.end(), key) - pairs.begin());
                adj_[static_cast<std::size_t>(v)].emplace_back(h.to, id);
            }
        search(rank(init));
    }

    const std::string& best() const { return best_; }
    const std::vector<int>& best_position() const { return best_pos_; }

private:
    template <class Key>
    static std::vector<int> rank_keys(const std::vector<Key>& keys) {
        std::vector<Key> sorted = keys;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> out(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i)
            out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
        return out;
    }
    std::vector<int> rank(const std::vector<int>& c) { return rank_keys(c); }

    std::vector<int> refine(std::vector<int> colors) const {
        int classes = *std::max_element(colors.begin(), colors.end()) + 1;
        while (true) {
            std::vector<std::vector<long long>> sig(colors.size());
            for (std::size_t v = 0; v < colors.size(); ++v) {
                std::vector<long long> nb;
                for (const auto& [u, id] : adj_[v])
                    nb.push_back(static_cast<long long>(colors[static_cast<std::size_t>(u)]) * 1000003LL + id);
                std::sort(nb.begin(), nb.end());
                sig[v].push_back(colors[v]);
                sig[v].insert(sig[v].end(), nb.begin(), nb.end());
            }
            auto next = rank_keys(sig);
            int nc = *std::max_element(next.begin(), next.end()) + 1;
            colors = std::move(next);
            if (nc == classes) return colors;
            classes = nc;
        }
    }

    std::string certificate(const std::vector<int>& pos) const {
        std::vector<std::tuple<int, int, int>> e;
        for (std::size_t v = 0; v < adj_.size(); ++v)
            for (const auto& [u, id] : adj_[v]) e.emplace_back(pos[v], pos[static_cast<std::size_t>(u)], id);
        std::sort(e.begin(), e.end());
        std::string s;
        put_varint(s, adj_.size());
        put_block(s, table_);
        put_varint(s, e.size());
        for (const auto& [a, b, id] : e) {
            put_varint(s, static_cast<std::uint64_t>(a));
            put_varint(s, static_cast<std::uint64_t>(b));
            put_varint(s, static_cast<std::uint64_t>(id));
        }
        return s;
    }

    void search(std::vector<int> colors) {
        if (--budget_ < 0) throw SizeCapError("canonical_form: search budget exhausted");
        colors = refine(std::move(colors));
        const int m = static_cast<int>(colors.size());
        std::vector<int> size(static_cast<std::size_t>(m), 0);
        for (int c : colors) ++size[static_cast<std::size_t>(c)];
        int target = -1;
        for (int c = 0; c < m; ++c)
            if (size[static_cast<std::size_t>(c)] > 1) {
                target = c;
                break;
            }
        if (target < 0) {
            std::string cert = certificate(colors);
            if (best_.empty() || cert < best_) {
                best_ = std::move(cert);
                best_pos_ = colors;
            }
            return;
        }
        for (int v = 0; v < m; ++v) {
            if (colors[static_cast<std::size_t>(v)] != target) continue;
            std::vector<int> c2(colors.size());
            for (int u = 0; u < m; ++u)
                c2[static_cast<std::size_t>(u)] = 2 * colors[static_cast<std::size_t>(u)] + (u == v ? 0 : 1);
            search(rank(c2));
        }
    }

    const MarkedGraph& g_;
    long budget_;
    std::string table_;
    std::vector<std::vector<std::pair<Vertex, int>>> adj_;
    std::string best_;
    std::vector<int> best_pos_;
};

std::vector<Vertex> order_from_positions(const std::vector<int>& pos) {
    std::vector<Vertex> order(pos.size());
    for (std::size_t v = 0; v < pos.size(); ++v) order[static_cast<std::size_t>(pos[v])] = static_cast<Vertex>(v);
    return order;
}

}  // namespace

std::string to_hex(const std::string& bytes) {
    static const char* d = "0123456789abcdef";
    std::string s;
    s.reserve(2 * bytes.size());
    for (unsigned char c : bytes) {
        s.push_back(d[c >> 4]);
        s.push_back(d[c & 15]);
    }
    return s;
}

std::string from_hex(const std::string& hex) {
    if (hex.size() % 2) throw std::invalid_argument("from_hex: odd length");
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad digit");
    };
    std::string s;
    for (std::size_t i = 0; i < hex.size(); i += 2) s.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
    return s;
}

std::string RootedNeighborhood::hex() const { return to_hex(encoding); }
std::string EdgeRootedNeighborhood::hex() const { return to_hex(encoding); }

RootedNeighborhood canonical_form(const MarkedGraph& g, Vertex root, int h, const Quantizer& q,
                                  const CanonicalOptions& opt) {
    if (h < 0) throw std::invalid_argument("canonical_form: negative depth");
    RootedGraph b = ball(g, root, h);
    const MarkedGraph& bg = b.graph;
    RootedNeighborhood out;
    out.depth = h;
    out.tree = bg.is_forest();
    std::string enc;
    if (out.tree) {
        if (bg.n() > opt.max_tree_vertices) throw SizeCapError("canonical_form: tree neighborhood exceeds size cap");
        std::vector<Vertex> order;
        AhuResult r = ahu(bg, 0, -1, q, &order, nullptr);
        enc = "T";
        put_varint(enc, static_cast<std::uint64_t>(h));
        enc += r.enc;
        out.log_aut = r.log_aut;
        out.representative = {relabel(bg, order, q), 0, h};
    } else {
        if (bg.n() > opt.max_vertices) throw SizeCapError("canonical_form: neighborhood exceeds size cap");
        auto dist = bfs_distances(bg, {0}, h);
        IRCanon ir(bg, dist, q, opt.search_budget);
        enc = "G";
        put_varint(enc, static_cast<std::uint64_t>(h));
        enc += ir.best();
        out.log_aut = std::nan("");
        out.representative = {relabel(bg, order_from_positions(ir.best_position()), q), 0, h};
    }
    out.encoding = std::move(enc);
    return out;
}

RootedNeighborhood canonical_form(const RootedGraph& g, const Quantizer& q, const CanonicalOptions& opt) {
    return canonical_form(g.graph, g.root, g.depth, q, opt);
}

EdgeRootedNeighborhood edge_canonical_form(const MarkedGraph& g, Vertex o, Vertex o2, int h, const Quantizer& q,
                                           const CanonicalOptions& opt) {
    if (h < 1) throw std::invalid_argument("edge_canonical_form: depth must be >= 1");
    auto root_edge = g.find_edge(o, o2);
    if (!root_edge) throw std::invalid_argument("edge_canonical_form: root is not an edge");
    auto dist = bfs_distances(g, {o, o2}, h - 1);
    std::vector<Vertex> verts{o, o2};
    for (Vertex v = 0; v < g.n(); ++v)
        if (dist[static_cast<std::size_t>(v)] >= 0 && v != o && v != o2) verts.push_back(v);
    MarkedGraph bg = g.induced(verts);  // o -> 0, o2 -> 1
    EdgeRootedNeighborhood out;
    out.depth = h;
    out.tree = bg.is_forest();
    std::string enc;
    const auto& h01 = *std::find_if(bg.adj(0).begin(), bg.adj(0).end(), [](const auto& x) { return x.to == 1; });
    if (out.tree) {
        if (bg.n() > opt.max_tree_vertices) throw SizeCapError("edge_canonical_form: neighborhood exceeds size cap");
        std::vector<Vertex> ord0, ord1;
        AhuResult a = ahu(bg, 0, 1, q, &ord0, nullptr);
        AhuResult b = ahu(bg, 1, 0, q, &ord1, nullptr);
        enc = "E";
        put_varint(enc, static_cast<std::uint64_t>(h));
        put_block(enc, q.key(bg.mark_out(0, h01)));
        put_block(enc, q.key(bg.mark_in(0, h01)));
        put_block(enc, a.enc);
        put_block(enc, b.enc);
        out.log_aut = a.log_aut + b.log_aut;
        std::vector<Vertex> order{0, 1};
        order.insert(order.end(), ord0.begin() + 1, ord0.end());
        order.insert(order.end(), ord1.begin() + 1, ord1.end());
        out.representative = relabel(bg, order, q);
    } else {
        if (bg.n() > opt.max_vertices) throw SizeCapError("edge_canonical_form: neighborhood exceeds size cap");
        auto d = bfs_distances(bg, {0, 1}, h - 1);
        std::vector<int> init(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) init[i] = i < 2 ? static_cast<int>(i) : 2 + d[i];
        IRCanon ir(bg, init, q, opt.search_budget);
        enc = "F";
        put_varint(enc, static_cast<std::uint64_t>(h));
        enc += ir.best();
        out.log_aut = std::nan("");
        out.representative = relabel(bg, order_from_positions(ir.best_position()), q);
    }
    out.encoding = std::move(enc);
    return out;
}

EdgeRootedNeighborhood reversed(const EdgeRootedNeighborhood& a, const Quantizer& q, const CanonicalOptions& opt) {
    return edge_canonical_form(a.representative, 1, 0, a.depth, q, opt);
}

RootedNeighborhood restrict_depth(const RootedNeighborhood& g, int h, const Quantizer& q,
                                  const CanonicalOptions& opt) {
    if (h > g.depth) throw std::invalid_argument("restrict_depth: target depth exceeds neighborhood depth");
    if (h == g.depth) return g;
    return canonical_form(g.representative.graph, 0, h, q, opt);
}

RootedNeighborhood origin_neighborhood(const EdgeRootedNeighborhood& a, int k, const Quantizer& q,
                                       const CanonicalOptions& opt) {
    if (k > a.depth - 1) throw std::invalid_argument("origin_neighborhood: depth exceeds h-1");
    return canonical_form(a.representative, 0, k, q, opt);
}

int root_degree(const RootedNeighborhood& g) {
    return g.depth == 0 ? 0 : g.representative.graph.degree(0);
}

int origin_degree(const EdgeRootedNeighborhood& a) {
    if (a.depth < 2) throw std::invalid_argument("origin_degree: depth-1 edge neighborhoods do not record degrees");
    return a.representative.degree(0);
}

}  // namespace htrm
