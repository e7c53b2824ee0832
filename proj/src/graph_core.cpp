#include "htrm/graph_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <sstream>

namespace htrm {

Involution Involution::identity(int k) {
    Involution inv;
    inv.signs.assign(static_cast<std::size_t>(k), 1);
    inv.perm.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) inv.perm[static_cast<std::size_t>(i)] = i;
    return inv;
}

Involution Involution::conjugation(int m) {
    Involution inv = identity(2 * m);
    for (int i = 0; i < m; ++i) inv.signs[static_cast<std::size_t>(2 * i + 1)] = -1;
    return inv;
}

bool Involution::valid() const {
    const int k = dim();
    if (static_cast<int>(perm.size()) != k || k == 0) return false;
    for (int i = 0; i < k; ++i) {
        int t = perm[static_cast<std::size_t>(i)];
        if (t < 0 || t >= k) return false;
        if (perm[static_cast<std::size_t>(t)] != i) return false;
        int s = signs[static_cast<std::size_t>(i)];
        if (s != 1 && s != -1) return false;
        if (s * signs[static_cast<std::size_t>(t)] != 1) return false;
    }
    return true;
}

std::vector<double> Involution::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("involution: dimension mismatch");
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = signs[i] * x[static_cast<std::size_t>(perm[i])];
    return y;
}

double Mark::norm() const {
    if (omega) return std::numeric_limits<double>::infinity();
    double s = 0;
    for (double x : value) s += x * x;
    return std::sqrt(s);
}

bool Mark::finite() const {
    return std::all_of(value.begin(), value.end(), [](double x) { return std::isfinite(x); });
}

int MarkSpace::conj_color(int b) const {
    if (color_conj.empty()) return b;
    return color_conj.at(static_cast<std::size_t>(b));
}

Mark MarkSpace::star(const Mark& m) const {
    Mark r;
    r.color = conj_color(m.color);
    r.omega = m.omega;
    if (!m.omega) r.value = inv.apply(m.value);
    return r;
}

MarkedGraph::MarkedGraph(int n, MarkSpace space) : space_(std::move(space)), adj_(static_cast<std::size_t>(n)) {}

Vertex MarkedGraph::add_vertex() {
    adj_.emplace_back();
    return n() - 1;
}

int MarkedGraph::add_edge(Vertex u, Vertex v, const Mark& m) { return add_edge_raw(u, v, m, space_.star(m)); }

int MarkedGraph::add_edge_raw(Vertex u, Vertex v, const Mark& fwd, const Mark& bwd) {
    if (u < 0 || v < 0 || u >= n() || v >= n()) throw std::out_of_range("add_edge: vertex out of range");
    if (u == v) throw std::invalid_argument("add_edge: self-loop");
    int id = static_cast<int>(edges_.size());
    edges_.push_back({u, v, fwd, bwd});
    adj_[static_cast<std::size_t>(u)].push_back({v, id});
    adj_[static_cast<std::size_t>(v)].push_back({u, id});
    return id;
}

const Mark& MarkedGraph::mark_out(Vertex from, const Half& h) const {
    const Edge& e = edges_[static_cast<std::size_t>(h.edge)];
    return e.u == from ? e.fwd : e.bwd;
}

const Mark& MarkedGraph::mark_in(Vertex from, const Half& h) const {
    const Edge& e = edges_[static_cast<std::size_t>(h.edge)];
    return e.u == from ? e.bwd : e.fwd;
}

std::optional<int> MarkedGraph::find_edge(Vertex u, Vertex v) const {
    for (const Half& h : adj(u))
        if (h.to == v) return h.edge;
    return std::nullopt;
}

MarkedGraph MarkedGraph::induced(const std::vector<Vertex>& verts) const {
    std::vector<Vertex> local(static_cast<std::size_t>(n()), -1);
    for (std::size_t i = 0; i < verts.size(); ++i) local[static_cast<std::size_t>(verts[i])] = static_cast<Vertex>(i);
    MarkedGraph out(static_cast<int>(verts.size()), space_);
    for (std::size_t i = 0; i < verts.size(); ++i) {
        Vertex u = verts[i];
        for (const Half& h : adj(u)) {
            Vertex lv = local[static_cast<std::size_t>(h.to)];
            if (lv < 0 || lv < static_cast<Vertex>(i)) continue;
            const Edge& e = edges_[static_cast<std::size_t>(h.edge)];
            if (e.u == u) out.add_edge_raw(static_cast<Vertex>(i), lv, e.fwd, e.bwd);
            else out.add_edge_raw(static_cast<Vertex>(i), lv, e.bwd, e.fwd);
        }
    }
    return out;
}

bool MarkedGraph::is_forest() const {
    std::vector<int> parent(static_cast<std::size_t>(n()));
    for (int i = 0; i < n(); ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const Edge& e : edges_) {
        int a = find(e.u), b = find(e.v);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
    }
    return true;
}

std::vector<std::string> validate(const MarkedGraph& g) {
    std::vector<std::string> out;
    const MarkSpace& s = g.space();
    if (!s.inv.valid()) out.push_back("involution is not a valid signed involution");
    std::map<std::pair<Vertex, Vertex>, int> seen;
    std::map<int, long long> count;  // edge counting measure on colors
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        const auto& e = g.edge(static_cast<int>(i));
        std::ostringstream where;
        where << "edge " << i << " {" << e.u << "," << e.v << "}";
        if (e.u == e.v) out.push_back(where.str() + ": self-loop");
        auto key = std::minmax(e.u, e.v);
        if (seen.count(key)) out.push_back(where.str() + ": duplicate edge");
        seen[key] = 1;
        if (!e.fwd.finite() || !e.bwd.finite()) out.push_back(where.str() + ": non-finite mark");
        if (!e.fwd.omega && static_cast<int>(e.fwd.value.size()) != s.inv.dim())
            out.push_back(where.str() + ": mark dimension differs from involution");
        else if (s.inv.valid() && !(s.star(e.fwd) == e.bwd))
            out.push_back(where.str() + ": xi(u,v) != xi(v,u)*");
        count[e.fwd.color] += 1;
        count[e.bwd.color] += 1;
    }
    for (const auto& [b, m] : count) {
        int bs = s.conj_color(b);
        long long ms = count.count(bs) ? count[bs] : 0;
        if (ms != m) out.push_back("edge counting measure not involution invariant at color " + std::to_string(b));
        if (bs == b && m % 2 != 0) out.push_back("odd edge count at self-conjugate color " + std::to_string(b));
    }
    return out;
}

bool MarkKeyLess::operator()(const Mark& a, const Mark& b) const {
    return std::tie(a.color, a.omega, a.value) < std::tie(b.color, b.omega, b.value);
}

std::map<Mark, int, MarkKeyLess> marked_degree(const MarkedGraph& g, Vertex v) {
    if (v < 0 || v >= g.n()) throw std::out_of_range("marked_degree: vertex out of range");
    std::map<Mark, int, MarkKeyLess> deg;
    for (const auto& h : g.adj(v)) deg[g.mark_out(v, h)] += 1;
    return deg;
}

Quantizer::Quantizer(double delta, double kappa) : delta_(delta), kappa_(kappa) {
    if (!(delta > 0) || !(kappa > 0) || !std::isfinite(delta) || !std::isfinite(kappa))
        throw std::invalid_argument("quantizer: delta and kappa must be positive");
    kappa_eff_ = delta * std::ceil(kappa / delta - 1e-12);
}

std::optional<std::int64_t> Quantizer::bin(double x) const {
    if (std::abs(x) >= kappa_eff_) return std::nullopt;
    const double a = std::abs(x);
    auto j = static_cast<std::int64_t>(std::floor(a / delta_));
    while (static_cast<double>(j + 1) * delta_ <= a) ++j;
    while (j > 0 && static_cast<double>(j) * delta_ > a) --j;
    return x < 0 ? -j : j;
}

Mark Quantizer::apply(const Mark& m) const {
    if (m.omega) return m;
    Mark r;
    r.color = m.color;
    r.value.reserve(m.value.size());
    for (double x : m.value) {
        auto j = bin(x);
        if (!j) {
            r.value.clear();
            r.omega = true;
            return r;
        }
        r.value.push_back(static_cast<double>(*j) * delta_);
    }
    return r;
}

namespace {
void put_i64(std::string& s, std::int64_t x) {
    auto u = static_cast<std::uint64_t>(x) ^ 0x8000000000000000ull;  // order-preserving
    for (int i = 7; i >= 0; --i) s.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}
}  // namespace

std::string Quantizer::key(const Mark& m) const {
    std::string s;
    put_i64(s, m.color);
    Mark qm = apply(m);
    s.push_back(qm.omega ? 'w' : 'v');
    if (!qm.omega) {
        s.push_back(static_cast<char>(qm.value.size()));
        for (double x : qm.value) put_i64(s, *bin(x));
    }
    return s;
}

MarkedGraph quantize_graph(const MarkedGraph& g, const Quantizer& q) {
    MarkedGraph out(g.n(), g.space());
    for (const auto& e : g.edges()) out.add_edge_raw(e.u, e.v, q.apply(e.fwd), q.apply(e.bwd));
    return out;
}

MarkedGraph epsilon_truncate(const MarkedGraph& g, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("epsilon_truncate: eps must be positive");
    return g.filter_edges([&](int i) { return g.edge(i).fwd.norm() >= eps; });
}

MarkedGraph degree_truncate(const MarkedGraph& g, int k) {
    if (k < 1) throw std::invalid_argument("degree_truncate: k must be >= 1");
    std::vector<char> bad(static_cast<std::size_t>(g.n()), 0);
    for (Vertex v = 0; v < g.n(); ++v)
        if (g.degree(v) > k) bad[static_cast<std::size_t>(v)] = 1;
    return g.filter_edges([&](int i) {
        const auto& e = g.edge(i);
        if (e.fwd.norm() > k || e.bwd.norm() > k) return false;
        return !bad[static_cast<std::size_t>(e.u)] && !bad[static_cast<std::size_t>(e.v)];
    });
}

MarkedGraph theta_truncate_network(const MarkedGraph& g, double theta) {
    if (!(theta > 0 && theta < 1)) throw std::invalid_argument("theta_truncate_network: theta must lie in (0,1)");
    std::vector<double> energy(static_cast<std::size_t>(g.n()), 0.0);
    for (Vertex v = 0; v < g.n(); ++v)
        for (const auto& h : g.adj(v)) {
            double r = g.mark_out(v, h).norm();
            energy[static_cast<std::size_t>(v)] += r * r;
        }
    const double cap = 1.0 / (theta * theta);
    return g.filter_edges([&](int i) {
        const auto& e = g.edge(i);
        double r = e.fwd.norm();
        if (r != 0 && r <= theta) return false;
        return energy[static_cast<std::size_t>(e.u)] < cap && energy[static_cast<std::size_t>(e.v)] < cap;
    });
}

std::vector<int> bfs_distances(const MarkedGraph& g, const std::vector<Vertex>& sources, int max_depth) {
    std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
    std::deque<Vertex> q;
    for (Vertex s : sources) {
        dist[static_cast<std::size_t>(s)] = 0;
        q.push_back(s);
    }
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop_front();
        int du = dist[static_cast<std::size_t>(u)];
        if (du >= max_depth) continue;
        for (const auto& h : g.adj(u))
            if (dist[static_cast<std::size_t>(h.to)] < 0) {
                dist[static_cast<std::size_t>(h.to)] = du + 1;
                q.push_back(h.to);
            }
    }
    return dist;
}

RootedGraph ball(const MarkedGraph& g, Vertex root, int h) {
    if (root < 0 || root >= g.n()) throw std::out_of_range("ball: root out of range");
    std::vector<Vertex> order{root};
    std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
    dist[static_cast<std::size_t>(root)] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Vertex u = order[i];
        if (dist[static_cast<std::size_t>(u)] >= h) continue;
        for (const auto& e : g.adj(u))
            if (dist[static_cast<std::size_t>(e.to)] < 0) {
                dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(u)] + 1;
                order.push_back(e.to);
            }
    }
    return {g.induced(order), 0, h};
}

MarkedGraph from_matrix(const Eigen::MatrixXd& Y, double tol) {
    if (Y.rows() != Y.cols()) throw std::invalid_argument("from_matrix: matrix is not square");
    const auto n = static_cast<int>(Y.rows());
    const double scale = std::max(1.0, Y.cwiseAbs().maxCoeff());
    MarkedGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(Y(i, j) - Y(j, i)) > tol * scale) throw std::invalid_argument("from_matrix: matrix is not Hermitian");
            if (Y(i, j) != 0.0) g.add_edge(i, j, Mark(Y(i, j)));
        }
    return g;
}

MarkedGraph from_matrix(const Eigen::MatrixXcd& Y, double tol) {
    if (Y.rows() != Y.cols()) throw std::invalid_argument("from_matrix: matrix is not square");
    const auto n = static_cast<int>(Y.rows());
    const double scale = std::max(1.0, Y.cwiseAbs().maxCoeff());
    MarkSpace space{Involution::conjugation(1), {}};
    MarkedGraph g(n, space);
    for (int i = 0; i < n; ++i) {
        if (std::abs(Y(i, i).imag()) > tol * scale) throw std::invalid_argument("from_matrix: matrix is not Hermitian");
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(Y(i, j) - std::conj(Y(j, i))) > tol * scale)
                throw std::invalid_argument("from_matrix: matrix is not Hermitian");
            if (Y(i, j) != 0.0) g.add_edge(i, j, Mark(0, {Y(i, j).real(), Y(i, j).imag()}));
        }
    }
    return g;
}

MarkedGraph from_sparse(const Eigen::SparseMatrix<double>& Y, double tol) {
    if (Y.rows() != Y.cols()) throw std::invalid_argument("from_sparse: matrix is not square");
    MarkedGraph g(static_cast<int>(Y.rows()));
    for (int k = 0; k < Y.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(Y, k); it; ++it) {
            auto i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
            if (i >= j || it.value() == 0.0) continue;
            if (std::abs(Y.coeff(j, i) - it.value()) > tol * std::max(1.0, std::abs(it.value())))
                throw std::invalid_argument("from_sparse: matrix is not symmetric");
            g.add_edge(i, j, Mark(it.value()));
        }
    return g;
}

Eigen::MatrixXd to_operator(const MarkedGraph& g) {
    if (g.space().inv.dim() != 1) throw std::invalid_argument("to_operator: real operator needs scalar marks");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (const auto& e : g.edges()) {
        A(e.u, e.v) = e.fwd.value.at(0);
        A(e.v, e.u) = e.bwd.value.at(0);
    }
    return A;
}

Eigen::MatrixXcd to_operator_complex(const MarkedGraph& g) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(g.n(), g.n());
    const bool cplx = g.space().inv.dim() == 2;
    auto val = [&](const Mark& m) {
        return cplx ? std::complex<double>(m.value.at(0), m.value.at(1)) : std::complex<double>(m.value.at(0), 0.0);
    };
    for (const auto& e : g.edges()) {
        A(e.u, e.v) = val(e.fwd);
        A(e.v, e.u) = val(e.bwd);
    }
    return A;
}

Eigen::SparseMatrix<double> to_sparse_operator(const MarkedGraph& g) {
    if (g.space().inv.dim() != 1) throw std::invalid_argument("to_sparse_operator: real operator needs scalar marks");
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * g.num_edges());
    for (const auto& e : g.edges()) {
        t.emplace_back(e.u, e.v, e.fwd.value.at(0));
        t.emplace_back(e.v, e.u, e.bwd.value.at(0));
    }
    Eigen::SparseMatrix<double> A(g.n(), g.n());
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

}  // namespace htrm
