#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace htrm {

using Vertex = std::int32_t;

// Signed coordinate permutation x* = (eps_i x_{tau(i)}).
struct Involution {
    std::vector<int> signs;
    std::vector<int> perm;

    static Involution identity(int k);
    // Complex conjugation on C^m viewed as R^{2m}, coordinates (re, im) interleaved.
    static Involution conjugation(int m = 1);

    int dim() const { return static_cast<int>(signs.size()); }
    bool valid() const;
    std::vector<double> apply(const std::vector<double>& x) const;
    bool operator==(const Involution&) const = default;
};

struct Mark {
    int color = 0;
    std::vector<double> value;
    bool omega = false;  // quantization overflow symbol, fixed by the involution

    Mark() = default;
    Mark(double x) : value{x} {}
    Mark(int b, std::vector<double> x) : color(b), value(std::move(x)) {}

    double norm() const;
    bool finite() const;
    bool operator==(const Mark&) const = default;
};

// The mark space B x R^k with its involution.
struct MarkSpace {
    Involution inv = Involution::identity(1);
    std::vector<int> color_conj;  // empty means every color is self-conjugate

    int conj_color(int b) const;
    Mark star(const Mark& m) const;
    bool operator==(const MarkSpace&) const = default;
};

class MarkedGraph {
public:
    struct Edge {
        Vertex u, v;
        Mark fwd;  // xi(u, v)
        Mark bwd;  // xi(v, u)
    };
    struct Half {
        Vertex to;
        int edge;
    };

    explicit MarkedGraph(int n = 0, MarkSpace space = {});

    int n() const { return static_cast<int>(adj_.size()); }
    std::size_t num_edges() const { return edges_.size(); }
    const MarkSpace& space() const { return space_; }

    Vertex add_vertex();
    // Adds {u,v} with xi(u,v) = m and xi(v,u) = m*.
    int add_edge(Vertex u, Vertex v, const Mark& m);
    // Adds an edge with both orientations given explicitly (no symmetry enforced).
    int add_edge_raw(Vertex u, Vertex v, const Mark& fwd, const Mark& bwd);

    const Edge& edge(int i) const { return edges_[static_cast<std::size_t>(i)]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Half>& adj(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(Vertex v) const { return static_cast<int>(adj(v).size()); }

    // xi(from, to) for the edge referenced by a half-edge of `from`.
    const Mark& mark_out(Vertex from, const Half& h) const;
    const Mark& mark_in(Vertex from, const Half& h) const;  // xi(to, from)
    std::optional<int> find_edge(Vertex u, Vertex v) const;

    // Induced subgraph on `verts`, vertex i of the result is verts[i].
    MarkedGraph induced(const std::vector<Vertex>& verts) const;
    // Same vertex set, edges where keep(edge index) holds.
    template <class Pred>
    MarkedGraph filter_edges(Pred keep) const {
        MarkedGraph out(n(), space_);
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (keep(static_cast<int>(i))) out.add_edge_raw(edges_[i].u, edges_[i].v, edges_[i].fwd, edges_[i].bwd);
        return out;
    }

    bool is_forest() const;

private:
    MarkSpace space_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Half>> adj_;
};

// A finite rooted marked graph; depth is the radius it was cut at.
struct RootedGraph {
    MarkedGraph graph;
    Vertex root = 0;
    int depth = 0;
};

std::vector<std::string> validate(const MarkedGraph& g);

struct MarkKeyLess {
    bool operator()(const Mark& a, const Mark& b) const;
};
std::map<Mark, int, MarkKeyLess> marked_degree(const MarkedGraph& g, Vertex v);

class Quantizer {
public:
    // The default is fine enough to separate any marks that differ by more than 1e-6.
    explicit Quantizer(double delta = 1.0 / 1048576.0, double kappa = 1048576.0);
    double delta() const { return delta_; }
    double kappa() const { return kappa_; }
    double kappa_eff() const { return kappa_eff_; }

    // Bin index j with {x} = j*delta, or nullopt for omega.
    std::optional<std::int64_t> bin(double x) const;
    Mark apply(const Mark& m) const;
    // Integer key (color, omega, bins) used by canonical encodings.
    std::string key(const Mark& m) const;

private:
    double delta_, kappa_, kappa_eff_;
};

MarkedGraph quantize_graph(const MarkedGraph& g, const Quantizer& q);

// Keeps edges with |xi| >= eps.
MarkedGraph epsilon_truncate(const MarkedGraph& g, double eps);
// Removes edges at a vertex of degree > k and edges whose mark has norm > k.
MarkedGraph degree_truncate(const MarkedGraph& g, int k);
// Removes edges with 0 < |xi| <= theta, then every edge at a vertex whose
// energy sum |xi|^2 (computed on the input graph) is >= theta^-2.
MarkedGraph theta_truncate_network(const MarkedGraph& g, double theta);

std::vector<int> bfs_distances(const MarkedGraph& g, const std::vector<Vertex>& sources, int max_depth);
// Depth-h ball around root, induced; result is rooted at vertex 0.
RootedGraph ball(const MarkedGraph& g, Vertex root, int h);

// Hermitian matrix <-> marked graph, xi(i,j) = Y(i,j). Real input gives R^1 marks with
// the identity involution, complex input gives R^2 marks with conjugation.
MarkedGraph from_matrix(const Eigen::MatrixXd& Y, double tol = 1e-12);
MarkedGraph from_matrix(const Eigen::MatrixXcd& Y, double tol = 1e-12);
MarkedGraph from_sparse(const Eigen::SparseMatrix<double>& Y, double tol = 1e-12);
Eigen::MatrixXd to_operator(const MarkedGraph& g);
Eigen::MatrixXcd to_operator_complex(const MarkedGraph& g);
Eigen::SparseMatrix<double> to_sparse_operator(const MarkedGraph& g);

class SizeCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace htrm
