#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "htrm/canonical.hpp"
#include "htrm/parallel.hpp"

namespace htrm {

using Complex = std::complex<double>;

struct TestEdge {
    int from = 0, to = 0;
    int label = 0;
    bool star = false;
};

// Directed multigraph with labeled, possibly starred edges; self-loops allowed.
struct TestGraph {
    int vertices = 1;
    int root = -1;  // -1 when unrooted
    std::vector<TestEdge> edges;

    bool connected() const;
    bool is_cycle() const;
    int depth_from_root() const;  // eccentricity of the root in the underlying graph
};

// One matrix per label, edge v -> w contributes Y_l^e(phi(w), phi(v)) with Y^*(a,b) = conj(Y(b,a)).
using Matrices = std::vector<Eigen::MatrixXcd>;

struct TrafficOptions {
    int max_vertices = 8;
};

Complex traffic_eval(const Matrices& Y, const TestGraph& H, const TrafficOptions& opt = {});
Complex traffic_eval_injective(const Matrices& Y, const TestGraph& H, const TrafficOptions& opt = {});

// Labels of a marked graph: conjugation involutions on C^m give m complex labels,
// any other mark space gives one real label per coordinate. Y(u,v) = xi(u,v).
Matrices traffic_matrices(const MarkedGraph& g);

// Sum over root-preserving maps of V_H into g (injective when requested), no normalization.
Complex rooted_traffic_eval(const RootedGraph& g, const TestGraph& H, bool injective, const TrafficOptions& opt = {});
Complex rooted_traffic_eval(const RootedNeighborhood& g, const TestGraph& H, bool injective,
                            const TrafficOptions& opt = {});

// Restricted-growth strings: p[0] = 0 and p[i] <= 1 + max(p[0..i-1]).
using Partition = std::vector<int>;
std::vector<Partition> set_partitions(int n);
// True when every block of fine lies inside a block of coarse.
bool refines(const Partition& fine, const Partition& coarse);
TestGraph quotient(const TestGraph& H, const Partition& p);

using PartitionTable = std::map<Partition, Complex>;
// tau(s) = sum over coarser p of tau0(p).
PartitionTable mobius_forward(const PartitionTable& tau0, int n);
// tau0(s) = sum over coarser p of prod_B (-1)^{k_B-1} (k_B-1)! tau(p).
PartitionTable mobius_inverse(const PartitionTable& tau, int n);

TestGraph chromatic_skeleton(const MarkedGraph& g, int root = -1);

struct ColoredComponents {
    std::vector<std::vector<int>> edges;     // edge indices of each component
    std::vector<std::vector<int>> vertices;  // vertex set of each component
    std::vector<int> side;                   // 0 for J1, 1 for J2
    bool is_tree = true;                     // the vertex/component incidence graph is a tree
};
// in_first(label) tells whether a label belongs to J1.
ColoredComponents colored_components(const TestGraph& H, const std::function<bool(int)>& in_first);

using RootedSampler = std::function<RootedGraph(Rng&, int depth)>;

// Free product of two rooted graph laws with scalar real marks. Output marks live in
// R^{k1 + k2} (identity involution), first block for the first law.
RootedGraph free_product_sample(const RootedSampler& mu1, const RootedSampler& mu2, int h, Rng& rng,
                                long max_vertices = 1000000);

struct FreenessCheck {
    Complex lhs, rhs;
    bool gcc_tree = true;
    bool equal = false;
};
// lhs = tau0 of the free product at H; rhs = product over colored components of the
// marginal tau0 of the corresponding factor rooted at the component vertex closest to the root.
FreenessCheck traffic_freeness_check(const RootedGraph& g, const RootedGraph& g1, const RootedGraph& g2,
                                     const TestGraph& H, int labels_first, double tol = 1e-12);

}  // namespace htrm
