#include "htrm/local_law.hpp"

#include <cmath>

namespace htrm {

NeighborhoodLaw to_float(const ExactNeighborhoodLaw& mu) {
    NeighborhoodLaw out;
    out.depth = mu.depth;
    out.quantizer = mu.quantizer;
    for (const auto& [k, a] : mu.atoms) out.atoms.emplace(k, std::make_pair(a.first, to_double(a.second)));
    return out;
}

EdgeRootedLaw to_float(const ExactEdgeRootedLaw& nu) {
    EdgeRootedLaw out;
    out.depth = nu.depth;
    out.quantizer = nu.quantizer;
    for (const auto& [k, a] : nu.atoms) out.atoms.emplace(k, std::make_pair(a.first, to_double(a.second)));
    return out;
}

ExactNeighborhoodLaw neighborhood_distribution(const MarkedGraph& g, int h, const Quantizer& q,
                                               const CanonicalOptions& opt) {
    if (g.n() == 0) throw std::invalid_argument("neighborhood_distribution: empty graph");
    ExactNeighborhoodLaw mu;
    mu.depth = h;
    mu.quantizer = q;
    const Rational w(1, g.n());
    for (Vertex v = 0; v < g.n(); ++v) mu.add(canonical_form(g, v, h, q, opt), w);
    return mu;
}

ExactEdgeRootedLaw edge_neighborhood_distribution(const MarkedGraph& g, int h, const Quantizer& q,
                                                  const CanonicalOptions& opt) {
    if (g.num_edges() == 0) throw std::invalid_argument("edge_neighborhood_distribution: graph has no edge");
    ExactEdgeRootedLaw nu;
    nu.depth = h;
    nu.quantizer = q;
    const Rational w(1, static_cast<long long>(2 * g.num_edges()));
    for (const auto& e : g.edges()) {
        nu.add(edge_canonical_form(g, e.u, e.v, h, q, opt), w);
        nu.add(edge_canonical_form(g, e.v, e.u, h, q, opt), w);
    }
    return nu;
}

template <class W>
BasicEdgeRootedLaw<W> edge_root(const BasicNeighborhoodLaw<W>& mu) {
    if (mu.depth < 1) throw std::invalid_argument("edge_root: depth must be >= 1");
    W dbar = mu.mean_degree();
    if (!(dbar > W(0))) throw std::invalid_argument("edge_root: expected degree is zero");
    BasicEdgeRootedLaw<W> nu;
    nu.depth = mu.depth;
    nu.quantizer = mu.quantizer;
    for (const auto& [k, a] : mu.atoms) {
        const MarkedGraph& rep = a.first.representative.graph;
        W w = a.second / dbar;
        for (const auto& h : rep.adj(0)) nu.add(edge_canonical_form(rep, 0, h.to, mu.depth, mu.quantizer), w);
    }
    return nu;
}

template <class W>
BasicNeighborhoodLaw<W> size_bias(const BasicNeighborhoodLaw<W>& mu) {
    W dbar = mu.mean_degree();
    if (!(dbar > W(0))) throw std::invalid_argument("size_bias: expected degree is zero");
    BasicNeighborhoodLaw<W> out;
    out.depth = mu.depth;
    out.quantizer = mu.quantizer;
    for (const auto& [k, a] : mu.atoms) {
        int deg = root_degree(a.first);
        if (deg > 0) out.add(a.first, a.second * W(deg) / dbar);
    }
    return out;
}

template <class W>
BasicNeighborhoodLaw<W> restrict_law(const BasicNeighborhoodLaw<W>& mu, int h) {
    if (h > mu.depth || h < 0) throw std::invalid_argument("restrict_law: bad depth");
    if (h == mu.depth) return mu;
    BasicNeighborhoodLaw<W> out;
    out.depth = h;
    out.quantizer = mu.quantizer;
    for (const auto& [k, a] : mu.atoms) out.add(restrict_depth(a.first, h, mu.quantizer), a.second);
    return out;
}

template <class W>
W d_nu(const BasicEdgeRootedLaw<W>& nu) {
    if (nu.depth < 2) throw std::invalid_argument("d_nu: depth-1 edge laws do not record the origin degree");
    W s(0);
    for (const auto& [k, a] : nu.atoms) s += a.second / W(origin_degree(a.first));
    if (!(s > W(0))) throw std::invalid_argument("d_nu: empty law");
    return W(1) / s;
}

namespace {
RootedNeighborhood single_vertex(int depth, const Quantizer& q) {
    MarkedGraph g(1);
    return canonical_form(g, 0, depth, q);
}
}  // namespace

template <class W>
BasicNeighborhoodLaw<W> hat(const BasicEdgeRootedLaw<W>& nu) {
    BasicNeighborhoodLaw<W> out;
    out.depth = nu.depth - 1;
    out.quantizer = nu.quantizer;
    if (nu.depth == 1) {
        out.add(single_vertex(0, nu.quantizer), W(1));
        return out;
    }
    W d = d_nu(nu);
    for (const auto& [k, a] : nu.atoms)
        out.add(origin_neighborhood(a.first, nu.depth - 1, nu.quantizer), a.second * d / W(origin_degree(a.first)));
    return out;
}

template <class W>
BasicNeighborhoodLaw<W> dot(const BasicEdgeRootedLaw<W>& nu, const W& dbar) {
    if (nu.depth == 1) return hat(nu);
    W p = dbar / d_nu(nu);
    if (to_double(p) > 1.0 + 1e-12) throw std::invalid_argument("dot: d_nu < dbar, result is not a probability measure");
    BasicNeighborhoodLaw<W> h = hat(nu);
    BasicNeighborhoodLaw<W> out;
    out.depth = h.depth;
    out.quantizer = h.quantizer;
    if (to_double(p) < 1.0) out.add(single_vertex(h.depth, h.quantizer), W(1) - p);
    for (const auto& [k, a] : h.atoms) out.add(a.first, a.second * p);
    return out;
}

template <class W>
double unimodularity_defect(const BasicNeighborhoodLaw<W>& mu) {
    if (mu.depth < 1 || !(mu.mean_degree() > W(0))) return 0.0;
    auto nu = edge_root(mu);
    double defect = 0;
    for (const auto& [k, a] : nu.atoms) {
        auto r = reversed(a.first, nu.quantizer);
        defect = std::max(defect, std::abs(to_double(a.second) - to_double(nu.weight(r.encoding))));
    }
    return defect;
}

template <class W>
std::map<int, W> root_color_law(const BasicEdgeRootedLaw<W>& nu) {
    std::map<int, W> out;
    for (const auto& [k, a] : nu.atoms) {
        const auto& rep = a.first.representative;
        auto e = rep.find_edge(0, 1);
        const auto& ed = rep.edge(*e);
        int color = ed.u == 0 ? ed.fwd.color : ed.bwd.color;
        out[color] += a.second;
    }
    return out;
}

#define HTRM_INSTANTIATE(W)                                                              \
    template BasicEdgeRootedLaw<W> edge_root(const BasicNeighborhoodLaw<W>&);            \
    template BasicNeighborhoodLaw<W> size_bias(const BasicNeighborhoodLaw<W>&);          \
    template BasicNeighborhoodLaw<W> restrict_law(const BasicNeighborhoodLaw<W>&, int);  \
    template W d_nu(const BasicEdgeRootedLaw<W>&);                                       \
    template BasicNeighborhoodLaw<W> hat(const BasicEdgeRootedLaw<W>&);                  \
    template BasicNeighborhoodLaw<W> dot(const BasicEdgeRootedLaw<W>&, const W&);        \
    template double unimodularity_defect(const BasicNeighborhoodLaw<W>&);                \
    template std::map<int, W> root_color_law(const BasicEdgeRootedLaw<W>&);

HTRM_INSTANTIATE(double)
HTRM_INSTANTIATE(Rational)
#undef HTRM_INSTANTIATE

void LawAccumulator::add(const RootedNeighborhood& g, long long count) {
    if (g.depth != depth_) throw std::invalid_argument("LawAccumulator: depth mismatch");
    auto it = counts_.find(g.encoding);
    if (it == counts_.end()) counts_.emplace(g.encoding, std::make_pair(g, count));
    else it->second.second += count;
    total_ += count;
}

void LawAccumulator::merge(const LawAccumulator& other) {
    for (const auto& [k, a] : other.counts_) add(a.first, a.second);
}

NeighborhoodLaw LawAccumulator::law() const {
    NeighborhoodLaw mu;
    mu.depth = depth_;
    mu.quantizer = q_;
    for (const auto& [k, a] : counts_)
        mu.atoms.emplace(k, std::make_pair(a.first, static_cast<double>(a.second) / static_cast<double>(total_)));
    return mu;
}

}  // namespace htrm
