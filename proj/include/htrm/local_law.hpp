#pragma once

#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "htrm/canonical.hpp"

namespace htrm {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Finite-support law on canonical rooted neighborhoods of a fixed depth, keyed by encoding.
template <class W>
struct BasicNeighborhoodLaw {
    int depth = 0;
    Quantizer quantizer;
    std::map<std::string, std::pair<RootedNeighborhood, W>> atoms;

    void add(const RootedNeighborhood& g, const W& w) {
        auto it = atoms.find(g.encoding);
        if (it == atoms.end()) atoms.emplace(g.encoding, std::make_pair(g, w));
        else it->second.second += w;
    }
    W weight(const std::string& encoding) const {
        auto it = atoms.find(encoding);
        return it == atoms.end() ? W(0) : it->second.second;
    }
    W total() const {
        W s(0);
        for (const auto& [k, a] : atoms) s += a.second;
        return s;
    }
    W mean_degree() const {
        W s(0);
        for (const auto& [k, a] : atoms) s += a.second * W(root_degree(a.first));
        return s;
    }
};

template <class W>
struct BasicEdgeRootedLaw {
    int depth = 1;
    Quantizer quantizer;
    std::map<std::string, std::pair<EdgeRootedNeighborhood, W>> atoms;

    void add(const EdgeRootedNeighborhood& g, const W& w) {
        auto it = atoms.find(g.encoding);
        if (it == atoms.end()) atoms.emplace(g.encoding, std::make_pair(g, w));
        else it->second.second += w;
    }
    W weight(const std::string& encoding) const {
        auto it = atoms.find(encoding);
        return it == atoms.end() ? W(0) : it->second.second;
    }
    W total() const {
        W s(0);
        for (const auto& [k, a] : atoms) s += a.second;
        return s;
    }
};

using NeighborhoodLaw = BasicNeighborhoodLaw<double>;
using EdgeRootedLaw = BasicEdgeRootedLaw<double>;
using ExactNeighborhoodLaw = BasicNeighborhoodLaw<Rational>;
using ExactEdgeRootedLaw = BasicEdgeRootedLaw<Rational>;

NeighborhoodLaw to_float(const ExactNeighborhoodLaw& mu);
EdgeRootedLaw to_float(const ExactEdgeRootedLaw& nu);

// U(G)_h: uniform root, weights k/n.
ExactNeighborhoodLaw neighborhood_distribution(const MarkedGraph& g, int h, const Quantizer& q,
                                               const CanonicalOptions& opt = {});
// vec U(G)_h: uniform over the 2|E| oriented edges.
ExactEdgeRootedLaw edge_neighborhood_distribution(const MarkedGraph& g, int h, const Quantizer& q,
                                                  const CanonicalOptions& opt = {});

template <class W>
BasicEdgeRootedLaw<W> edge_root(const BasicNeighborhoodLaw<W>& mu);
template <class W>
BasicNeighborhoodLaw<W> size_bias(const BasicNeighborhoodLaw<W>& mu);
template <class W>
BasicNeighborhoodLaw<W> restrict_law(const BasicNeighborhoodLaw<W>& mu, int h);
// d_nu = (E_nu 1/deg(o))^{-1}; requires depth >= 2.
template <class W>
W d_nu(const BasicEdgeRootedLaw<W>& nu);
template <class W>
BasicNeighborhoodLaw<W> hat(const BasicEdgeRootedLaw<W>& nu);
// (1-p) delta_0 + p hat(nu) with p = dbar / d_nu.
template <class W>
BasicNeighborhoodLaw<W> dot(const BasicEdgeRootedLaw<W>& nu, const W& dbar);

// max over atoms of |vec mu(a) - vec mu(reverse a)|.
template <class W>
double unimodularity_defect(const BasicNeighborhoodLaw<W>& mu);

// Root edge mark law (quantized key -> weight) of an edge-rooted law.
template <class W>
std::map<int, W> root_color_law(const BasicEdgeRootedLaw<W>& nu);

// Counts of canonical neighborhoods; merge is associative and commutative.
class LawAccumulator {
public:
    LawAccumulator(int depth, Quantizer q) : depth_(depth), q_(q) {}
    void add(const RootedNeighborhood& g, long long count = 1);
    void merge(const LawAccumulator& other);
    long long samples() const { return total_; }
    NeighborhoodLaw law() const;

private:
    int depth_;
    Quantizer q_;
    std::map<std::string, std::pair<RootedNeighborhood, long long>> counts_;
    long long total_ = 0;
};

}  // namespace htrm
