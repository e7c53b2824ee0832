#pragma once

#include <string>

#include "htrm/graph_core.hpp"

namespace htrm {

struct CanonicalOptions {
    int max_vertices = 64;            // cap for neighborhoods that are not trees
    int max_tree_vertices = 200000;   // trees use the linear-time AHU encoding
    long search_budget = 1000000;     // individualization-refinement nodes
};

// Canonical unlabeled depth-h rooted marked graph. The representative has
// quantized marks, vertices in canonical order and root 0.
struct RootedNeighborhood {
    int depth = 0;
    std::string encoding;
    RootedGraph representative;
    bool tree = true;
    double log_aut = 0;  // log of the number of root-preserving automorphisms (trees only)

    std::string hex() const;
    bool operator==(const RootedNeighborhood& o) const { return encoding == o.encoding; }
};

// Canonical depth-h edge-rooted graph: the (h-1)-ball around both endpoints of
// the oriented root edge (o, o'). Representative has o = 0, o' = 1.
struct EdgeRootedNeighborhood {
    int depth = 0;
    std::string encoding;
    MarkedGraph representative;
    bool tree = true;
    double log_aut = 0;

    std::string hex() const;
};

RootedNeighborhood canonical_form(const MarkedGraph& g, Vertex root, int h, const Quantizer& q,
                                  const CanonicalOptions& opt = {});
RootedNeighborhood canonical_form(const RootedGraph& g, const Quantizer& q, const CanonicalOptions& opt = {});

EdgeRootedNeighborhood edge_canonical_form(const MarkedGraph& g, Vertex o, Vertex o2, int h, const Quantizer& q,
                                           const CanonicalOptions& opt = {});
EdgeRootedNeighborhood reversed(const EdgeRootedNeighborhood& a, const Quantizer& q, const CanonicalOptions& opt = {});

// Restriction of a canonical neighborhood to a smaller depth (recomputes the form).
RootedNeighborhood restrict_depth(const RootedNeighborhood& g, int h, const Quantizer& q,
                                  const CanonicalOptions& opt = {});
// Depth-k rooted neighborhood of the origin o of an edge-rooted neighborhood.
RootedNeighborhood origin_neighborhood(const EdgeRootedNeighborhood& a, int k, const Quantizer& q,
                                       const CanonicalOptions& opt = {});

int root_degree(const RootedNeighborhood& g);
int origin_degree(const EdgeRootedNeighborhood& a);

std::string to_hex(const std::string& bytes);
std::string from_hex(const std::string& hex);

// inf over good pairs (r, delta) of 1/(1+r) + delta, radii r <= min depth.
double local_distance(const RootedGraph& a, const RootedGraph& b, const CanonicalOptions& opt = {});
double local_distance(const RootedNeighborhood& a, const RootedNeighborhood& b, const CanonicalOptions& opt = {});

}  // namespace htrm
