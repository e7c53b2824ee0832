#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "htrm/entropy.hpp"
#include "htrm/limits.hpp"
#include "htrm/local_law.hpp"
#include "htrm/models.hpp"
#include "htrm/spectral.hpp"
#include "htrm/traffics.hpp"

namespace htrm {

using Json = nlohmann::ordered_json;

// Non-finite reals are written as the strings "inf", "-inf" and "nan".
Json number(double x);
double read_number(const Json& j);
std::string format_double(double x);  // shortest text that reads back to x

// {n, edges: [{u, v, mark: {color, value}}]}, marks for the orientation u < v;
// optional "involution" {signs, perm} and "color_conj".
Json to_json(const MarkedGraph& g);
MarkedGraph graph_from_json(const Json& j);
Json to_json(const RootedGraph& g);
RootedGraph rooted_from_json(const Json& j);
Json to_json(const RootedNeighborhood& g);

Json to_json(const NeighborhoodLaw& mu);
NeighborhoodLaw law_from_json(const Json& j, const Quantizer& q = Quantizer());
Json to_json(const EdgeRootedLaw& nu);
Json to_json(const DegreeLaw& pi);

Json to_json(const TestGraph& H);
TestGraph test_graph_from_json(const Json& j);
// Every *.json file of a directory, in file name order.
std::vector<TestGraph> load_test_graphs(const std::string& dir);

Json to_json(const MarkLaw& m);
MarkLaw mark_law_from_json(const Json& j);
Json to_json(const EnsembleConfig& cfg);
// Unknown keys are rejected; the result has passed EnsembleConfig::check.
EnsembleConfig ensemble_from_json(const Json& j);

std::string to_csv(const SpectralMeasure& m);
Json to_json(const Histogram& h);
Json to_json(const EntropyReport& r);
std::string to_csv(const std::vector<KlSweepEntry>& sweep);

}  // namespace htrm
