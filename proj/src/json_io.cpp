#include "htrm/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace htrm {

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double read_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        if (s == "nan") return std::nan("");
    }
    throw std::invalid_argument("expected a number, got " + j.dump());
}

std::string format_double(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace {

Json mark_json(const Mark& m) {
    Json j;
    j["color"] = m.color;
    if (m.omega) j["omega"] = true;
    else {
        Json v = Json::array();
        for (double x : m.value) v.push_back(number(x));
        j["value"] = v;
    }
    return j;
}

Mark mark_from(const Json& j) {
    Mark m;
    if (j.is_number()) {
        m.value = {j.get<double>()};
        return m;
    }
    m.color = j.value("color", 0);
    m.omega = j.value("omega", false);
    if (j.contains("value")) {
        const Json& v = j.at("value");
        if (v.is_array())
            for (const auto& x : v) m.value.push_back(read_number(x));
        else m.value = {read_number(v)};
    }
    return m;
}

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw std::invalid_argument(what + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw std::invalid_argument(what + ": unknown key '" + k + "'");
}

}  // namespace

Json to_json(const MarkedGraph& g) {
    Json j;
    j["n"] = g.n();
    const auto& sp = g.space();
    if (!(sp.inv == Involution::identity(1))) j["involution"] = {{"signs", sp.inv.signs}, {"perm", sp.inv.perm}};
    if (!sp.color_conj.empty()) j["color_conj"] = sp.color_conj;
    Json edges = Json::array();
    for (const auto& e : g.edges()) {
        const bool fwd = e.u < e.v;
        Json je;
        je["u"] = fwd ? e.u : e.v;
        je["v"] = fwd ? e.v : e.u;
        je["mark"] = mark_json(fwd ? e.fwd : e.bwd);
        if (!(sp.star(e.fwd) == e.bwd)) je["reverse_mark"] = mark_json(fwd ? e.bwd : e.fwd);
        edges.push_back(je);
    }
    j["edges"] = edges;
    return j;
}

MarkedGraph graph_from_json(const Json& j) {
    require_keys(j, {"n", "edges", "involution", "color_conj"}, "graph");
    MarkSpace sp;
    if (j.contains("involution")) {
        sp.inv.signs = j.at("involution").at("signs").get<std::vector<int>>();
        sp.inv.perm = j.at("involution").at("perm").get<std::vector<int>>();
        if (!sp.inv.valid()) throw std::invalid_argument("graph: invalid involution");
    }
    if (j.contains("color_conj")) sp.color_conj = j.at("color_conj").get<std::vector<int>>();
    const int n = j.at("n").get<int>();
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    MarkedGraph g(n, sp);
    for (const auto& e : j.at("edges")) {
        const int u = e.at("u").get<int>(), v = e.at("v").get<int>();
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("graph: edge endpoint out of range");
        const Mark m = e.contains("mark") ? mark_from(e.at("mark")) : Mark(1.0);
        if (e.contains("reverse_mark")) g.add_edge_raw(u, v, m, mark_from(e.at("reverse_mark")));
        else g.add_edge(u, v, m);
    }
    auto problems = validate(g);
    if (!problems.empty()) throw std::invalid_argument("graph: " + problems.front());
    return g;
}

Json to_json(const RootedGraph& g) {
    Json j = to_json(g.graph);
    j["root"] = g.root;
    j["depth"] = g.depth;
    return j;
}

RootedGraph rooted_from_json(const Json& j) {
    Json body = j;
    const int root = body.value("root", 0), depth = body.value("depth", 0);
    body.erase("root");
    body.erase("depth");
    RootedGraph g{graph_from_json(body), root, depth};
    if (root < 0 || root >= std::max(1, g.graph.n())) throw std::invalid_argument("rooted graph: root out of range");
    return g;
}

Json to_json(const RootedNeighborhood& g) {
    Json j;
    j["encoding"] = g.hex();
    j["depth"] = g.depth;
    j["tree"] = g.tree;
    j["representative"] = to_json(g.representative);
    return j;
}

Json to_json(const NeighborhoodLaw& mu) {
    Json atoms = Json::array();
    for (const auto& [k, a] : mu.atoms)
        atoms.push_back({{"encoding", a.first.hex()}, {"weight", number(a.second)},
                         {"representative", to_json(a.first.representative)}});
    return {{"h", mu.depth}, {"atoms", atoms}};
}

NeighborhoodLaw law_from_json(const Json& j, const Quantizer& q) {
    NeighborhoodLaw mu;
    mu.depth = j.at("h").get<int>();
    mu.quantizer = q;
    for (const auto& a : j.at("atoms")) {
        RootedGraph r = rooted_from_json(a.at("representative"));
        mu.add(canonical_form(r.graph, r.root, mu.depth, q), read_number(a.at("weight")));
    }
    return mu;
}

Json to_json(const EdgeRootedLaw& nu) {
    Json atoms = Json::array();
    for (const auto& [k, a] : nu.atoms)
        atoms.push_back({{"encoding", a.first.hex()}, {"weight", number(a.second)},
                         {"representative", to_json(a.first.representative)}});
    return {{"h", nu.depth}, {"atoms", atoms}};
}

Json to_json(const DegreeLaw& pi) {
    Json pmf = Json::array();
    for (const auto& [k, w] : pi.pmf) pmf.push_back({{"degree", k}, {"p", number(w)}});
    Json j{{"colors", pi.colors}, {"pmf", pmf}};
    if (pi.cap >= 0) j["cap"] = pi.cap;
    return j;
}

Json to_json(const TestGraph& H) {
    Json edges = Json::array();
    for (const auto& e : H.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"label", e.label}, {"star", e.star}});
    return {{"vertices", H.vertices}, {"root", H.root}, {"edges", edges}};
}

TestGraph test_graph_from_json(const Json& j) {
    require_keys(j, {"vertices", "root", "edges"}, "test graph");
    TestGraph H;
    H.vertices = j.at("vertices").get<int>();
    H.root = j.value("root", -1);
    if (H.vertices < 1) throw std::invalid_argument("test graph: needs at least one vertex");
    if (H.root < -1 || H.root >= H.vertices) throw std::invalid_argument("test graph: root out of range");
    for (const auto& e : j.at("edges")) {
        TestEdge te{e.at("from").get<int>(), e.at("to").get<int>(), e.value("label", 0), e.value("star", false)};
        if (te.from < 0 || te.to < 0 || te.from >= H.vertices || te.to >= H.vertices || te.label < 0)
            throw std::invalid_argument("test graph: bad edge");
        H.edges.push_back(te);
    }
    return H;
}

std::vector<TestGraph> load_test_graphs(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<TestGraph> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        out.push_back(test_graph_from_json(Json::parse(in)));
    }
    return out;
}

Json to_json(const MarkLaw& m) {
    const auto& p = m.params();
    switch (m.kind()) {
        case MarkLaw::Kind::point_masses: {
            Json a = Json::array();
            for (const auto& [x, w] : m.atoms()) a.push_back(Json::array({x, w}));
            return {{"point_masses", a}};
        }
        case MarkLaw::Kind::gaussian: return {{"gaussian", {p[0], p[1]}}};
        case MarkLaw::Kind::uniform: return {{"uniform", {p[0], p[1]}}};
        case MarkLaw::Kind::pareto: return {{"pareto", {p[0], p[1], p[2]}}};
    }
    return {};
}

MarkLaw mark_law_from_json(const Json& j) {
    if (j.is_number()) return MarkLaw::dirac(j.get<double>());
    if (!j.is_object() || j.size() != 1) throw std::invalid_argument("mark law: expected one of point_masses, gaussian, uniform, pareto");
    const auto& [key, v] = *j.items().begin();
    auto arg = [&](std::size_t i) { return v.at(i).get<double>(); };
    if (key == "point_masses") {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : v) atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        return MarkLaw::point_masses(std::move(atoms));
    }
    if (key == "gaussian") return MarkLaw::gaussian(arg(0), arg(1));
    if (key == "uniform") return MarkLaw::uniform(arg(0), arg(1));
    if (key == "pareto") return MarkLaw::pareto(arg(0), arg(1), arg(2));
    throw std::invalid_argument("mark law: unknown kind '" + key + "'");
}

Json to_json(const EnsembleConfig& cfg) {
    Json j;
    j["ensemble"] = to_string(cfg.kind);
    j["n"] = cfg.n;
    switch (cfg.kind) {
        case EnsembleKind::sparse_wigner:
        case EnsembleKind::er_marked:
        case EnsembleKind::general_gamma_n:
            j["d"] = cfg.d;
            j["gamma"] = to_json(cfg.gamma);
            break;
        case EnsembleKind::config_model:
            j["degrees"] = cfg.degrees;
            j["gamma"] = to_json(cfg.gamma);
            j["rejection_budget"] = cfg.rejection_budget;
            break;
        case EnsembleKind::levy:
            j["alpha"] = cfg.alpha;
            j["c"] = cfg.c;
            j["p"] = cfg.p;
            j["q"] = cfg.q;
            break;
        case EnsembleKind::given_edge_counts: {
            j["edge_counts"] = cfg.edge_counts;
            Json g = Json::array();
            for (const auto& m : cfg.color_gamma) g.push_back(to_json(m));
            j["color_gamma"] = g;
            break;
        }
    }
    j["seed"] = cfg.seed;
    return j;
}

EnsembleConfig ensemble_from_json(const Json& j) {
    require_keys(j, {"ensemble", "n", "d", "degrees", "regular_degree", "alpha", "c", "p", "q", "gamma", "edge_counts",
                     "color_gamma", "seed", "rejection_budget"},
                 "ensemble config");
    EnsembleConfig cfg;
    try {
        cfg.kind = ensemble_kind_from_string(j.at("ensemble").get<std::string>());
        cfg.n = j.value("n", cfg.n);
        cfg.d = j.value("d", cfg.d);
        if (j.contains("degrees")) cfg.degrees = j.at("degrees").get<std::vector<int>>();
        if (j.contains("regular_degree")) cfg.degrees.assign(static_cast<std::size_t>(cfg.n), j.at("regular_degree").get<int>());
        cfg.alpha = j.value("alpha", cfg.alpha);
        cfg.c = j.value("c", cfg.c);
        cfg.p = j.value("p", cfg.p);
        cfg.q = j.contains("q") ? j.at("q").get<double>() : 1.0 - cfg.p;
        if (j.contains("gamma")) cfg.gamma = mark_law_from_json(j.at("gamma"));
        if (j.contains("edge_counts")) cfg.edge_counts = j.at("edge_counts").get<std::vector<long long>>();
        if (j.contains("color_gamma"))
            for (const auto& m : j.at("color_gamma")) cfg.color_gamma.push_back(mark_law_from_json(m));
        cfg.seed = j.value("seed", cfg.seed);
        cfg.rejection_budget = j.value("rejection_budget", cfg.rejection_budget);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("ensemble config: ") + e.what());
    }
    cfg.check();
    return cfg;
}

std::string to_csv(const SpectralMeasure& m) {
    std::string s = "value,weight\n";
    for (const auto& [x, w] : m.atoms()) s += format_double(x) + "," + format_double(w) + "\n";
    return s;
}

Json to_json(const Histogram& h) {
    Json e = Json::array(), m = Json::array();
    for (double x : h.edges) e.push_back(number(x));
    for (double x : h.masses) m.push_back(number(x));
    return {{"edges", e}, {"masses", m}};
}

Json to_json(const EntropyReport& r) {
    Json terms = Json::object(), extras = Json::object();
    for (const auto& [k, v] : r.terms) terms[k] = number(v);
    for (const auto& [k, v] : r.extras) extras[k] = number(v);
    const auto& f = r.flags;
    Json flags{{"tree_support", f.tree_support},
               {"invariance_defect", number(f.invariance_defect)},
               {"degree_mean_match", f.degree_mean_match},
               {"root_mark_law", f.root_mark_law},
               {"d_nu_bound", f.d_nu_bound},
               {"marks_in_support", f.marks_in_support},
               {"violated", f.violated}};
    return {{"value", number(r.value)}, {"terms", terms}, {"extras", extras}, {"flags", flags}};
}

std::string to_csv(const std::vector<KlSweepEntry>& sweep) {
    std::string s = "delta,kl\n";
    for (const auto& e : sweep) s += format_double(e.delta) + "," + format_double(e.kl) + "\n";
    return s;
}

}  // namespace htrm
