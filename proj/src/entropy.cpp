#include "htrm/entropy.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace htrm {

double EntropyReport::term(const std::string& name) const {
    for (const auto& [k, v] : terms)
        if (k == name) return v;
    for (const auto& [k, v] : extras)
        if (k == name) return v;
    throw std::out_of_range("EntropyReport: no term " + name);
}

namespace {

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double sum_of(const std::vector<double>& d) { return std::accumulate(d.begin(), d.end(), 0.0); }

void violate(AdmissibilityFlags& f, const std::string& what) { f.violated.push_back(what); }

// ln of the number of distinct labelings of a rooted tree: sum ln c_v! - ln |Aut|.
double log_labelings(const RootedNeighborhood& g) {
    const MarkedGraph& rep = g.representative.graph;
    double s = -g.log_aut;
    for (Vertex v = 0; v < rep.n(); ++v) s += log_factorial(rep.degree(v) - (v == 0 ? 0 : 1));
    return s;
}

// Every vertex of an edge-rooted tree has one parent, o and o' being each other's.
double log_labelings(const EdgeRootedNeighborhood& g) {
    const MarkedGraph& rep = g.representative;
    double s = -g.log_aut;
    for (Vertex v = 0; v < rep.n(); ++v) s += log_factorial(rep.degree(v) - 1);
    return s;
}

template <class Law>
double plain_entropy(const Law& law) {
    double h = 0;
    for (const auto& [k, a] : law.atoms)
        if (a.second > 0) h -= a.second * std::log(a.second);
    return h;
}

template <class Law>
double mean_log_labelings(const Law& law) {
    double s = 0;
    for (const auto& [k, a] : law.atoms) {
        if (!a.first.tree) throw std::invalid_argument("labeled entropy needs tree-supported laws");
        s += a.second * log_labelings(a.first);
    }
    return s;
}

MarkedGraph strip_values(const MarkedGraph& g) {
    MarkedGraph out(g.n(), g.space());
    for (const auto& e : g.edges()) out.add_edge_raw(e.u, e.v, Mark(e.fwd.color, {}), Mark(e.bwd.color, {}));
    return out;
}

bool all_trees(const NeighborhoodLaw& mu) {
    return std::all_of(mu.atoms.begin(), mu.atoms.end(), [](const auto& a) { return a.second.first.tree; });
}
bool all_trees(const EdgeRootedLaw& nu) {
    return std::all_of(nu.atoms.begin(), nu.atoms.end(), [](const auto& a) { return a.second.first.tree; });
}

double edge_law_defect(const EdgeRootedLaw& nu) {
    double defect = 0;
    for (const auto& [k, a] : nu.atoms) {
        auto r = reversed(a.first, nu.quantizer);
        defect = std::max(defect, std::abs(a.second - nu.weight(r.encoding)));
    }
    return defect;
}

// H(X | (X)_1) for the uniform labeling; zero at depth <= 1.
double cond_first(const NeighborhoodLaw& mu) {
    if (mu.depth <= 1) return 0;
    return labeled_entropy(mu) - labeled_entropy(restrict_law(mu, 1));
}
double cond_first(const EdgeRootedLaw& nu) {
    if (nu.depth <= 1) return 0;
    return labeled_entropy(nu) - labeled_entropy(restrict_edge_law(nu, 1));
}

NeighborhoodLaw at_depth(const NeighborhoodLaw& mu, int h) {
    if (h < 1) throw std::invalid_argument("entropy: depth must be >= 1");
    if (mu.depth < h) throw std::invalid_argument("entropy: law is shallower than the requested depth");
    return restrict_law(mu, h);
}

// Mass of gamma at the quantized value of m, zero off support.
double gamma_mass(const std::vector<MarkLaw>& gamma, const Mark& m, const Quantizer& q) {
    if (m.omega || m.value.size() != 1) return 0;
    const MarkLaw& g = gamma.size() == 1 ? gamma[0] : gamma.at(static_cast<std::size_t>(m.color));
    if (!g.discrete()) throw std::invalid_argument("sigma1_discrete: mark laws must be point masses");
    const std::string key = q.key(m);
    double s = 0;
    for (const auto& [x, w] : g.atoms())
        if (q.key(Mark(m.color, {x})) == key) s += w;
    return s;
}

// Sum of ln gamma over the edges of a tree, each oriented away from the seeds.
double log_mark_product(const MarkedGraph& g, const std::vector<Vertex>& seeds, const std::vector<MarkLaw>& gamma,
                        const Quantizer& q) {
    std::vector<Vertex> parent(static_cast<std::size_t>(g.n()), -2);
    std::vector<Vertex> queue = seeds;
    for (Vertex s : seeds) parent[static_cast<std::size_t>(s)] = -1;
    double s = 0;
    if (seeds.size() == 2) {
        auto e = g.find_edge(seeds[0], seeds[1]);
        const auto& ed = g.edge(*e);
        double w = gamma_mass(gamma, ed.u == seeds[0] ? ed.fwd : ed.bwd, q);
        if (w <= 0) return -kInf;
        s += std::log(w);
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
        Vertex u = queue[i];
        for (const auto& h : g.adj(u)) {
            if (parent[static_cast<std::size_t>(h.to)] != -2) continue;
            parent[static_cast<std::size_t>(h.to)] = u;
            queue.push_back(h.to);
            double w = gamma_mass(gamma, g.mark_out(u, h), q);
            if (w <= 0) return -kInf;
            s += std::log(w);
        }
    }
    return s;
}

}  // namespace

PoissonKl kl_deg_poisson(const DegreeVectorLaw& D, const std::vector<double>& d, double mean_tol) {
    PoissonKl out;
    const std::size_t B = d.size();
    std::vector<double> mean(B, 0.0), elnfact(B, 0.0);
    for (const auto& [k, w] : D) {
        if (k.size() != B) throw std::invalid_argument("kl_deg_poisson: degree vector has the wrong length");
        for (std::size_t b = 0; b < B; ++b) {
            mean[b] += w * k[b];
            elnfact[b] += w * log_factorial(k[b]);
        }
    }
    for (std::size_t b = 0; b < B; ++b)
        if (std::abs(mean[b] - d[b]) > mean_tol * std::max(1.0, d[b])) out.mean_match = false;
    double direct = 0;
    for (const auto& [k, w] : D) {
        if (w <= 0) continue;
        double p = poisson_multivariate_pmf(d, k);
        if (p <= 0) {
            direct = kInf;
            break;
        }
        double lp = 0;
        for (std::size_t b = 0; b < B; ++b)
            lp += d[b] > 0 ? -d[b] + k[b] * std::log(d[b]) - log_factorial(k[b]) : 0.0;
        direct += w * (std::log(w) - lp);
    }
    out.value = direct;
    double closed = -shannon(D) + sum_of(d);
    for (std::size_t b = 0; b < B; ++b) {
        if (d[b] > 0) closed -= d[b] * std::log(d[b]);
        closed += elnfact[b];
    }
    out.closed_form = std::isfinite(direct) ? closed : kInf;
    return out;
}

double labeled_entropy(const NeighborhoodLaw& mu) { return plain_entropy(mu) + mean_log_labelings(mu); }
double labeled_entropy(const EdgeRootedLaw& nu) { return plain_entropy(nu) + mean_log_labelings(nu); }
double unlabeled_entropy(const NeighborhoodLaw& mu) { return plain_entropy(mu); }
double unlabeled_entropy(const EdgeRootedLaw& nu) { return plain_entropy(nu); }

EdgeRootedLaw restrict_edge_law(const EdgeRootedLaw& nu, int h) {
    if (h < 1 || h > nu.depth) throw std::invalid_argument("restrict_edge_law: bad depth");
    if (h == nu.depth) return nu;
    EdgeRootedLaw out;
    out.depth = h;
    out.quantizer = nu.quantizer;
    for (const auto& [k, a] : nu.atoms) out.add(edge_canonical_form(a.first.representative, 0, 1, h, nu.quantizer), a.second);
    return out;
}

NeighborhoodLaw shape_law(const NeighborhoodLaw& mu) {
    NeighborhoodLaw out;
    out.depth = mu.depth;
    out.quantizer = mu.quantizer;
    for (const auto& [k, a] : mu.atoms)
        out.add(canonical_form(strip_values(a.first.representative.graph), 0, mu.depth, mu.quantizer), a.second);
    return out;
}

DegreeVectorLaw root_degree_law(const NeighborhoodLaw& mu, int colors) {
    DegreeVectorLaw D;
    for (const auto& [k, a] : mu.atoms) {
        std::vector<int> deg(static_cast<std::size_t>(colors), 0);
        const MarkedGraph& g = a.first.representative.graph;
        for (const auto& h : g.adj(0)) {
            int b = g.mark_out(0, h).color;
            if (b < 0 || b >= colors) throw std::invalid_argument("root_degree_law: color outside the degree vector");
            ++deg[static_cast<std::size_t>(b)];
        }
        D[deg] += a.second;
    }
    return D;
}

EntropyReport sigma0(const NeighborhoodLaw& law, const std::vector<double>& d, int h, const EntropyOptions& opt) {
    EntropyReport r;
    NeighborhoodLaw mu = at_depth(law, h);
    const double dbar = sum_of(d);
    auto& f = r.flags;
    f.tree_support = all_trees(mu);
    if (!f.tree_support) violate(f, "not supported on trees (C2)");
    f.invariance_defect = unimodularity_defect(mu);
    if (f.invariance_defect > opt.defect_tol) violate(f, "invariance defect above tolerance (C1)");
    auto D = root_degree_law(mu, static_cast<int>(d.size()));
    auto pk = kl_deg_poisson(D, d, opt.mean_tol);
    f.degree_mean_match = pk.mean_match;
    if (!pk.mean_match) violate(f, "expected degree differs from d (C4)");
    if (!f.tree_support) {
        r.value = kInf;
        return r;
    }
    const double hg = cond_first(mu);
    double hv = 0, hv_unl = 0;
    if (mu.mean_degree() > 0) {
        EdgeRootedLaw nu = edge_root(mu);
        hv = cond_first(nu);
        if (nu.depth > 1) hv_unl = unlabeled_entropy(nu) - unlabeled_entropy(restrict_edge_law(nu, 1));
    }
    r.terms = {{"-H(G|G1)", -hg}, {"(dbar/2)H(vecG|vecG1)", 0.5 * dbar * hv}, {"KL(Deg|N_d)", pk.value}};
    const double hg_unl = mu.depth > 1 ? unlabeled_entropy(mu) - unlabeled_entropy(restrict_law(mu, 1)) : 0.0;
    r.extras = {{"KL(Deg|N_d) closed form", pk.closed_form},
                {"unlabeled value", -hg_unl + 0.5 * dbar * hv_unl + pk.value}};
    r.value = f.violated.empty() ? -hg + 0.5 * dbar * hv + pk.value : kInf;
    return r;
}

EntropyReport vec_sigma0(const EdgeRootedLaw& law, const std::vector<double>& d, int h, const EntropyOptions& opt) {
    EntropyReport r;
    if (h < 1 || law.depth < h) throw std::invalid_argument("vec_sigma0: bad depth");
    EdgeRootedLaw nu = restrict_edge_law(law, h);
    const double dbar = sum_of(d);
    auto& f = r.flags;
    f.tree_support = all_trees(nu);
    if (!f.tree_support) violate(f, "not supported on trees");
    f.invariance_defect = edge_law_defect(nu);
    if (f.invariance_defect > opt.defect_tol) violate(f, "edge law not invariant under reversal");
    auto colors = root_color_law(nu);
    for (std::size_t b = 0; b < d.size(); ++b) {
        double want = dbar > 0 ? d[b] / dbar : 0.0;
        auto it = colors.find(static_cast<int>(b));
        double got = it == colors.end() ? 0.0 : it->second;
        if (std::abs(got - want) > opt.mean_tol) f.root_mark_law = false;
    }
    for (const auto& [b, w] : colors)
        if ((b < 0 || b >= static_cast<int>(d.size())) && w > 0) f.root_mark_law = false;
    if (!f.root_mark_law) violate(f, "root mark law differs from d/dbar (C4')");
    if (h >= 2 && f.tree_support) {
        double dn = d_nu(nu);
        r.extras.emplace_back("d_nu", dn);
        if (dn < dbar * (1 - opt.mean_tol)) {
            f.d_nu_bound = false;
            violate(f, "d_nu below dbar (C4')");
        }
    }
    if (!f.violated.empty()) {
        r.value = kInf;
        return r;
    }
    NeighborhoodLaw g = dot(nu, dbar);
    const double hv = cond_first(nu);
    const double hg = cond_first(g);
    double hc = 0;
    if (g.depth >= 1 && g.mean_degree() > 0) hc = cond_first(size_bias(g));
    DegreeVectorLaw D;
    if (g.depth >= 1) D = root_degree_law(g, static_cast<int>(d.size()));
    else D[std::vector<int>(d.size(), 0)] = 1.0;
    auto pk = kl_deg_poisson(D, d, opt.mean_tol);
    // first-layer entropy balance between the size-biased star and the root edge
    double first = 0;
    if (g.depth >= 1 && g.mean_degree() > 0)
        first = dbar * (labeled_entropy(restrict_law(size_bias(g), 1)) - labeled_entropy(restrict_edge_law(nu, 1)));
    r.terms = {{"-(dbar/2)H(vecG|vecG1)", -0.5 * dbar * hv},
               {"dbar H(checkG|checkG1)", dbar * hc},
               {"-H(G|G1)", -hg},
               {"KL(Deg|N_d)", pk.value},
               {"dbar(H(checkG1)-H(vecG1))", first}};
    r.value = 0;
    for (const auto& [k, v] : r.terms) r.value += v;
    r.extras.emplace_back("value without first-layer balance", r.value - first);
    return r;
}

EntropyReport sigma1_discrete(const NeighborhoodLaw& law, const std::vector<MarkLaw>& gamma,
                              const std::vector<double>& d, int h, const EntropyOptions& opt) {
    EntropyReport r;
    NeighborhoodLaw mu = at_depth(law, h);
    const Quantizer& q = mu.quantizer;
    const double dbar = sum_of(d);
    auto& f = r.flags;
    f.tree_support = all_trees(mu);
    if (!f.tree_support) {
        violate(f, "not supported on trees (C2)");
        r.value = kInf;
        return r;
    }
    f.invariance_defect = unimodularity_defect(mu);
    if (f.invariance_defect > opt.defect_tol) violate(f, "invariance defect above tolerance (C1)");

    // KL(G | G_gamma) = sum_g mu(g) ln(mu(g) |Aut g| / (mu0(s) |Aut s| prod gamma(x_e)))
    std::map<std::string, std::pair<double, double>> shapes;  // encoding -> (mass, log aut)
    std::vector<std::pair<std::string, double>> shape_of;
    for (const auto& [k, a] : mu.atoms) {
        auto s = canonical_form(strip_values(a.first.representative.graph), 0, h, q);
        auto& e = shapes[s.encoding];
        e.first += a.second;
        e.second = s.log_aut;
        shape_of.emplace_back(s.encoding, 0.0);
    }
    double kl_g = 0;
    std::size_t i = 0;
    for (const auto& [k, a] : mu.atoms) {
        const auto& sh = shapes[shape_of[i++].first];
        if (a.second <= 0) continue;
        double lg = log_mark_product(a.first.representative.graph, {0}, gamma, q);
        if (!std::isfinite(lg)) {
            kl_g = kInf;
            break;
        }
        kl_g += a.second * (std::log(a.second) + a.first.log_aut - std::log(sh.first) - sh.second - lg);
    }

    double kl_v = 0;
    if (std::isfinite(kl_g) && mu.mean_degree() > 0) {
        EdgeRootedLaw nu = edge_root(mu);
        std::map<std::string, std::pair<double, double>> vshapes;
        std::vector<std::string> vshape_of;
        for (const auto& [k, a] : nu.atoms) {
            auto s = edge_canonical_form(strip_values(a.first.representative), 0, 1, h, q);
            auto& e = vshapes[s.encoding];
            e.first += a.second;
            e.second = s.log_aut;
            vshape_of.push_back(s.encoding);
        }
        std::size_t j = 0;
        for (const auto& [k, a] : nu.atoms) {
            const auto& sh = vshapes[vshape_of[j++]];
            if (a.second <= 0) continue;
            double lg = log_mark_product(a.first.representative, {0, 1}, gamma, q);
            if (!std::isfinite(lg)) {
                kl_v = kInf;
                break;
            }
            kl_v += a.second * (std::log(a.second) + a.first.log_aut - std::log(sh.first) - sh.second - lg);
        }
    }
    if (!std::isfinite(kl_g) || !std::isfinite(kl_v)) {
        f.marks_in_support = false;
        violate(f, "marks outside the support of gamma (C5)");
        r.value = kInf;
        return r;
    }
    r.terms = {{"KL(G|G_gamma)", kl_g}, {"-(dbar/2)KL(vecG|vecG_gamma)", -0.5 * dbar * kl_v}};
    r.value = f.violated.empty() ? kl_g - 0.5 * dbar * kl_v : kInf;
    return r;
}

double j_d(double d, double delta) {
    if (delta < 0) throw std::invalid_argument("j_d: negative delta");
    if (d == 0) return delta == 0 ? 0.0 : kInf;
    if (delta == 0) return kInf;
    return 0.5 * (d * std::log(d / delta) + d - delta);
}

double edge_count_rate(double d, double delta) {
    if (delta < 0) throw std::invalid_argument("edge_count_rate: negative delta");
    if (delta == 0) return 0.5 * d;
    if (d == 0) return kInf;
    return 0.5 * (delta * std::log(delta / d) - delta + d);
}

double I_delta_d(const std::vector<std::pair<Mark, double>>& dm, const std::vector<double>& d,
                 const std::vector<std::pair<Mark, double>>& gamma_delta, const MarkSpace& space,
                 const Quantizer& q, double tol) {
    std::map<std::string, std::pair<Mark, double>> m, g;
    for (const auto& [z, w] : dm) {
        auto& e = m[q.key(z)];
        e.first = q.apply(z);
        e.second += w;
    }
    for (const auto& [z, w] : gamma_delta) g[q.key(z)].second += w;
    std::vector<double> marg(d.size(), 0.0);
    for (const auto& [k, e] : m) {
        const Mark& z = e.first;
        auto it = m.find(q.key(space.star(z)));
        double ws = it == m.end() ? 0.0 : it->second.second;
        if (std::abs(ws - e.second) > tol) return kInf;
        if (z.color < 0 || z.color >= static_cast<int>(d.size())) return e.second > tol ? kInf : 0.0;
        marg[static_cast<std::size_t>(z.color)] += e.second;
    }
    for (std::size_t b = 0; b < d.size(); ++b)
        if (std::abs(marg[b] - d[b]) > tol) return kInf;
    double s = 0;
    for (const auto& [k, e] : m) {
        if (e.second <= 0) continue;
        auto it = g.find(k);
        double gw = it == g.end() ? 0.0 : it->second.second;
        double base = d[static_cast<std::size_t>(e.first.color)] * gw;
        if (base <= 0) return kInf;
        s += e.second * std::log(e.second / base);
    }
    return 0.5 * s;
}

EntropyReport sigma_er(const NeighborhoodLaw& law, const MarkLaw& gamma, double d, int h,
                       const EntropyOptions& opt) {
    NeighborhoodLaw mu = at_depth(law, h);
    const double delta = mu.mean_degree();
    EntropyReport r;
    EntropyReport s0 = sigma0(shape_law(mu), {delta}, h, opt);
    EntropyReport s1 = sigma1_discrete(mu, {gamma}, {delta}, h, opt);
    r.flags = s0.flags;
    r.flags.marks_in_support = s1.flags.marks_in_support;
    for (const auto& v : s1.flags.violated)
        if (std::find(r.flags.violated.begin(), r.flags.violated.end(), v) == r.flags.violated.end())
            r.flags.violated.push_back(v);
    r.terms = s0.terms;
    r.terms.insert(r.terms.end(), s1.terms.begin(), s1.terms.end());
    r.terms.emplace_back("edge-count rate", edge_count_rate(d, delta));
    r.extras = s0.extras;
    r.extras.emplace_back("delta", delta);
    r.extras.emplace_back("j_d(delta)", j_d(d, delta));
    if (!r.flags.violated.empty()) {
        r.value = kInf;
        return r;
    }
    r.value = 0;
    for (const auto& [k, v] : r.terms) r.value += v;
    return r;
}

namespace {

// P(a < X < b) for a continuous law, computed on the side of the smaller tail.
double interval_mass(const MarkLaw& p, double a, double b) {
    if (p.kind() == MarkLaw::Kind::gaussian) {
        const double m = p.params()[0], s = p.params()[1] * std::sqrt(2.0);
        if (a >= m) return 0.5 * (std::erfc((a - m) / s) - std::erfc((b - m) / s));
        if (b <= m) return 0.5 * (std::erfc((m - b) / s) - std::erfc((m - a) / s));
        return 1.0 - 0.5 * std::erfc((b - m) / s) - 0.5 * std::erfc((m - a) / s);
    }
    return std::max(0.0, p.cdf(b) - p.cdf(a));
}

constexpr std::int64_t kOmegaBin = INT64_MAX;

}  // namespace

std::map<std::int64_t, double> quantized_masses(const MarkLaw& p, const Quantizer& q) {
    std::map<std::int64_t, double> out;
    if (p.discrete()) {
        for (const auto& [x, w] : p.atoms()) {
            auto j = q.bin(x);
            out[j ? *j : kOmegaBin] += w;
        }
        return out;
    }
    const double delta = q.delta(), ke = q.kappa_eff();
    const auto J = static_cast<std::int64_t>(std::llround(ke / delta)) - 1;
    for (std::int64_t j = -J; j <= J; ++j) {
        double lo, hi;
        if (j == 0) lo = -delta, hi = delta;
        else if (j > 0) lo = j * delta, hi = (j + 1) * delta;
        else lo = (j - 1) * delta, hi = j * delta;
        double w = interval_mass(p, lo, hi);
        out[j] = w;
    }
    out[kOmegaBin] = interval_mass(p, -kInf, -ke) + interval_mass(p, ke, kInf);
    return out;
}

std::vector<KlSweepEntry> discretized_kl_sweep(const MarkLaw& p, const MarkLaw& q, double kappa,
                                               const std::vector<double>& deltas) {
    std::vector<KlSweepEntry> out;
    for (double delta : deltas) {
        Quantizer qz(delta, kappa);
        auto a = quantized_masses(p, qz), b = quantized_masses(q, qz);
        FiniteLaw<std::int64_t> fa(a.begin(), a.end()), fb(b.begin(), b.end());
        out.push_back({delta, kl(fa, fb)});
    }
    return out;
}

double binomial_log_tail(long long N, double p, long long k) {
    if (N < 0 || p < 0 || p > 1) throw std::invalid_argument("binomial_log_tail: bad parameters");
    if (k <= 0) return 0.0;
    if (k > N) return -kInf;
    const double lN = std::lgamma(static_cast<double>(N) + 1.0), lp = std::log(p), lq = std::log1p(-p);
    auto term = [&](long long j) {
        return lN - std::lgamma(static_cast<double>(j) + 1.0) - std::lgamma(static_cast<double>(N - j) + 1.0) +
               static_cast<double>(j) * lp + static_cast<double>(N - j) * lq;
    };
    // Terms are unimodal; start from the larger of k and the mode and walk both ways.
    const long long mode = std::min(N, std::max(k, static_cast<long long>(std::floor((N + 1) * p))));
    const double top = term(mode);
    double s = 0;
    for (long long j = mode; j <= N; ++j) {
        double t = term(j) - top;
        s += std::exp(t);
        if (t < -60) break;
    }
    for (long long j = mode - 1; j >= k; --j) {
        double t = term(j) - top;
        s += std::exp(t);
        if (t < -60) break;
    }
    return top + std::log(s);
}

}  // namespace htrm
