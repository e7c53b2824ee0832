#include "htrm/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "htrm/entropy.hpp"
#include "htrm/limits.hpp"
#include "htrm/local_law.hpp"
#include "htrm/models.hpp"
#include "htrm/spectral.hpp"
#include "htrm/traffics.hpp"

namespace htrm {

const std::vector<CriterionInfo>& acceptance_criteria() {
    static const std::vector<CriterionInfo> list = {
        {1, "mobius", "Mobius exactness", 30},
        {2, "trace", "traffic/trace consistency", 10},
        {3, "regular", "regular-tree limit", 300},
        {4, "er", "ER/UGW cross-validation", 600},
        {5, "levy", "Levy/PWIT cross-validation", 900},
        {6, "edge_rooting", "edge-rooting identities", 20},
        {7, "entropy_minimizer", "entropy at the minimizer", 30},
        {8, "entropy_inequality", "entropy inequality", 60},
        {9, "discretization", "discretized KL convergence", 5},
        {10, "edge_count", "edge-count tail rate", 10},
        {11, "freeness", "traffic freeness", 60},
        {12, "thinning", "PWIT thinning", 60},
        {13, "rank", "rank inequality", 30},
    };
    return list;
}

std::vector<int> suite_ids(const std::string& suite) {
    std::vector<int> ids;
    for (const auto& c : acceptance_criteria())
        if (suite == "all" || suite == c.suite || suite == std::to_string(c.id)) ids.push_back(c.id);
    if (ids.empty()) throw std::invalid_argument("unknown suite: " + suite);
    return ids;
}

namespace {

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double u01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Outcome {
    bool pass;
    std::string detail;
};

// ---- 1. Mobius -------------------------------------------------------------

// Connected test graphs on at most `max_v` vertices rooted at 0: every orientation
// pattern on vertex pairs plus an optional loop at the root, one label.
std::vector<TestGraph> small_test_graphs(int max_v) {
    std::vector<TestGraph> out;
    for (int V = 1; V <= max_v; ++V) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < V; ++a)
            for (int b = a + 1; b < V; ++b) pairs.emplace_back(a, b);
        long total = 1;
        for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;
        for (long code = 0; code < total; ++code)
            for (int loop = 0; loop < 2; ++loop) {
                TestGraph H;
                H.vertices = V;
                H.root = 0;
                long c = code;
                for (const auto& [a, b] : pairs) {
                    int s = static_cast<int>(c % 3);
                    c /= 3;
                    if (s == 1) H.edges.push_back({a, b, 0, false});
                    if (s == 2) H.edges.push_back({b, a, 0, false});
                }
                if (loop) H.edges.push_back({0, 0, 0, false});
                if (H.edges.empty() && V > 1) continue;
                if (H.connected()) out.push_back(H);
            }
    }
    return out;
}

MarkedGraph random_marked_graph(Rng& rng, int max_n, bool complex_marks) {
    const int n = uniform_int(rng, 2, max_n);
    MarkSpace sp;
    if (complex_marks) sp.inv = Involution::conjugation(1);
    MarkedGraph g(n, sp);
    std::normal_distribution<double> N01;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (u01(rng) < 0.5) {
                if (complex_marks) g.add_edge(u, v, Mark(0, {N01(rng), N01(rng)}));
                else g.add_edge(u, v, Mark(N01(rng)));
            }
    return g;
}

Outcome crit_mobius(const AcceptanceOptions& opt) {
    Rng rng = make_rng(opt.seed, 1);
    auto graphs = small_test_graphs(4);
    double err_roundtrip = 0;
    std::uniform_real_distribution<double> U(-1, 1);
    for (const auto& H : graphs) {
        PartitionTable t0;
        for (const auto& p : set_partitions(H.vertices)) t0[p] = Complex(U(rng), U(rng));
        auto back = mobius_inverse(mobius_forward(t0, H.vertices), H.vertices);
        for (const auto& [p, v] : t0) err_roundtrip = std::max(err_roundtrip, std::abs(back.at(p) - v));
    }
    double err_tau = 0, err_rooted = 0;
    long checks = 0;
    for (int gi = 0; gi < 50; ++gi) {
        MarkedGraph g = random_marked_graph(rng, 8, gi % 2 == 1);
        Matrices Y = traffic_matrices(g);
        RootedGraph rg{g, 0, g.n()};
        for (int t = 0; t < 40; ++t) {
            TestGraph H = graphs[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(graphs.size()) - 1))];
            if (gi % 2 == 1)
                for (auto& e : H.edges) e.star = u01(rng) < 0.5;
            const auto parts = set_partitions(H.vertices);
            PartitionTable t0, r0;
            for (const auto& p : parts) {
                TestGraph Q = quotient(H, p);
                t0[p] = traffic_eval_injective(Y, Q);
                r0[p] = rooted_traffic_eval(rg, Q, true);
            }
            auto tau = mobius_forward(t0, H.vertices);
            auto rtau = mobius_forward(r0, H.vertices);
            for (const auto& p : parts) {
                TestGraph Q = quotient(H, p);
                err_tau = std::max(err_tau, std::abs(tau.at(p) - traffic_eval(Y, Q)));
                err_rooted = std::max(err_rooted, std::abs(rtau.at(p) - rooted_traffic_eval(rg, Q, false)));
                ++checks;
            }
        }
    }
    const double worst = std::max({err_roundtrip, err_tau, err_rooted});
    return {worst <= 1e-12, std::to_string(graphs.size()) + " test graphs, " + std::to_string(checks) +
                                " quotient checks, max err " + fmt("%.2e", worst)};
}

// ---- 2. trace ---------------------------------------------------------------

TestGraph cycle_graph(int k) {
    TestGraph H;
    H.vertices = k;
    for (int i = 0; i < k; ++i) H.edges.push_back({i, (i + 1) % k, 0, false});
    return H;
}

Outcome crit_trace(const AcceptanceOptions& opt) {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::sparse_wigner;
    cfg.n = 200;
    cfg.d = 3;
    cfg.seed = opt.seed;
    SparseSym Y = sample_sparse_wigner(cfg, 2);
    Matrices M{Eigen::MatrixXd(Y).cast<Complex>()};
    SpectralMeasure L = esd(Y);
    double worst = 0;
    for (int k = 1; k <= 6; ++k) {
        const double tr = trace_moment(Y, k);
        const Complex tau = traffic_eval(M, cycle_graph(k));
        const double m = moment(L, k);
        const double scale = std::max(1.0, std::abs(tr));
        worst = std::max({worst, std::abs(tau - tr) / scale, std::abs(m - tr) / scale, std::abs(tau.imag())});
    }
    return {worst <= 1e-8, "k <= 6, max rel err " + fmt("%.2e", worst)};
}

// ---- 3. regular tree --------------------------------------------------------

Outcome crit_regular(const AcceptanceOptions& opt) {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::config_model;
    cfg.n = 2000;
    cfg.degrees.assign(2000, 3);
    cfg.seed = opt.seed;
    SamplerInfo info;
    SparseSym Y = sample_configuration_model(cfg, 3, &info);
    SpectralMeasure L = esd(Y);
    RootedGraph tree = sample_ugw(MarkLaw::dirac(1.0), degree_dirac(3), 12, opt.seed, 3);
    SpectralMeasure T = root_spectral_measure(tree);
    double worst = 0;
    std::string mom;
    for (int k = 2; k <= 8; k += 2) {
        const double a = moment(L, k), b = moment(T, k);
        worst = std::max(worst, std::abs(a - b));
        mom += " m" + std::to_string(k) + "=" + fmt("%.4f", a) + "/" + fmt("%.4f", b);
    }
    const double bl = surrogate_bl(L, T);
    return {worst <= 0.05 && bl <= 0.05, "sampler " + info.method + ";" + mom + "; max moment gap " + fmt("%.4f", worst) +
                                             ", surrogate_bl " + fmt("%.4f", bl) + " (W1 " +
                                             fmt("%.4f", w1_distance(L, T)) + ", KS " +
                                             fmt("%.4f", kolmogorov_distance(L, T)) + ")"};
}

// ---- 4. ER / UGW ------------------------------------------------------------

Outcome crit_er(const AcceptanceOptions& opt) {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::sparse_wigner;
    cfg.n = 2000;
    cfg.d = 2;
    cfg.seed = opt.seed;
    std::vector<SpectralMeasure> parts;
    for (int s = 0; s < 5; ++s) parts.push_back(esd(sample_sparse_wigner(cfg, 40 + static_cast<std::uint64_t>(s))));
    SpectralMeasure L = average(parts);
    const DegreeLaw pi = degree_poisson(2.0);
    const MarkLaw gamma = MarkLaw::dirac(1.0);
    LimitEstimateOptions lo;
    lo.n_samples = 200;
    lo.jobs = opt.jobs;
    lo.seed = derive_seed(opt.seed, 4);
    SpectralMeasure T = limit_esd_estimate([&](Rng& rng) { return sample_ugw({gamma}, pi, 9, rng); }, lo);
    const double bl = surrogate_bl(L, T);
    return {bl <= 0.1, "surrogate_bl " + fmt("%.4f", bl) + " (W1 " + fmt("%.4f", w1_distance(L, T)) + ", KS " +
                           fmt("%.4f", kolmogorov_distance(L, T)) + ")"};
}

// ---- 5. Levy / PWIT ---------------------------------------------------------

Outcome crit_levy(const AcceptanceOptions& opt) {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::levy;
    cfg.n = 1000;
    cfg.alpha = 1.25;
    cfg.c = 1;
    cfg.p = cfg.q = 0.5;
    cfg.seed = opt.seed;
    std::vector<SpectralMeasure> parts;
    for (int s = 0; s < 5; ++s) parts.push_back(esd(sample_levy(cfg, 50 + static_cast<std::uint64_t>(s))));
    SpectralMeasure L = average(parts);
    const double clipped_mass = L.mass_outside(-10, 10);
    PwitSpectrumOptions po;
    po.h = 6;
    po.eps = 0.05;
    po.theta = 0.1;
    po.n_samples = 300;
    po.jobs = opt.jobs;
    po.seed = derive_seed(opt.seed, 5);
    PwitSpectrumStats st;
    SpectralMeasure T = pwit_stable_spectrum(IntensityMeasure::stable(1.25, 0.5, 1.0), po, &st);
    const double tree_clipped = T.mass_outside(-10, 10);
    const double ks = kolmogorov_distance(L.clipped(-10, 10), T.clipped(-10, 10));
    return {ks <= 0.15, "KS " + fmt("%.4f", ks) + ", ESD mass clipped " + fmt("%.4f", clipped_mass) +
                            ", tree mass clipped " + fmt("%.4f", tree_clipped) + ", mean tree size " +
                            fmt("%.0f", st.mean_vertices)};
}

// ---- 6. edge rooting --------------------------------------------------------

MarkedGraph random_colored_graph(Rng& rng, int n, double p, int colors) {
    MarkedGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (u01(rng) < p) g.add_edge(u, v, Mark(uniform_int(rng, 0, colors - 1), {static_cast<double>(uniform_int(rng, 1, 2))}));
    return g;
}

Outcome crit_edge_rooting(const AcceptanceOptions& opt) {
    Rng rng = make_rng(opt.seed, 6);
    const Quantizer q;
    double worst = 0;
    int graphs = 0;
    while (graphs < 200) {
        const int n = uniform_int(rng, 2, 14);
        MarkedGraph g = random_colored_graph(rng, n, 2.5 / n, 2);
        if (g.num_edges() == 0) continue;
        ++graphs;
        const int h = 2 + graphs % 2;
        ExactNeighborhoodLaw mu = neighborhood_distribution(g, h, q);
        ExactEdgeRootedLaw nu = edge_root(mu);
        const Rational dbar = mu.mean_degree();
        std::map<int, Rational> pm, pv;
        for (const auto& [k, a] : mu.atoms) pm[root_degree(a.first)] += a.second;
        for (const auto& [k, a] : nu.atoms) pv[origin_degree(a.first)] += a.second;
        for (const auto& [k, w] : pm)
            if (k >= 1) worst = std::max(worst, std::abs(to_double(pv[k] - Rational(k) * w / dbar)));
        for (const auto& [k, w] : pv) worst = std::max(worst, std::abs(to_double(w - Rational(k) * pm[k] / dbar)));
        ExactNeighborhoodLaw back = dot(nu, dbar);
        ExactNeighborhoodLaw want = restrict_law(mu, h - 1);
        for (const auto& [k, a] : want.atoms) worst = std::max(worst, std::abs(to_double(a.second - back.weight(k))));
        for (const auto& [k, a] : back.atoms) worst = std::max(worst, std::abs(to_double(a.second - want.weight(k))));
    }
    return {worst <= 1e-12, std::to_string(graphs) + " graphs, max weight discrepancy " + fmt("%.2e", worst)};
}

// ---- 7. entropy minimizer ---------------------------------------------------

Outcome crit_entropy_minimizer(const AcceptanceOptions&) {
    const MarkLaw gamma = MarkLaw::dirac(1.0);
    // Poisson(1) cut at degree 6 and renormalized; its UGW law is exactly unimodular.
    const DegreeLaw pi = degree_poisson(1.0, 1e-4);
    TruncatedLaw t = ugw_truncated_law(gamma, pi, 2, 1 + pi.cap * pi.cap);
    EntropyReport at = sigma_er(t.law, gamma, 1.0, 2);
    TruncatedLaw p = ugw_truncated_law(gamma, degree_from_pmf({0.5, 0.0, 0.5}), 2, 64);
    EntropyReport off = sigma_er(p.law, gamma, 1.0, 2);
    const bool ok = at.value >= 0 && at.value <= 0.02 && off.value >= 0.05;
    return {ok, "degree cap " + std::to_string(pi.cap) + ", dropped " + fmt("%.1e", t.dropped) + ", value " +
                    fmt("%.3e", at.value) + "; perturbed " + fmt("%.4f", off.value)};
}

// ---- 8. entropy inequality --------------------------------------------------

MarkedGraph random_tree(Rng& rng, int n, int colors) {
    MarkedGraph g(n);
    for (int v = 1; v < n; ++v) g.add_edge(uniform_int(rng, 0, v - 1), v, Mark(uniform_int(rng, 0, colors - 1), {0.0}));
    return g;
}

Outcome crit_entropy_inequality(const AcceptanceOptions& opt) {
    Rng rng = make_rng(opt.seed, 8);
    const Quantizer q;
    double min_slack = kInf;
    int infinite = 0;
    for (int i = 0; i < 100; ++i) {
        const int n = uniform_int(rng, 2, 16);
        const int h = 2 + i % 2;
        MarkedGraph T = random_tree(rng, n, 3);
        NeighborhoodLaw mu = to_float(neighborhood_distribution(T, h, q));
        DegreeVectorLaw D = root_degree_law(mu, 3);
        std::vector<double> d(3, 0.0);
        for (const auto& [k, w] : D)
            for (int b = 0; b < 3; ++b) d[static_cast<std::size_t>(b)] += w * k[static_cast<std::size_t>(b)];
        EntropyReport s = sigma0(mu, d, h);
        EntropyReport v = vec_sigma0(edge_root(mu), d, h);
        if (!s.finite() || !v.finite()) {
            ++infinite;
            continue;
        }
        min_slack = std::min(min_slack, s.value - v.value);
    }
    return {infinite == 0 && min_slack >= -1e-9,
            "100 trees, h in {2,3}, min slack " + fmt("%.3e", min_slack) + ", non-finite " + std::to_string(infinite)};
}

// ---- 9. discretization ------------------------------------------------------

Outcome crit_discretization(const AcceptanceOptions&) {
    std::vector<double> deltas;
    for (int k = 1; k <= 6; ++k) deltas.push_back(std::ldexp(1.0, -k));
    auto sweep = discretized_kl_sweep(MarkLaw::gaussian(0, 1), MarkLaw::gaussian(1, 1), 8.0, deltas);
    bool monotone = true;
    std::string vals;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (i > 0 && sweep[i].kl < sweep[i - 1].kl - 1e-12) monotone = false;
        vals += (i ? " " : "") + fmt("%.5f", sweep[i].kl);
    }
    const double last = sweep.back().kl;
    return {monotone && std::abs(last - 0.5) <= 0.02, "values " + vals + (monotone ? ", monotone" : ", not monotone")};
}

// ---- 10. edge count ---------------------------------------------------------

Outcome crit_edge_count(const AcceptanceOptions&) {
    const long long n = 2000;
    const long long N = n * (n - 1) / 2;
    const long long k = (3 * n + 1) / 2;
    const double rate = -binomial_log_tail(N, 2.0 / static_cast<double>(n), k) / static_cast<double>(n);
    const double oracle = edge_count_rate(2.0, 3.0);
    const double rel = std::abs(rate - oracle) / oracle;
    return {rel <= 0.05, "-(1/n) ln P = " + fmt("%.5f", rate) + ", oracle " + fmt("%.5f", oracle) + ", rel err " +
                             fmt("%.3f", rel) + "; j_2(3) as displayed " + fmt("%.5f", j_d(2.0, 3.0))};
}

// ---- 11. freeness -----------------------------------------------------------

std::vector<TestGraph> bicolored_graphs(int max_v) {
    std::vector<TestGraph> out;
    for (int V = 1; V <= max_v; ++V) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < V; ++a)
            for (int b = a + 1; b < V; ++b) pairs.emplace_back(a, b);
        const int P = static_cast<int>(pairs.size());
        for (long mask = 0; mask < (1L << P); ++mask) {
            const int m = __builtin_popcountl(static_cast<unsigned long>(mask));
            if (m < V - 1 || m > V) continue;
            TestGraph base;
            base.vertices = V;
            base.root = 0;
            for (int i = 0; i < P; ++i)
                if (mask >> i & 1) base.edges.push_back({pairs[static_cast<std::size_t>(i)].first, pairs[static_cast<std::size_t>(i)].second, 0, false});
            if (!base.connected()) continue;
            for (int col = 0; col < (1 << m); ++col) {
                TestGraph H = base;
                for (int i = 0; i < m; ++i) H.edges[static_cast<std::size_t>(i)].label = col >> i & 1;
                out.push_back(H);
            }
        }
    }
    return out;
}

Outcome crit_freeness(const AcceptanceOptions& opt) {
    auto single_edge = [](Rng&, int) {
        MarkedGraph g(2);
        g.add_edge(0, 1, Mark(1.0));
        return RootedGraph{g, 0, 1};
    };
    Rng rng = make_rng(opt.seed, 11);
    RootedGraph prod = free_product_sample(single_edge, single_edge, 7, rng);
    Rng dummy = make_rng(opt.seed, 12);
    RootedGraph g1 = single_edge(dummy, 1), g2 = single_edge(dummy, 1);
    long total = 0, trees = 0, bad = 0, nonzero = 0;
    for (const auto& H : bicolored_graphs(6)) {
        auto r = traffic_freeness_check(prod, g1, g2, H, 1);
        ++total;
        if (r.gcc_tree) ++trees;
        if (!r.equal || (!r.gcc_tree && r.lhs != Complex(0))) ++bad;
        if (r.lhs != Complex(0)) ++nonzero;
    }
    return {bad == 0, std::to_string(total) + " test graphs (" + std::to_string(trees) + " with tree GCC, " +
                          std::to_string(nonzero) + " nonzero), mismatches " + std::to_string(bad)};
}

// ---- 12. thinning -----------------------------------------------------------

int thinning_key(const MarkedGraph& g, Vertex root) {
    double lead = 0;
    for (const auto& h : g.adj(root)) {
        double x = g.mark_out(root, h).value.at(0);
        if (std::abs(x) > std::abs(lead) || (std::abs(x) == std::abs(lead) && x > lead)) lead = x;
    }
    return g.degree(root) * 16 + static_cast<int>(std::lround(lead)) + 8;
}

Outcome crit_thinning(const AcceptanceOptions& opt) {
    const double eps = 1.5;
    const IntensityMeasure L = IntensityMeasure::finite(2.0, MarkLaw::point_masses({{-2, 0.25}, {-1, 0.25}, {1, 0.25}, {2, 0.25}}));
    const double d_eps = L.mass_above(eps);
    const MarkLaw gamma_eps = MarkLaw::point_masses({{-2, 0.5}, {2, 0.5}});
    const DegreeLaw pi = degree_poisson(d_eps);
    const int N = 10000;
    std::map<int, std::pair<double, double>> table;
    Rng r1 = make_rng(opt.seed, 121), r2 = make_rng(opt.seed, 122);
    for (int i = 0; i < N; ++i) {
        RootedGraph p = sample_pwit(L, 1, 0.5, r1);
        MarkedGraph t = epsilon_truncate(p.graph, eps);
        table[thinning_key(t, p.root)].first += 1;
        RootedGraph u = sample_ugw({gamma_eps}, pi, 1, r2);
        table[thinning_key(u.graph, u.root)].second += 1;
    }
    // Pool sparse cells so every expected count is at least 5.
    std::vector<std::pair<double, double>> cells;
    std::pair<double, double> pool{0, 0};
    for (const auto& [k, c] : table) {
        if (c.first + c.second < 10) {
            pool.first += c.first;
            pool.second += c.second;
        } else cells.push_back(c);
    }
    if (pool.first + pool.second > 0) cells.push_back(pool);
    double stat = 0;
    for (const auto& [a, b] : cells) {
        const double e = 0.5 * (a + b);
        stat += (a - e) * (a - e) / e + (b - e) * (b - e) / e;
    }
    const int df = static_cast<int>(cells.size()) - 1;
    const double pval = df > 0 ? boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat)) : 1.0;
    return {pval > 0.01, "chi2 " + fmt("%.2f", stat) + " on " + std::to_string(df) + " df, p = " + fmt("%.4f", pval) +
                             ", d_eps " + fmt("%.2f", d_eps)};
}

// ---- 13. rank inequality ----------------------------------------------------

Outcome crit_rank(const AcceptanceOptions& opt) {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::sparse_wigner;
    cfg.n = 300;
    cfg.d = 4;
    cfg.gamma = MarkLaw::gaussian(0, 1);
    cfg.seed = opt.seed;
    Rng rng = make_rng(opt.seed, 13);
    std::normal_distribution<double> N01;
    int violations = 0, raw_violations = 0;
    double worst_margin = -kInf;
    for (int t = 0; t < 100; ++t) {
        Eigen::MatrixXd A(sample_sparse_wigner(cfg, 1300 + static_cast<std::uint64_t>(t)));
        Eigen::MatrixXd B = A;
        const int r = uniform_int(rng, 1, 2);
        for (int j = 0; j < r; ++j) {
            Eigen::VectorXd u(300);
            for (int i = 0; i < 300; ++i) u(i) = N01(rng);
            B += N01(rng) * 3.0 * u * u.transpose() / 300.0;
        }
        RankCheck c = rank_inequality_check(A, B);
        if (!c.holds) ++violations;
        worst_margin = std::max(worst_margin, c.ks_tolerant - c.bound);
        raw_violations += c.ks > c.bound + 1e-12;
    }
    return {violations == 0, "100 perturbations, violations " + std::to_string(violations) + ", max KS - rank/n " +
                                 fmt("%.4f", worst_margin) +
                                 " (untolerant KS exceeds the bound " + std::to_string(raw_violations) + " times)"};
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    const auto& list = acceptance_criteria();
    auto it = std::find_if(list.begin(), list.end(), [&](const CriterionInfo& c) { return c.id == id; });
    if (it == list.end()) throw std::invalid_argument("unknown criterion " + std::to_string(id));
    CriterionResult r;
    r.id = id;
    r.name = it->suite;
    r.budget = it->budget;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        switch (id) {
            case 1: o = crit_mobius(opt); break;
            case 2: o = crit_trace(opt); break;
            case 3: o = crit_regular(opt); break;
            case 4: o = crit_er(opt); break;
            case 5: o = crit_levy(opt); break;
            case 6: o = crit_edge_rooting(opt); break;
            case 7: o = crit_entropy_minimizer(opt); break;
            case 8: o = crit_entropy_inequality(opt); break;
            case 9: o = crit_discretization(opt); break;
            case 10: o = crit_edge_count(opt); break;
            case 11: o = crit_freeness(opt); break;
            case 12: o = crit_thinning(opt); break;
            case 13: o = crit_rank(opt); break;
        }
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.detail = o.detail;
    r.pass = o.pass && r.seconds <= r.budget;
    if (o.pass && !r.pass) r.detail += "; over the time budget";
    return r;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << ". " << r.name << "  [" << fmt("%.1f", r.seconds) << " s / "
       << fmt("%.0f", r.budget) << " s]  " << r.detail;
    return os.str();
}

}  // namespace htrm
