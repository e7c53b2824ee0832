#include "htrm/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace htrm {

MarkLaw MarkLaw::point_masses(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("point_masses: empty support");
    double total = 0;
    for (const auto& [x, w] : atoms) {
        if (!std::isfinite(x) || !(w >= 0)) throw std::invalid_argument("point_masses: bad atom");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("point_masses: weights must sum to 1");
    std::sort(atoms.begin(), atoms.end());
    MarkLaw m;
    m.kind_ = Kind::point_masses;
    m.atoms_ = std::move(atoms);
    double acc = 0;
    for (const auto& a : m.atoms_) m.cumulative_.push_back(acc += a.second / total);
    return m;
}

MarkLaw MarkLaw::gaussian(double mean, double sd) {
    if (!std::isfinite(mean) || !(sd > 0)) throw std::invalid_argument("gaussian: need sd > 0");
    MarkLaw m;
    m.kind_ = Kind::gaussian;
    m.params_ = {mean, sd};
    return m;
}

MarkLaw MarkLaw::uniform(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("uniform: need a < b");
    MarkLaw m;
    m.kind_ = Kind::uniform;
    m.params_ = {a, b};
    return m;
}

MarkLaw MarkLaw::pareto(double alpha, double t0, double p) {
    if (!(alpha > 0) || !(t0 > 0) || !(p >= 0 && p <= 1)) throw std::invalid_argument("pareto: bad parameters");
    MarkLaw m;
    m.kind_ = Kind::pareto;
    m.params_ = {alpha, t0, p};
    return m;
}

double MarkLaw::sample(Rng& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    switch (kind_) {
        case Kind::point_masses: {
            double u = u01(rng);
            auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
            return atoms_[i].first;
        }
        case Kind::gaussian:
            return std::normal_distribution<double>(params_[0], params_[1])(rng);
        case Kind::uniform:
            return std::uniform_real_distribution<double>(params_[0], params_[1])(rng);
        case Kind::pareto: {
            double mag = params_[1] * std::pow(1.0 - u01(rng), -1.0 / params_[0]);
            return u01(rng) < params_[2] ? mag : -mag;
        }
    }
    return 0;
}

double MarkLaw::cdf(double x) const {
    switch (kind_) {
        case Kind::point_masses: {
            double s = 0;
            for (std::size_t i = 0; i < atoms_.size() && atoms_[i].first <= x; ++i) s = cumulative_[i];
            return s;
        }
        case Kind::gaussian:
            return 0.5 * std::erfc(-(x - params_[0]) / (params_[1] * std::sqrt(2.0)));
        case Kind::uniform:
            return std::clamp((x - params_[0]) / (params_[1] - params_[0]), 0.0, 1.0);
        case Kind::pareto: {
            const double a = params_[0], t0 = params_[1], p = params_[2], q = 1 - p;
            if (x <= -t0) return q * std::pow(-x / t0, -a);
            if (x < t0) return q;
            return q + p * (1 - std::pow(x / t0, -a));
        }
    }
    return 0;
}

double MarkLaw::mean() const {
    switch (kind_) {
        case Kind::point_masses: {
            double s = 0;
            for (const auto& [x, w] : atoms_) s += x * w;
            return s;
        }
        case Kind::gaussian:
            return params_[0];
        case Kind::uniform:
            return 0.5 * (params_[0] + params_[1]);
        case Kind::pareto:
            if (params_[0] <= 1) return std::numeric_limits<double>::quiet_NaN();
            return (2 * params_[2] - 1) * params_[1] * params_[0] / (params_[0] - 1);
    }
    return 0;
}

std::string MarkLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::point_masses:
            os << "point_masses(";
            for (std::size_t i = 0; i < atoms_.size(); ++i)
                os << (i ? "," : "") << atoms_[i].first << ":" << atoms_[i].second;
            os << ")";
            break;
        case Kind::gaussian:
            os << "gaussian(" << params_[0] << "," << params_[1] << ")";
            break;
        case Kind::uniform:
            os << "uniform(" << params_[0] << "," << params_[1] << ")";
            break;
        case Kind::pareto:
            os << "pareto(" << params_[0] << "," << params_[1] << "," << params_[2] << ")";
            break;
    }
    return os.str();
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
    if (s == "sparse_wigner") return EnsembleKind::sparse_wigner;
    if (s == "config_model") return EnsembleKind::config_model;
    if (s == "levy") return EnsembleKind::levy;
    if (s == "general_gamma_n") return EnsembleKind::general_gamma_n;
    if (s == "er_marked") return EnsembleKind::er_marked;
    if (s == "given_edge_counts") return EnsembleKind::given_edge_counts;
    throw std::invalid_argument("unknown ensemble kind: " + s);
}

std::string to_string(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::sparse_wigner: return "sparse_wigner";
        case EnsembleKind::config_model: return "config_model";
        case EnsembleKind::levy: return "levy";
        case EnsembleKind::general_gamma_n: return "general_gamma_n";
        case EnsembleKind::er_marked: return "er_marked";
        case EnsembleKind::given_edge_counts: return "given_edge_counts";
    }
    return "?";
}

bool erdos_gallai(std::vector<int> degrees) {
    long long sum = 0;
    for (int x : degrees) {
        if (x < 0) return false;
        sum += x;
    }
    if (sum % 2) return false;
    std::sort(degrees.rbegin(), degrees.rend());
    const long long n = static_cast<long long>(degrees.size());
    std::vector<long long> prefix(degrees.size() + 1, 0);
    for (std::size_t i = 0; i < degrees.size(); ++i) prefix[i + 1] = prefix[i] + degrees[i];
    // Tail sums of min(d_i, k) via a pointer over the sorted sequence.
    for (long long k = 1; k <= n; ++k) {
        long long lhs = prefix[static_cast<std::size_t>(k)];
        long long rhs = k * (k - 1);
        for (long long i = k; i < n; ++i) rhs += std::min<long long>(degrees[static_cast<std::size_t>(i)], k);
        if (lhs > rhs) return false;
    }
    return true;
}

void EnsembleConfig::check() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    switch (kind) {
        case EnsembleKind::sparse_wigner:
        case EnsembleKind::er_marked:
        case EnsembleKind::general_gamma_n:
            if (!(d >= 0) || !std::isfinite(d)) throw std::invalid_argument("d must be finite and >= 0");
            break;
        case EnsembleKind::config_model: {
            if (static_cast<int>(degrees.size()) != n) throw std::invalid_argument("degree sequence length must equal n");
            long long s = std::accumulate(degrees.begin(), degrees.end(), 0LL);
            if (s % 2) throw std::invalid_argument("degree sum must be even");
            if (!erdos_gallai(degrees)) throw std::invalid_argument("degree sequence is not graphical (Erdos-Gallai)");
            break;
        }
        case EnsembleKind::levy:
            if (!(alpha > 0 && alpha < 2)) throw std::invalid_argument("alpha must lie in (0,2)");
            if (!(c > 0)) throw std::invalid_argument("c must be > 0");
            if (!(p >= 0 && q >= 0) || std::abs(p + q - 1) > 1e-12) throw std::invalid_argument("p + q must equal 1");
            break;
        case EnsembleKind::given_edge_counts: {
            long long total = 0;
            for (long long m : edge_counts) {
                if (m < 0 || m % 2) throw std::invalid_argument("oriented edge counts must be even and >= 0");
                total += m / 2;
            }
            if (total > static_cast<long long>(n) * (n - 1) / 2) throw std::invalid_argument("too many edges for n");
            if (!color_gamma.empty() && color_gamma.size() != edge_counts.size())
                throw std::invalid_argument("one mark law per color required");
            break;
        }
    }
}

namespace {

struct Triplets {
    std::vector<Eigen::Triplet<double>> t;
    void add(int i, int j, double x) {
        if (x == 0) return;
        t.emplace_back(i, j, x);
        t.emplace_back(j, i, x);
    }
    SparseSym build(int n) {
        SparseSym m(n, n);
        m.setFromTriplets(t.begin(), t.end());
        return m;
    }
};

// Visits every pair i < j independently with probability p, by geometric skips
// over the row-major enumeration of the upper triangle.
template <class F>
void bernoulli_pairs(int n, double p, Rng& rng, F visit) {
    if (p <= 0 || n < 2) return;
    if (p >= 1) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) visit(i, j);
        return;
    }
    std::geometric_distribution<long long> skip(p);
    int i = 0;
    long long j = 0;  // next candidate column is i + 1 + j
    for (;;) {
        j += skip(rng);
        while (i < n - 1 && j >= n - 1 - i) {
            j -= n - 1 - i;
            ++i;
        }
        if (i >= n - 1) return;
        visit(i, static_cast<int>(i + 1 + j));
        ++j;
    }
}

}  // namespace

SparseSym sample_sparse_wigner(const EnsembleConfig& cfg, std::uint64_t stream) {
    cfg.check();
    Rng rng = make_rng(cfg.seed, stream);
    Triplets t;
    bernoulli_pairs(cfg.n, std::min(cfg.d / cfg.n, 1.0), rng, [&](int i, int j) { t.add(i, j, cfg.gamma.sample(rng)); });
    return t.build(cfg.n);
}

SparseSym sample_general_gamma_n(const EnsembleConfig& cfg, std::uint64_t stream) {
    EnsembleConfig c = cfg;
    c.kind = EnsembleKind::sparse_wigner;
    return sample_sparse_wigner(c, stream);
}

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

bool try_pairing(const std::vector<int>& degrees, Rng& rng, EdgeList& out) {
    std::vector<int> stubs;
    for (std::size_t v = 0; v < degrees.size(); ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[v]), static_cast<int>(v));
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> seen;
    out.clear();
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        int a = std::min(stubs[k], stubs[k + 1]), b = std::max(stubs[k], stubs[k + 1]);
        if (a == b || !seen.insert({a, b}).second) return false;
        out.emplace_back(a, b);
    }
    return true;
}

EdgeList havel_hakimi(const std::vector<int>& degrees) {
    std::vector<std::pair<int, int>> rest;
    for (std::size_t v = 0; v < degrees.size(); ++v) rest.emplace_back(degrees[v], static_cast<int>(v));
    EdgeList edges;
    for (;;) {
        std::sort(rest.rbegin(), rest.rend());
        if (rest.empty() || rest[0].first == 0) break;
        auto [k, v] = rest[0];
        rest[0].first = 0;
        if (k > static_cast<int>(rest.size()) - 1) throw std::invalid_argument("degree sequence is not graphical");
        for (int i = 1; i <= k; ++i) {
            if (rest[static_cast<std::size_t>(i)].first == 0) throw std::invalid_argument("degree sequence is not graphical");
            --rest[static_cast<std::size_t>(i)].first;
            int w = rest[static_cast<std::size_t>(i)].second;
            edges.emplace_back(std::min(v, w), std::max(v, w));
        }
    }
    return edges;
}

// Degree-preserving double edge swaps.
void switch_chain(EdgeList& edges, long steps, Rng& rng) {
    if (edges.size() < 2) return;
    std::set<std::pair<int, int>> present(edges.begin(), edges.end());
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution coin(0.5);
    for (long s = 0; s < steps; ++s) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (coin(rng)) std::swap(c, d);
        if (a == d || c == b) continue;
        std::pair<int, int> e1{std::min(a, d), std::max(a, d)}, e2{std::min(c, b), std::max(c, b)};
        if (e1 == e2 || present.count(e1) || present.count(e2)) continue;
        present.erase(edges[i]);
        present.erase(edges[j]);
        edges[i] = e1;
        edges[j] = e2;
        present.insert(e1);
        present.insert(e2);
    }
}

}  // namespace

SparseSym sample_configuration_model(const EnsembleConfig& cfg, std::uint64_t stream, SamplerInfo* info) {
    cfg.check();
    Rng rng = make_rng(cfg.seed, stream);
    EdgeList edges;
    long attempts = 0;
    bool ok = false;
    while (attempts < cfg.rejection_budget && !ok) {
        ++attempts;
        ok = try_pairing(cfg.degrees, rng, edges);
    }
    if (info) {
        info->attempts = attempts;
        info->method = ok ? "rejection" : "switch-mcmc";
    }
    if (!ok) {
        edges = havel_hakimi(cfg.degrees);
        switch_chain(edges, 100 * static_cast<long>(edges.size()) + 1000, rng);
    }
    Triplets t;
    for (auto [a, b] : edges) t.add(a, b, cfg.gamma.sample(rng));
    return t.build(cfg.n);
}

double levy_entry_tail(double alpha, double c, double t) {
    const double tc = std::max(1.0, std::pow(c, 1.0 / alpha));
    if (t <= 0) return 1.0;
    if (t >= tc) return c * std::pow(t, -alpha);
    if (c > 1) return 1.0;
    return c + (1 - c) * (1 - t);
}

SparseSym sample_levy(const EnsembleConfig& cfg, std::uint64_t stream) {
    cfg.check();
    Rng rng = make_rng(cfg.seed, stream);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double tc = std::max(1.0, std::pow(cfg.c, 1.0 / cfg.alpha));
    const double tail_mass = std::min(cfg.c, 1.0);
    const double scale = std::pow(cfg.c * cfg.n, -1.0 / cfg.alpha);
    Triplets t;
    for (int i = 0; i < cfg.n; ++i)
        for (int j = i + 1; j < cfg.n; ++j) {
            double mag = u01(rng) < tail_mass ? tc * std::pow(1.0 - u01(rng), -1.0 / cfg.alpha) : u01(rng);
            double x = u01(rng) < cfg.p ? mag : -mag;
            t.add(i, j, x * scale);
        }
    return t.build(cfg.n);
}

MarkedGraph sample_er_marked(const EnsembleConfig& cfg, std::uint64_t stream) {
    cfg.check();
    Rng rng = make_rng(cfg.seed, stream);
    MarkedGraph g(cfg.n);
    bernoulli_pairs(cfg.n, std::min(cfg.d / cfg.n, 1.0), rng, [&](int i, int j) { g.add_edge(i, j, Mark(cfg.gamma.sample(rng))); });
    return g;
}

MarkedGraph sample_given_edge_counts(const EnsembleConfig& cfg, std::uint64_t stream) {
    cfg.check();
    Rng rng = make_rng(cfg.seed, stream);
    const long long n = cfg.n;
    const long long pairs = n * (n - 1) / 2;
    long long total = 0;
    for (long long m : cfg.edge_counts) total += m / 2;
    // Floyd's algorithm: a uniform total-subset of the pairs.
    std::unordered_set<long long> chosen;
    std::vector<long long> order;
    for (long long j = pairs - total; j < pairs; ++j) {
        long long r = std::uniform_int_distribution<long long>(0, j)(rng);
        long long pick = chosen.count(r) ? j : r;
        chosen.insert(pick);
        order.push_back(pick);
    }
    std::sort(order.begin(), order.end());
    std::shuffle(order.begin(), order.end(), rng);
    MarkedGraph g(cfg.n);
    std::size_t k = 0;
    for (std::size_t b = 0; b < cfg.edge_counts.size(); ++b) {
        const MarkLaw& law = cfg.color_gamma.empty() ? cfg.gamma : cfg.color_gamma[b];
        for (long long e = 0; e < cfg.edge_counts[b] / 2; ++e, ++k) {
            long long idx = order[k];
            // Row-major upper triangle index -> (i, j).
            long long i = 0, rem = idx;
            while (rem >= n - 1 - i) {
                rem -= n - 1 - i;
                ++i;
            }
            g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(i + 1 + rem), Mark(static_cast<int>(b), {law.sample(rng)}));
        }
    }
    return g;
}

SparseSym sample_matrix(const EnsembleConfig& cfg, std::uint64_t stream) {
    switch (cfg.kind) {
        case EnsembleKind::sparse_wigner: return sample_sparse_wigner(cfg, stream);
        case EnsembleKind::config_model: return sample_configuration_model(cfg, stream);
        case EnsembleKind::levy: return sample_levy(cfg, stream);
        case EnsembleKind::general_gamma_n: return sample_general_gamma_n(cfg, stream);
        case EnsembleKind::er_marked: return to_sparse_operator(sample_er_marked(cfg, stream));
        case EnsembleKind::given_edge_counts: return to_sparse_operator(sample_given_edge_counts(cfg, stream));
    }
    throw std::invalid_argument("sample_matrix: unknown kind");
}

bool bn_theta_membership(const SparseSym& Y, double theta) {
    std::vector<int> rows(static_cast<std::size_t>(Y.rows()), 0), cols(static_cast<std::size_t>(Y.cols()), 0);
    for (int k = 0; k < Y.outerSize(); ++k)
        for (SparseSym::InnerIterator it(Y, k); it; ++it) {
            if (it.value() == 0) continue;
            if (std::abs(it.value()) > theta) return false;
            ++rows[static_cast<std::size_t>(it.row())];
            ++cols[static_cast<std::size_t>(it.col())];
        }
    for (int r : rows)
        if (r > theta) return false;
    for (int c : cols)
        if (c > theta) return false;
    return true;
}

bool bn_theta_membership(const Eigen::MatrixXd& Y, double theta) {
    return bn_theta_membership(SparseSym(Y.sparseView()), theta);
}

}  // namespace htrm
