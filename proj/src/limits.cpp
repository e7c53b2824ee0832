#include "htrm/limits.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

namespace htrm {

DegreeLaw degree_dirac(int k) {
    if (k < 0) throw std::invalid_argument("degree_dirac: negative degree");
    DegreeLaw pi;
    pi.pmf[{k}] = 1.0;
    return pi;
}

DegreeLaw degree_from_pmf(const std::vector<double>& p) {
    DegreeLaw pi;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] > 0) pi.pmf[{static_cast<int>(k)}] = p[k];
    return pi;
}

namespace {

std::vector<double> poisson_pmf_cut(double lambda, double tail, int& cap) {
    if (lambda < 0) throw std::invalid_argument("poisson: negative mean");
    if (lambda == 0) {
        cap = 0;
        return {1.0};
    }
    std::vector<double> p;
    for (int k = 0;; ++k) {
        p.push_back(std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0)));
        if (k > lambda && p.back() < 1e-300) break;
        if (k > 100000) break;
    }
    std::vector<double> upper(p.size() + 1, 0.0);
    for (std::size_t k = p.size(); k-- > 0;) upper[k] = upper[k + 1] + p[k];
    cap = 0;
    while (static_cast<std::size_t>(cap + 1) < p.size() && upper[static_cast<std::size_t>(cap + 1)] >= tail) ++cap;
    p.resize(static_cast<std::size_t>(cap + 1));
    double s = 0;
    for (double x : p) s += x;
    for (double& x : p) x /= s;
    return p;
}

}  // namespace

DegreeLaw degree_poisson(double lambda, double tail) {
    int cap = 0;
    DegreeLaw pi = degree_from_pmf(poisson_pmf_cut(lambda, tail, cap));
    pi.cap = cap;
    return pi;
}

DegreeLaw degree_poisson_multi(const std::vector<double>& d, double tail) {
    if (d.empty()) throw std::invalid_argument("degree_poisson_multi: no colors");
    DegreeLaw pi;
    pi.colors = static_cast<int>(d.size());
    pi.pmf[std::vector<int>(d.size(), 0)] = 1.0;
    for (std::size_t b = 0; b < d.size(); ++b) {
        int cap = 0;
        auto p = poisson_pmf_cut(d[b], tail / static_cast<double>(d.size()), cap);
        pi.cap = std::max(pi.cap, cap);
        std::map<std::vector<int>, double> next;
        for (const auto& [k, w] : pi.pmf)
            for (std::size_t j = 0; j < p.size(); ++j) {
                auto kk = k;
                kk[b] = static_cast<int>(j);
                next[kk] += w * p[j];
            }
        pi.pmf = std::move(next);
    }
    return pi;
}

ExactDegreeLaw to_exact(const DegreeLaw& pi) {
    ExactDegreeLaw out;
    out.colors = pi.colors;
    out.color_conj = pi.color_conj;
    out.cap = pi.cap;
    for (const auto& [k, w] : pi.pmf) out.pmf[k] = Rational(w);
    return out;
}

template <class W>
std::vector<std::string> check_degree_law(const BasicDegreeLaw<W>& pi) {
    std::vector<std::string> out;
    for (const auto& [k, w] : pi.pmf) {
        if (static_cast<int>(k.size()) != pi.colors) out.push_back("degree vector of wrong length");
        if (w < W(0)) out.push_back("negative weight");
        for (int x : k)
            if (x < 0) out.push_back("negative degree");
    }
    if (std::abs(to_double(pi.total()) - 1.0) > 1e-12) out.push_back("weights do not sum to 1");
    auto d = pi.means();
    for (int b = 0; b < pi.colors; ++b)
        if (std::abs(to_double(d[static_cast<std::size_t>(b)]) - to_double(d[static_cast<std::size_t>(pi.conj(b))])) > 1e-12)
            out.push_back("d(b) != d(b*) for color " + std::to_string(b));
    return out;
}

template <class W>
BasicDegreeLaw<W> size_biased(const BasicDegreeLaw<W>& pi, int b) {
    if (b < 0 || b >= pi.colors) throw std::invalid_argument("size_biased: color out of range");
    W db = pi.means()[static_cast<std::size_t>(b)];
    if (!(db > W(0))) throw std::invalid_argument("size_biased: d(b) = 0");
    const int bs = pi.conj(b);
    BasicDegreeLaw<W> out;
    out.colors = pi.colors;
    out.color_conj = pi.color_conj;
    out.cap = pi.cap;
    for (const auto& [key, w] : pi.pmf) {
        int m = key[static_cast<std::size_t>(bs)];
        if (m == 0) continue;
        auto k = key;
        --k[static_cast<std::size_t>(bs)];
        out.pmf[k] += W(m) * w / db;
    }
    return out;
}

template std::vector<std::string> check_degree_law(const BasicDegreeLaw<double>&);
template std::vector<std::string> check_degree_law(const BasicDegreeLaw<Rational>&);
template BasicDegreeLaw<double> size_biased(const BasicDegreeLaw<double>&, int);
template BasicDegreeLaw<Rational> size_biased(const BasicDegreeLaw<Rational>&, int);

DegreeSampler::DegreeSampler(const DegreeLaw& pi) {
    double acc = 0;
    for (const auto& [k, w] : pi.pmf) {
        if (w <= 0) continue;
        keys_.push_back(k);
        cumulative_.push_back(acc += w);
    }
    if (keys_.empty()) throw std::invalid_argument("DegreeSampler: empty law");
    for (double& c : cumulative_) c /= acc;
}

const std::vector<int>& DegreeSampler::sample(Rng& rng) const {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t i = std::min(static_cast<std::size_t>(it - cumulative_.begin()), keys_.size() - 1);
    return keys_[i];
}

RootedGraph sample_ugw(const std::vector<MarkLaw>& gamma, const DegreeLaw& pi, int h, Rng& rng, const UgwOptions& opt) {
    if (h < 0) throw std::invalid_argument("sample_ugw: negative depth");
    if (gamma.empty()) throw std::invalid_argument("sample_ugw: no mark law");
    const DegreeSampler root_sampler(pi);
    std::vector<std::optional<DegreeSampler>> child_sampler(static_cast<std::size_t>(pi.colors));
    auto d = pi.means();
    for (int b = 0; b < pi.colors; ++b)
        if (d[static_cast<std::size_t>(b)] > 0) child_sampler[static_cast<std::size_t>(b)].emplace(size_biased(pi, b));
    auto law_of = [&](int b) -> const MarkLaw& { return gamma[std::min<std::size_t>(static_cast<std::size_t>(b), gamma.size() - 1)]; };

    MarkedGraph g(1, MarkSpace{Involution::identity(1), pi.color_conj});
    struct Item {
        Vertex v;
        int depth, color;
    };
    std::deque<Item> queue{{0, 0, -1}};
    while (!queue.empty()) {
        Item it = queue.front();
        queue.pop_front();
        if (it.depth >= h) continue;
        const auto& k = it.color < 0 ? root_sampler.sample(rng) : child_sampler[static_cast<std::size_t>(it.color)]->sample(rng);
        for (int b = 0; b < pi.colors; ++b)
            for (int j = 0; j < k[static_cast<std::size_t>(b)]; ++j) {
                if (g.n() >= opt.max_vertices) throw SizeCapError("sample_ugw: population cap exceeded");
                Vertex c = g.add_vertex();
                g.add_edge(it.v, c, Mark(b, {law_of(b).sample(rng)}));
                queue.push_back({c, it.depth + 1, b});
            }
    }
    return {std::move(g), 0, h};
}

RootedGraph sample_ugw(const MarkLaw& gamma, const DegreeLaw& pi, int h, std::uint64_t seed, std::uint64_t stream,
                       const UgwOptions& opt) {
    Rng rng = make_rng(seed, stream);
    return sample_ugw(std::vector<MarkLaw>{gamma}, pi, h, rng, opt);
}

IntensityMeasure IntensityMeasure::finite(double lambda, MarkLaw law) {
    IntensityMeasure L;
    L.kind = Kind::finite;
    L.lambda = lambda;
    L.law = std::move(law);
    L.check();
    return L;
}

IntensityMeasure IntensityMeasure::stable(double alpha, double p, double scale) {
    IntensityMeasure L;
    L.kind = Kind::stable;
    L.alpha = alpha;
    L.p = p;
    L.scale = scale;
    L.check();
    return L;
}

void IntensityMeasure::check() const {
    if (kind == Kind::finite) {
        if (!(lambda >= 0) || !std::isfinite(lambda)) throw std::invalid_argument("intensity: total mass must be finite");
    } else {
        if (!(alpha > 0 && alpha < 2)) throw std::invalid_argument("intensity: alpha must lie in (0,2)");
        if (!(scale > 0) || !(p >= 0 && p <= 1)) throw std::invalid_argument("intensity: bad scale or sign weight");
    }
}

double IntensityMeasure::mass_above(double eps) const {
    if (kind == Kind::stable) {
        if (!(eps > 0)) return std::numeric_limits<double>::infinity();
        return scale * std::pow(eps, -alpha);
    }
    if (law.discrete()) {
        double s = 0;
        for (const auto& [x, w] : law.atoms())
            if (std::abs(x) >= eps) s += w;
        return lambda * s;
    }
    return lambda * (1 - law.cdf(eps) + law.cdf(-eps));
}

std::vector<double> pwit_children(const IntensityMeasure& L, double eps, Rng& rng) {
    std::vector<double> out;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (L.kind == IntensityMeasure::Kind::finite) {
        int count = std::poisson_distribution<int>(L.lambda)(rng);
        for (int i = 0; i < count; ++i) {
            double x = L.law.sample(rng);
            if (std::abs(x) >= eps) out.push_back(x);
        }
        std::stable_sort(out.begin(), out.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
        return out;
    }
    if (!(eps > 0)) throw std::invalid_argument("pwit: stable intensity needs eps > 0");
    std::exponential_distribution<double> ex(1.0);
    const double stop = L.scale * std::pow(eps, -L.alpha);
    for (double g = ex(rng); g <= stop; g += ex(rng)) {
        double mag = std::pow(g / L.scale, -1.0 / L.alpha);
        out.push_back(u01(rng) < L.p ? mag : -mag);
    }
    return out;
}

RootedGraph sample_pwit(const IntensityMeasure& L, int h, double eps, Rng& rng, const UgwOptions& opt) {
    if (h < 0) throw std::invalid_argument("sample_pwit: negative depth");
    MarkedGraph g(1);
    std::deque<std::pair<Vertex, int>> queue{{0, 0}};
    while (!queue.empty()) {
        auto [v, depth] = queue.front();
        queue.pop_front();
        if (depth >= h) continue;
        for (double x : pwit_children(L, eps, rng)) {
            if (g.n() >= opt.max_vertices) throw SizeCapError("sample_pwit: population cap exceeded");
            Vertex c = g.add_vertex();
            g.add_edge(v, c, Mark(x));
            queue.emplace_back(c, depth + 1);
        }
    }
    return {std::move(g), 0, h};
}

RootedGraph sample_pwit(const IntensityMeasure& L, int h, double eps, std::uint64_t seed, std::uint64_t stream,
                        const UgwOptions& opt) {
    Rng rng = make_rng(seed, stream);
    return sample_pwit(L, h, eps, rng, opt);
}

double poisson_multivariate_pmf(const std::vector<double>& d, const std::vector<int>& k) {
    if (d.size() != k.size()) throw std::invalid_argument("poisson_multivariate_pmf: length mismatch");
    double logp = 0;
    for (std::size_t b = 0; b < d.size(); ++b) {
        if (d[b] < 0 || k[b] < 0) throw std::invalid_argument("poisson_multivariate_pmf: negative entry");
        if (d[b] == 0) {
            if (k[b] > 0) return 0.0;
            continue;
        }
        logp += -d[b] + k[b] * std::log(d[b]) - std::lgamma(k[b] + 1.0);
    }
    return std::exp(logp);
}

namespace {

struct SubTree {
    MarkedGraph g;  // rooted at 0
    int size;
    double prob;
};

void attach(MarkedGraph& g, Vertex at, const MarkedGraph& sub, double x) {
    const Vertex off = g.n();
    for (int i = 0; i < sub.n(); ++i) g.add_vertex();
    for (const auto& e : sub.edges()) g.add_edge_raw(e.u + off, e.v + off, e.fwd, e.bwd);
    g.add_edge(at, off, Mark(x));
}

// All depth-r subtrees whose root has offspring law rho, children typed by `kids`.
std::vector<SubTree> expand(const std::map<std::vector<int>, double>& rho, const std::vector<SubTree>& kids,
                            const std::vector<std::pair<double, double>>& marks, int budget) {
    struct Kid {
        const SubTree* t;
        double x, p;
    };
    std::vector<Kid> types;
    for (const auto& t : kids)
        for (const auto& [x, w] : marks)
            if (w > 0) types.push_back({&t, x, t.prob * w});
    std::vector<SubTree> out;
    for (const auto& [key, pj] : rho) {
        const int j = key[0];
        if (pj <= 0 || 1 + j > budget) continue;
        std::vector<int> count(types.size(), 0);
        std::function<void(std::size_t, int, int, double)> rec = [&](std::size_t t, int left, int size, double logw) {
            if (left == 0) {
                MarkedGraph g(1);
                for (std::size_t i = 0; i < types.size(); ++i)
                    for (int c = 0; c < count[i]; ++c) attach(g, 0, types[i].t->g, types[i].x);
                out.push_back({std::move(g), size, pj * std::exp(std::lgamma(j + 1.0) + logw)});
                return;
            }
            if (t == types.size()) return;
            const int s = types[t].t->size;
            for (int c = 0; c <= left && size + c * s <= budget; ++c) {
                count[t] = c;
                rec(t + 1, left - c, size + c * s, logw + c * std::log(types[t].p) - std::lgamma(c + 1.0));
            }
            count[t] = 0;
        };
        rec(0, j, 1, 0.0);
    }
    return out;
}

}  // namespace

TruncatedLaw ugw_truncated_law(const MarkLaw& gamma, const DegreeLaw& pi, int h, int max_vertices, const Quantizer& q) {
    if (!gamma.discrete()) throw std::invalid_argument("ugw_truncated_law: mark law must be point masses");
    if (pi.colors != 1) throw std::invalid_argument("ugw_truncated_law: single color only");
    if (h < 0 || max_vertices < 1) throw std::invalid_argument("ugw_truncated_law: bad depth or cap");
    std::vector<SubTree> level{{MarkedGraph(1), 1, 1.0}};
    if (h > 0) {
        std::map<std::vector<int>, double> hat;
        if (pi.mean_total() > 0) hat = size_biased(pi, 0).pmf;
        for (int r = 1; r < h; ++r) level = expand(hat, level, gamma.atoms(), max_vertices - 1);
        level = expand(pi.pmf, level, gamma.atoms(), max_vertices);
    }
    TruncatedLaw out;
    out.law.depth = h;
    out.law.quantizer = q;
    double total = 0;
    for (const auto& t : level) total += t.prob;
    for (const auto& t : level) out.law.add(canonical_form(t.g, 0, h, q), t.prob / total);
    out.dropped = 1 - total;
    return out;
}

}  // namespace htrm
