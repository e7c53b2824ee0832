#pragma once

#include <map>
#include <vector>

#include "htrm/canonical.hpp"
#include "htrm/local_law.hpp"
#include "htrm/models.hpp"

namespace htrm {

// Finitely supported pmf on Z_+^B. The key is the marked degree vector (k_b)_b.
template <class W>
struct BasicDegreeLaw {
    int colors = 1;
    std::vector<int> color_conj;  // empty: every color is self-conjugate
    std::map<std::vector<int>, W> pmf;
    int cap = -1;  // truncation level when built from an infinite-support law

    int conj(int b) const { return color_conj.empty() ? b : color_conj[static_cast<std::size_t>(b)]; }
    W total() const {
        W s(0);
        for (const auto& [k, w] : pmf) s += w;
        return s;
    }
    std::vector<W> means() const {
        std::vector<W> d(static_cast<std::size_t>(colors), W(0));
        for (const auto& [k, w] : pmf)
            for (int b = 0; b < colors; ++b) d[static_cast<std::size_t>(b)] += W(k[static_cast<std::size_t>(b)]) * w;
        return d;
    }
    W mean_total() const {
        W s(0);
        for (const W& x : means()) s += x;
        return s;
    }
};

using DegreeLaw = BasicDegreeLaw<double>;
using ExactDegreeLaw = BasicDegreeLaw<Rational>;

DegreeLaw degree_dirac(int k);
DegreeLaw degree_from_pmf(const std::vector<double>& p);  // single color, p[k] = P(D = k)
// Poisson(lambda) cut where the upper tail drops below `tail`, renormalized.
DegreeLaw degree_poisson(double lambda, double tail = 1e-12);
// Independent Poisson coordinates, product truncation at the same tail level.
DegreeLaw degree_poisson_multi(const std::vector<double>& d, double tail = 1e-12);
ExactDegreeLaw to_exact(const DegreeLaw& pi);

// Checks weights, total mass and d(b) = d(b*); returns violations.
template <class W>
std::vector<std::string> check_degree_law(const BasicDegreeLaw<W>& pi);

template <class W>
BasicDegreeLaw<W> size_biased(const BasicDegreeLaw<W>& pi, int b);

class DegreeSampler {
public:
    explicit DegreeSampler(const DegreeLaw& pi);
    const std::vector<int>& sample(Rng& rng) const;

private:
    std::vector<std::vector<int>> keys_;
    std::vector<double> cumulative_;
};

struct UgwOptions {
    long max_vertices = 5000000;
};

// Depth-h truncation of UGW(gamma, pi); gamma[b] is the real mark law for color b
// (a single law is reused for every color).
RootedGraph sample_ugw(const std::vector<MarkLaw>& gamma, const DegreeLaw& pi, int h, Rng& rng,
                       const UgwOptions& opt = {});
RootedGraph sample_ugw(const MarkLaw& gamma, const DegreeLaw& pi, int h, std::uint64_t seed,
                       std::uint64_t stream = 0, const UgwOptions& opt = {});

struct IntensityMeasure {
    enum class Kind { finite, stable };
    Kind kind = Kind::finite;
    double lambda = 1.0;  // finite: total mass
    MarkLaw law = MarkLaw::dirac(1.0);
    double alpha = 1.0;   // stable: Lambda(|x| >= t) = scale * t^-alpha
    double scale = 1.0;
    double p = 0.5;       // stable: mass fraction on the positive half-line

    static IntensityMeasure finite(double lambda, MarkLaw law);
    static IntensityMeasure stable(double alpha, double p = 0.5, double scale = 1.0);

    // d_eps = Lambda(|x| >= eps)
    double mass_above(double eps) const;
    void check() const;
};

// Children of a vertex: one Poisson realization of Lambda restricted to |x| >= eps,
// sorted by decreasing norm.
std::vector<double> pwit_children(const IntensityMeasure& L, double eps, Rng& rng);

RootedGraph sample_pwit(const IntensityMeasure& L, int h, double eps, Rng& rng, const UgwOptions& opt = {});
RootedGraph sample_pwit(const IntensityMeasure& L, int h, double eps, std::uint64_t seed, std::uint64_t stream = 0,
                        const UgwOptions& opt = {});

double poisson_multivariate_pmf(const std::vector<double>& d, const std::vector<int>& k);

// Exact law of UGW(gamma, pi)_h for point-mass gamma and single color, restricted to
// trees with at most max_vertices vertices and renormalized.
struct TruncatedLaw {
    NeighborhoodLaw law;
    double dropped = 0;  // probability removed by the vertex cap
};
TruncatedLaw ugw_truncated_law(const MarkLaw& gamma, const DegreeLaw& pi, int h, int max_vertices,
                               const Quantizer& q = Quantizer());

}  // namespace htrm
