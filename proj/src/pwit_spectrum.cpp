#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "htrm/spectral.hpp"

namespace htrm {

namespace {

// Tree stored by parent pointers; weight[v] is |xi(parent(v), v)|, zero once the edge is cut.
struct ParentTree {
    std::vector<int> parent;
    std::vector<double> weight;
    std::vector<unsigned char> depth;

    int add(int p, double w, int d) {
        parent.push_back(p);
        weight.push_back(w);
        depth.push_back(static_cast<unsigned char>(d));
        return static_cast<int>(parent.size()) - 1;
    }
};

// Uniforms on (0,1) with 32-bit resolution, two per engine call. Marks only lose resolution
// above |x| = 10^4 or so, far past any energy cutoff in use.
class Uniforms {
public:
    explicit Uniforms(Rng& rng) : rng_(rng) {}
    double operator()() {
        if (!have_) {
            buf_ = rng_();
            have_ = true;
            return (static_cast<double>(buf_ >> 32) + 0.5) * 0x1.0p-32;
        }
        have_ = false;
        return (static_cast<double>(buf_ & 0xffffffffu) + 0.5) * 0x1.0p-32;
    }

private:
    Rng& rng_;
    std::uint64_t buf_ = 0;
    bool have_ = false;
};

// Poisson sampling by inversion of a tabulated CDF.
class PoissonTable {
public:
    explicit PoissonTable(double mean) {
        double p = std::exp(-mean), c = 0;
        for (int k = 0; c < 1 - 1e-17 && k < 100000; ++k) {
            c += p;
            cdf_.push_back(c);
            p *= mean / (k + 1);
        }
    }
    int operator()(Uniforms& u) const {
        const double x = u();
        int k = 0;
        while (k + 1 < static_cast<int>(cdf_.size()) && x > cdf_[static_cast<std::size_t>(k)]) ++k;
        return k;
    }
    // Counts above this have probability below 1e-100.
    static int negligible_above(double mean) { return static_cast<int>(std::ceil(mean + 30 * std::sqrt(mean) + 250)); }

private:
    std::vector<double> cdf_;
};

class StablePoints {
public:
    StablePoints(const IntensityMeasure& L, double eps, double theta)
        : inv_alpha_(1.0 / L.alpha), scale_(L.scale),
          big_stop_(L.scale * std::pow(theta, -L.alpha)),
          small_lo_(big_stop_), small_hi_(L.scale * std::pow(eps, -L.alpha)),
          big_count_(big_stop_), small_count_(small_hi_ - small_lo_),
          small_reach_(PoissonTable::negligible_above(small_hi_ - small_lo_)) {}

    // Magnitudes above theta, unordered: given their number, the points are iid uniform in g.
    void big(Uniforms& u, std::vector<double>& out) const {
        out.clear();
        const int k = big_count_(u);
        for (int i = 0; i < k; ++i) out.push_back(mag(big_stop_ * u()));
    }
    int small_count(Uniforms& u) const { return small_count_(u); }
    int small_reach() const { return small_reach_; }
    // One point of the process conditioned on eps <= |x| <= theta.
    double small(Uniforms& u) const { return mag(small_lo_ + (small_hi_ - small_lo_) * u()); }

private:
    double mag(double g) const { return std::exp(-inv_alpha_ * std::log(g / scale_)); }

    double inv_alpha_, scale_, big_stop_, small_lo_, small_hi_;
    PoissonTable big_count_, small_count_;
    int small_reach_;
};

// One depth-h PWIT sample with marks |xi| >= eps, theta-truncated. Marks in [eps, theta]
// only enter the energy sums, so they are drawn lazily when the energy is near the cap.
ParentTree sample_truncated(const StablePoints& pts, int h, double theta, long max_vertices, Rng& rng, long& removed) {
    const double cap = 1.0 / (theta * theta);
    const double t2 = theta * theta;
    ParentTree t;
    t.add(-1, 0.0, 0);
    std::vector<double> kids;
    Uniforms u(rng);
    for (std::size_t i = 0; i < t.parent.size(); ++i) {
        const int v = static_cast<int>(i);
        const int d = t.depth[i];
        const double up = t.weight[i];
        if (d == h) continue;  // merged leaves were checked one by one below
        pts.big(u, kids);
        double energy = up * up;
        for (double x : kids) energy += x * x;
        if (energy < cap && cap - energy <= t2 * pts.small_reach()) {
            const int ns = pts.small_count(u);
            if (energy + ns * t2 >= cap)
                for (int k = 0; k < ns && energy < cap; ++k) {
                    double x = pts.small(u);
                    energy += x * x;
                }
        }
        if (energy >= cap) {
            t.weight[i] = 0;
            ++removed;
            continue;
        }
        if (d + 1 == h) {
            // Leaves hanging from v act on the root measure as one leaf of weight sqrt(sum w^2).
            double s = 0;
            for (double x : kids)
                if (x * x < cap) s += x * x;
                else ++removed;
            if (s > 0) t.add(v, std::sqrt(s), h);
            continue;
        }
        for (double x : kids) {
            if (static_cast<long>(t.parent.size()) >= max_vertices)
                throw SizeCapError("pwit_stable_spectrum: population cap exceeded");
            t.add(v, x, d + 1);
        }
    }
    // Cut vertices never received children; drop them so they stay out of the matvec.
    std::vector<int> idx(t.parent.size(), -1);
    ParentTree c;
    for (std::size_t i = 0; i < t.parent.size(); ++i) {
        if (i > 0 && t.weight[i] == 0) continue;
        idx[i] = c.add(i == 0 ? -1 : idx[static_cast<std::size_t>(t.parent[i])], t.weight[i], t.depth[i]);
    }
    return c;
}

}  // namespace

// The matvec also yields x^T A x, and the vectors are kept unnormalized
// (true vector = scale * stored) to save passes over memory.
SpectralMeasure tree_lanczos_measure(const std::vector<int>& parent, const std::vector<double>& weight, int steps) {
    const std::size_t n = parent.size();
    if (n == 0 || weight.size() != n) throw std::invalid_argument("tree_lanczos_measure: bad sizes");
    for (std::size_t i = 1; i < n; ++i)
        if (parent[i] < 0 || static_cast<std::size_t>(parent[i]) >= i) throw std::invalid_argument("tree_lanczos_measure: parents must precede children");
    if (n == 1) return SpectralMeasure::dirac(0.0);
    std::vector<double> v(n, 0.0), vp(n, 0.0), w(n);
    v[0] = 1;
    double sv = 1, svp = 0, bprev = 0, scale = 0;
    std::vector<double> alpha, beta;
    for (int j = 0; j < steps; ++j) {
        // parents precede children, so w[i] is first written through its own parent edge
        w[0] = 0;
        double q = 0;
        for (std::size_t i = 1; i < n; ++i) {
            const auto p = static_cast<std::size_t>(parent[i]);
            const double wt = weight[i];
            w[i] = wt * v[p];
            w[p] += wt * v[i];
            q += wt * v[p] * v[i];
        }
        const double a = 2 * sv * sv * q;
        const double cv = a * sv, cp = bprev * svp;
        double bb = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = sv * w[i] - cv * v[i] - cp * vp[i];
            bb += w[i] * w[i];
        }
        const double b = std::sqrt(bb);
        alpha.push_back(a);
        scale = std::max({scale, std::abs(a), b});
        if (b <= 1e-12 * std::max(scale, 1.0) || j + 1 == steps) break;
        beta.push_back(b);
        std::swap(vp, v);
        std::swap(v, w);
        svp = sv;
        sv = 1 / b;
        bprev = b;
    }
    return tridiagonal_measure(std::move(alpha), std::move(beta));
}

SpectralMeasure pwit_stable_spectrum(const IntensityMeasure& L, const PwitSpectrumOptions& opt, PwitSpectrumStats* stats) {
    if (L.kind != IntensityMeasure::Kind::stable) throw std::invalid_argument("pwit_stable_spectrum: stable intensity required");
    if (!(opt.eps > 0 && opt.eps < opt.theta && opt.theta < 1)) throw std::invalid_argument("pwit_stable_spectrum: need 0 < eps < theta < 1");
    if (opt.h < 1 || opt.n_samples < 1) throw std::invalid_argument("pwit_stable_spectrum: bad depth or sample count");
    const StablePoints pts(L, opt.eps, opt.theta);
    std::vector<SpectralMeasure> parts(static_cast<std::size_t>(opt.n_samples));
    std::vector<double> sizes(parts.size()), cuts(parts.size());
    parallel_for(opt.n_samples, opt.jobs, [&](int s) {
        Rng rng = make_rng(opt.seed, static_cast<std::uint64_t>(s));
        long removed = 0;
        ParentTree t = sample_truncated(pts, opt.h, opt.theta, opt.max_vertices, rng, removed);
        const int n = static_cast<int>(t.parent.size());
        sizes[static_cast<std::size_t>(s)] = n;
        cuts[static_cast<std::size_t>(s)] = static_cast<double>(removed);
        parts[static_cast<std::size_t>(s)] = tree_lanczos_measure(t.parent, t.weight, std::min(n, opt.lanczos_steps));
    });
    if (stats) {
        stats->mean_vertices = 0;
        stats->mean_energy_removed = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            stats->mean_vertices += sizes[i] / static_cast<double>(parts.size());
            stats->mean_energy_removed += cuts[i] / static_cast<double>(parts.size());
        }
    }
    return average(parts);
}

}  // namespace htrm
