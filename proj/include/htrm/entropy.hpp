#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "htrm/limits.hpp"
#include "htrm/local_law.hpp"
#include "htrm/models.hpp"

namespace htrm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Finitely supported law, weights are expected to sum to one.
template <class K>
using FiniteLaw = std::map<K, double>;

template <class K>
double shannon(const FiniteLaw<K>& p) {
    double h = 0;
    for (const auto& [k, w] : p)
        if (w > 0) h -= w * std::log(w);
    return h;
}

// +inf iff p charges an atom that q does not.
template <class K>
double kl(const FiniteLaw<K>& p, const FiniteLaw<K>& q) {
    double s = 0;
    for (const auto& [k, w] : p) {
        if (w <= 0) continue;
        auto it = q.find(k);
        if (it == q.end() || it->second <= 0) return kInf;
        s += w * std::log(w / it->second);
    }
    return s;
}

// H(X | f(X)) = H(X) - H(f(X)).
template <class K, class F>
double conditional_shannon(const FiniteLaw<K>& joint, F projection) {
    FiniteLaw<decltype(projection(joint.begin()->first))> img;
    for (const auto& [k, w] : joint) img[projection(k)] += w;
    return shannon(joint) - shannon(img);
}

using DegreeVectorLaw = FiniteLaw<std::vector<int>>;

struct PoissonKl {
    double value = 0;        // direct pointwise sum
    double closed_form = 0;  // -H(D) + dbar - sum d ln d + sum E ln D(b)!
    bool mean_match = true;
};
PoissonKl kl_deg_poisson(const DegreeVectorLaw& D, const std::vector<double>& d, double mean_tol = 1e-9);

struct AdmissibilityFlags {
    bool tree_support = true;
    double invariance_defect = 0;
    bool degree_mean_match = true;
    bool root_mark_law = true;   // edge laws: root color law d/dbar
    bool d_nu_bound = true;      // edge laws: d_nu >= dbar
    bool marks_in_support = true;
    std::vector<std::string> violated;
};

struct EntropyReport {
    double value = 0;
    std::vector<std::pair<std::string, double>> terms;   // value is their sum when finite
    std::vector<std::pair<std::string, double>> extras;  // informational, not summed
    AdmissibilityFlags flags;

    bool finite() const { return std::isfinite(value); }
    double term(const std::string& name) const;
};

struct EntropyOptions {
    double defect_tol = 1e-9;
    double mean_tol = 1e-9;
};

// Entropy of the uniform labeling of a law on trees, from canonical forms:
// H(unlabeled) + E ln(prod_v c_v! / |Aut|).
double labeled_entropy(const NeighborhoodLaw& mu);
double labeled_entropy(const EdgeRootedLaw& nu);
double unlabeled_entropy(const NeighborhoodLaw& mu);
double unlabeled_entropy(const EdgeRootedLaw& nu);

EdgeRootedLaw restrict_edge_law(const EdgeRootedLaw& nu, int h);
// Forgets mark values and keeps colors.
NeighborhoodLaw shape_law(const NeighborhoodLaw& mu);
DegreeVectorLaw root_degree_law(const NeighborhoodLaw& mu, int colors);

EntropyReport sigma0(const NeighborhoodLaw& mu, const std::vector<double>& d, int h, const EntropyOptions& opt = {});
EntropyReport vec_sigma0(const EdgeRootedLaw& nu, const std::vector<double>& d, int h,
                         const EntropyOptions& opt = {});
// gamma[b] is the point-mass mark law of color b; a single law serves every color.
EntropyReport sigma1_discrete(const NeighborhoodLaw& mu, const std::vector<MarkLaw>& gamma,
                              const std::vector<double>& d, int h, const EntropyOptions& opt = {});

double j_d(double d, double delta);
// 1/2 (delta ln(delta/d) - delta + d): Poisson rate of the edge count.
double edge_count_rate(double d, double delta);

// dm and gamma_delta are lists of (quantized mark, mass); gamma_delta holds gamma_b^delta(l) keyed by color.
double I_delta_d(const std::vector<std::pair<Mark, double>>& dm, const std::vector<double>& d,
                 const std::vector<std::pair<Mark, double>>& gamma_delta, const MarkSpace& space,
                 const Quantizer& q, double tol = 1e-9);

// Single color, real marks: Sigma^0 of the shape law plus Sigma^1 at delta = E deg(o),
// plus the edge-count rate. j_d(delta) is reported among the extras.
EntropyReport sigma_er(const NeighborhoodLaw& mu, const MarkLaw& gamma, double d, int h,
                       const EntropyOptions& opt = {});

struct KlSweepEntry {
    double delta;
    double kl;
};
// D_KL of the quantized laws {X}^kappa_delta vs {Y}^kappa_delta for each delta.
std::vector<KlSweepEntry> discretized_kl_sweep(const MarkLaw& p, const MarkLaw& q, double kappa,
                                               const std::vector<double>& deltas);
// Bin masses of the quantized law, keyed by bin index; the omega bin has key INT64_MAX.
std::map<std::int64_t, double> quantized_masses(const MarkLaw& p, const Quantizer& q);

// ln P(Bin(N, p) >= k), exact up to floating point.
double binomial_log_tail(long long N, double p, long long k);

}  // namespace htrm
