#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "htrm/graph_core.hpp"
#include "htrm/parallel.hpp"

namespace htrm {

// Real mark law gamma. All families here are symmetric under the identity involution.
class MarkLaw {
public:
    enum class Kind { point_masses, gaussian, uniform, pareto };

    static MarkLaw point_masses(std::vector<std::pair<double, double>> atoms);
    static MarkLaw dirac(double x) { return point_masses({{x, 1.0}}); }
    static MarkLaw gaussian(double mean, double sd);
    static MarkLaw uniform(double a, double b);
    // |X| >= t0 with P(|X| >= t) = (t/t0)^-alpha, positive with probability p.
    static MarkLaw pareto(double alpha, double t0, double p);

    Kind kind() const { return kind_; }
    double sample(Rng& rng) const;
    bool discrete() const { return kind_ == Kind::point_masses; }
    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    // Distribution function; point masses give the right-continuous step function.
    double cdf(double x) const;
    double mean() const;
    const std::vector<double>& params() const { return params_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::point_masses;
    std::vector<std::pair<double, double>> atoms_;
    std::vector<double> params_;
    std::vector<double> cumulative_;
};

enum class EnsembleKind { sparse_wigner, config_model, levy, general_gamma_n, er_marked, given_edge_counts };

EnsembleKind ensemble_kind_from_string(const std::string& s);
std::string to_string(EnsembleKind k);

struct EnsembleConfig {
    EnsembleKind kind = EnsembleKind::sparse_wigner;
    int n = 100;
    double d = 1.0;                 // sparse_wigner, er_marked, general_gamma_n (total mass of Lambda)
    std::vector<int> degrees;       // config_model
    double alpha = 1.5, c = 1.0, p = 0.5, q = 0.5;  // levy
    MarkLaw gamma = MarkLaw::dirac(1.0);
    std::vector<long long> edge_counts;  // given_edge_counts: m(b), one entry per self-conjugate color
    std::vector<MarkLaw> color_gamma;    // given_edge_counts: mark law per color
    std::uint64_t seed = 1;
    long rejection_budget = 100000;

    void check() const;  // throws std::invalid_argument on invalid configuration
};

struct SamplerInfo {
    std::string method;  // "rejection" or "switch-mcmc" for the configuration model
    long attempts = 0;
};

using SparseSym = Eigen::SparseMatrix<double>;

SparseSym sample_sparse_wigner(const EnsembleConfig& cfg, std::uint64_t stream = 0);
SparseSym sample_configuration_model(const EnsembleConfig& cfg, std::uint64_t stream = 0, SamplerInfo* info = nullptr);
SparseSym sample_levy(const EnsembleConfig& cfg, std::uint64_t stream = 0);
// Entries (1 - d/n) delta_0 + (d/n) gamma, so n gamma_n -> Lambda = d * gamma.
SparseSym sample_general_gamma_n(const EnsembleConfig& cfg, std::uint64_t stream = 0);
MarkedGraph sample_er_marked(const EnsembleConfig& cfg, std::uint64_t stream = 0);
MarkedGraph sample_given_edge_counts(const EnsembleConfig& cfg, std::uint64_t stream = 0);
// Dispatch on cfg.kind for the matrix-valued ensembles.
SparseSym sample_matrix(const EnsembleConfig& cfg, std::uint64_t stream = 0);

// Exact value of the Levy entry generator tail P(|X| >= t) before scaling.
double levy_entry_tail(double alpha, double c, double t);

bool erdos_gallai(std::vector<int> degrees);

bool bn_theta_membership(const SparseSym& Y, double theta);
bool bn_theta_membership(const Eigen::MatrixXd& Y, double theta);

}  // namespace htrm
