#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "htrm/canonical.hpp"
#include "htrm/limits.hpp"

namespace htrm {

struct Histogram {
    std::vector<double> edges;
    std::vector<double> masses;
};

class SpectralMeasure {
public:
    SpectralMeasure() = default;
    // Sorts, merges equal locations and drops zero weights.
    static SpectralMeasure from_atoms(std::vector<std::pair<double, double>> atoms);
    static SpectralMeasure uniform(const std::vector<double>& eigenvalues);
    static SpectralMeasure dirac(double x) { return from_atoms({{x, 1.0}}); }

    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total() const;
    double cdf(double x) const;  // right-continuous
    // Mass outside [a, b] moved to the nearest endpoint.
    SpectralMeasure clipped(double a, double b) const;
    double mass_outside(double a, double b) const;
    Histogram histogram(double a, double b, int bins) const;

private:
    std::vector<std::pair<double, double>> atoms_;
};

// Convex combination of measures with equal weights.
SpectralMeasure average(const std::vector<SpectralMeasure>& ms);

struct EsdOptions {
    bool residual_check = true;
    double residual_tol = 1e-8;
};

// Ascending eigenvalues of a Hermitian matrix, residual-checked when requested.
std::vector<double> eigenvalues(const Eigen::MatrixXd& Y, const EsdOptions& opt = {});
std::vector<double> eigenvalues(const Eigen::MatrixXcd& Y, const EsdOptions& opt = {});
std::vector<double> eigenvalues(const Eigen::SparseMatrix<double>& Y, const EsdOptions& opt = {});

SpectralMeasure esd(const Eigen::MatrixXd& Y, const EsdOptions& opt = {});
SpectralMeasure esd(const Eigen::MatrixXcd& Y, const EsdOptions& opt = {});
SpectralMeasure esd(const Eigen::SparseMatrix<double>& Y, const EsdOptions& opt = {});

class EigenCheckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RootMeasureOptions {
    int dense_limit = 400;          // dense eigensolve up to this many vertices
    int lanczos_steps = 200;
    double reorth_budget = 4e7;     // full reorthogonalization while N * steps stays below this
};

// Spectral measure at the root of a finite operator given by a symmetric matvec.
using MatVec = std::function<void(const std::vector<double>& x, std::vector<double>& y)>;
SpectralMeasure lanczos_measure(int n, int root, const MatVec& apply, int steps, bool reorthogonalize);
// Root measure of a tree given by parent pointers (parent[0] unused, parent[i] < i) and
// parent-edge weights, by Lanczos without reorthogonalization.
SpectralMeasure tree_lanczos_measure(const std::vector<int>& parent, const std::vector<double>& weight, int steps);
// Spectral measure at e_1 of the Jacobi matrix with diagonal alpha and off-diagonal beta.
SpectralMeasure tridiagonal_measure(std::vector<double> alpha, std::vector<double> beta);

SpectralMeasure root_spectral_measure(const RootedGraph& g, const RootMeasureOptions& opt = {});
SpectralMeasure root_spectral_measure(const RootedNeighborhood& g, const RootMeasureOptions& opt = {});

// Vertex-weight merging of identical sibling subtrees; the root measure is unchanged.
// Returns the reduced tree rooted at 0. Real one-dimensional marks only.
RootedGraph merge_identical_branches(const RootedGraph& g);

struct LimitEstimateOptions {
    int n_samples = 100;
    double theta = 0;  // 0 disables theta-truncation
    int jobs = 1;
    std::uint64_t seed = 1;
    RootMeasureOptions root;
};

using TreeSampler = std::function<RootedGraph(Rng&)>;
SpectralMeasure limit_esd_estimate(const TreeSampler& sampler, const LimitEstimateOptions& opt);

// PWIT(stable) truncated at depth h and mark norm eps, theta-truncated, root measure
// by Lanczos quadrature. Builds only what the truncated operator can reach.
struct PwitSpectrumOptions {
    int h = 6;
    double eps = 0.05;
    double theta = 0.1;
    int n_samples = 300;
    int lanczos_steps = 80;
    int jobs = 0;
    std::uint64_t seed = 1;
    long max_vertices = 20000000;
};
struct PwitSpectrumStats {
    double mean_vertices = 0;
    double mean_energy_removed = 0;  // vertices isolated by the energy cutoff per sample
};
SpectralMeasure pwit_stable_spectrum(const IntensityMeasure& L, const PwitSpectrumOptions& opt,
                                     PwitSpectrumStats* stats = nullptr);

double moment(const SpectralMeasure& L, int k);
double trace_moment(const Eigen::SparseMatrix<double>& Y, int k);
double trace_moment(const Eigen::MatrixXd& Y, int k);

double w1_distance(const SpectralMeasure& a, const SpectralMeasure& b);
double kolmogorov_distance(const SpectralMeasure& a, const SpectralMeasure& b);
double surrogate_bl(const SpectralMeasure& a, const SpectralMeasure& b);

struct RankCheck {
    double ks = 0;           // plain Kolmogorov distance of the two ESDs
    double ks_tolerant = 0;  // same, with eigenvalues closer than tie_window identified
    double tie_window = 0;
    int rank = 0;
    double bound = 0;  // rank / n
    bool holds = true;
};
RankCheck rank_inequality_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace htrm
