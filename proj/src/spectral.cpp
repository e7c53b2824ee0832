#include "htrm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "htrm/parallel.hpp"

namespace htrm {

SpectralMeasure SpectralMeasure::from_atoms(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    SpectralMeasure m;
    for (const auto& [x, w] : atoms) {
        if (!std::isfinite(x) || !(w >= 0)) throw std::invalid_argument("spectral measure: bad atom");
        if (w == 0) continue;
        if (!m.atoms_.empty() && m.atoms_.back().first == x) m.atoms_.back().second += w;
        else m.atoms_.emplace_back(x, w);
    }
    return m;
}

SpectralMeasure SpectralMeasure::uniform(const std::vector<double>& eigenvalues) {
    std::vector<std::pair<double, double>> a;
    a.reserve(eigenvalues.size());
    const double w = 1.0 / static_cast<double>(eigenvalues.size());
    for (double x : eigenvalues) a.emplace_back(x, w);
    return from_atoms(std::move(a));
}

double SpectralMeasure::total() const {
    double s = 0;
    for (const auto& a : atoms_) s += a.second;
    return s;
}

double SpectralMeasure::cdf(double x) const {
    double s = 0;
    for (const auto& [y, w] : atoms_) {
        if (y > x) break;
        s += w;
    }
    return s;
}

SpectralMeasure SpectralMeasure::clipped(double a, double b) const {
    std::vector<std::pair<double, double>> out;
    for (const auto& [x, w] : atoms_) out.emplace_back(std::clamp(x, a, b), w);
    return from_atoms(std::move(out));
}

double SpectralMeasure::mass_outside(double a, double b) const {
    double s = 0;
    for (const auto& [x, w] : atoms_)
        if (x < a || x > b) s += w;
    return s;
}

Histogram SpectralMeasure::histogram(double a, double b, int bins) const {
    if (!(a < b) || bins < 1) throw std::invalid_argument("histogram: bad range");
    Histogram h;
    for (int i = 0; i <= bins; ++i) h.edges.push_back(a + (b - a) * i / bins);
    h.masses.assign(static_cast<std::size_t>(bins), 0.0);
    for (const auto& [x, w] : atoms_) {
        int i = static_cast<int>(std::floor((x - a) / (b - a) * bins));
        h.masses[static_cast<std::size_t>(std::clamp(i, 0, bins - 1))] += w;
    }
    return h;
}

SpectralMeasure average(const std::vector<SpectralMeasure>& ms) {
    if (ms.empty()) throw std::invalid_argument("average: no measures");
    std::vector<std::pair<double, double>> all;
    const double w = 1.0 / static_cast<double>(ms.size());
    for (const auto& m : ms)
        for (const auto& [x, v] : m.atoms()) all.emplace_back(x, v * w);
    return SpectralMeasure::from_atoms(std::move(all));
}

namespace {

template <class Matrix>
std::vector<double> eigenvalues_dense(const Matrix& Y, const EsdOptions& opt) {
    if (Y.rows() != Y.cols()) throw std::invalid_argument("esd: matrix is not square");
    const auto n = Y.rows();
    if (n == 0) throw std::invalid_argument("esd: empty matrix");
    const Matrix& A = Y;
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, opt.residual_check ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenCheckError("esd: eigensolver failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    if (opt.residual_check) {
        const double norm = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
        Matrix R = A * es.eigenvectors() - es.eigenvectors() * lam.asDiagonal();
        // Spectral norm is bounded by the Frobenius norm.
        if (R.norm() > opt.residual_tol * norm && norm > 1e-300)
            throw EigenCheckError("esd: eigen residual above tolerance");
    }
    return std::vector<double>(lam.data(), lam.data() + lam.size());
}

}  // namespace

std::vector<double> eigenvalues(const Eigen::MatrixXd& Y, const EsdOptions& opt) { return eigenvalues_dense(Y, opt); }
std::vector<double> eigenvalues(const Eigen::MatrixXcd& Y, const EsdOptions& opt) { return eigenvalues_dense(Y, opt); }
std::vector<double> eigenvalues(const Eigen::SparseMatrix<double>& Y, const EsdOptions& opt) {
    return eigenvalues_dense(Eigen::MatrixXd(Y), opt);
}

SpectralMeasure esd(const Eigen::MatrixXd& Y, const EsdOptions& opt) { return SpectralMeasure::uniform(eigenvalues(Y, opt)); }
SpectralMeasure esd(const Eigen::MatrixXcd& Y, const EsdOptions& opt) { return SpectralMeasure::uniform(eigenvalues(Y, opt)); }
SpectralMeasure esd(const Eigen::SparseMatrix<double>& Y, const EsdOptions& opt) {
    return SpectralMeasure::uniform(eigenvalues(Y, opt));
}

SpectralMeasure lanczos_measure(int n, int root, const MatVec& apply, int steps, bool reorthogonalize) {
    if (n <= 0 || root < 0 || root >= n) throw std::invalid_argument("lanczos: bad root");
    const auto N = static_cast<std::size_t>(n);
    std::vector<double> v(N, 0.0), vp(N, 0.0), w(N);
    v[static_cast<std::size_t>(root)] = 1.0;
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    double scale = 0, bprev = 0;
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    // v and vp are stored unnormalized; the Lanczos vectors are sv * v and svp * vp.
    double sv = 1, svp = 0;
    for (int j = 0; j < steps; ++j) {
        if (reorthogonalize) {
            basis.push_back(v);
            for (double& x : basis.back()) x *= sv;
        }
        apply(v, w);
        const double a = sv * sv * dot(v, w);
        const double cv = a * sv, cp = bprev * svp;
        double bb = 0;
        for (std::size_t i = 0; i < N; ++i) {
            w[i] = sv * w[i] - cv * v[i] - cp * vp[i];
            bb += w[i] * w[i];
        }
        if (reorthogonalize) {
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) {
                    double c = dot(q, w);
                    for (std::size_t i = 0; i < N; ++i) w[i] -= c * q[i];
                }
            bb = dot(w, w);
        }
        const double b = std::sqrt(bb);
        alpha.push_back(a);
        scale = std::max({scale, std::abs(a), b});
        if (b <= 1e-12 * std::max(scale, 1.0) || j + 1 == steps) break;
        beta.push_back(b);
        std::swap(vp, v);
        std::swap(v, w);
        svp = sv;
        sv = 1.0 / b;
        bprev = b;
    }
    return tridiagonal_measure(alpha, beta);
}

SpectralMeasure tridiagonal_measure(std::vector<double> alpha, std::vector<double> beta) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    if (m == 0 || static_cast<Eigen::Index>(beta.size()) + 1 < m) throw std::invalid_argument("tridiagonal_measure: bad sizes");
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    std::vector<std::pair<double, double>> atoms;
    for (Eigen::Index i = 0; i < m; ++i) {
        double c = es.eigenvectors()(0, i);
        atoms.emplace_back(es.eigenvalues()(i), c * c);
    }
    return SpectralMeasure::from_atoms(std::move(atoms));
}

RootedGraph merge_identical_branches(const RootedGraph& g) {
    if (g.graph.space().inv.dim() != 1) throw std::invalid_argument("merge_identical_branches: scalar marks required");
    const MarkedGraph& G = g.graph;
    const int n = G.n();
    std::vector<Vertex> order{g.root}, parent(static_cast<std::size_t>(n), -1);
    std::vector<double> pw(static_cast<std::size_t>(n), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[static_cast<std::size_t>(g.root)] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Vertex u = order[i];
        for (const auto& h : G.adj(u)) {
            if (seen[static_cast<std::size_t>(h.to)]) {
                if (h.to != parent[static_cast<std::size_t>(u)]) throw std::invalid_argument("merge_identical_branches: not a tree");
                continue;
            }
            seen[static_cast<std::size_t>(h.to)] = 1;
            parent[static_cast<std::size_t>(h.to)] = u;
            pw[static_cast<std::size_t>(h.to)] = std::abs(G.mark_out(u, h).value.at(0));
            order.push_back(h.to);
        }
    }
    using Kids = std::vector<std::pair<double, int>>;
    std::map<Kids, int> ids;
    std::vector<Kids> shapes;
    std::vector<Kids> kids(static_cast<std::size_t>(n));
    std::vector<int> id(static_cast<std::size_t>(n), -1);
    for (std::size_t i = order.size(); i-- > 0;) {
        Vertex v = order[i];
        Kids& k = kids[static_cast<std::size_t>(v)];
        std::sort(k.begin(), k.end());
        Kids merged;
        for (std::size_t a = 0; a < k.size();) {
            std::size_t b = a;
            double s = 0;
            while (b < k.size() && k[b] == k[a]) {
                s += k[b].first * k[b].first;
                ++b;
            }
            merged.emplace_back(std::sqrt(s), k[a].second);
            a = b;
        }
        std::sort(merged.begin(), merged.end());
        auto [it, fresh] = ids.emplace(merged, static_cast<int>(shapes.size()));
        if (fresh) shapes.push_back(merged);
        id[static_cast<std::size_t>(v)] = it->second;
        if (v != g.root) kids[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].emplace_back(pw[static_cast<std::size_t>(v)], it->second);
    }
    MarkedGraph out(1);
    std::vector<std::pair<Vertex, int>> stack{{0, id[static_cast<std::size_t>(g.root)]}};
    while (!stack.empty()) {
        auto [v, s] = stack.back();
        stack.pop_back();
        for (const auto& [w, c] : shapes[static_cast<std::size_t>(s)]) {
            Vertex u = out.add_vertex();
            out.add_edge(v, u, Mark(w));
            stack.emplace_back(u, c);
        }
    }
    return {std::move(out), 0, g.depth};
}

SpectralMeasure root_spectral_measure(const RootedGraph& rg, const RootMeasureOptions& opt) {
    RootedGraph comp = ball(rg.graph, rg.root, rg.graph.n());
    const int dim = comp.graph.space().inv.dim();
    if (comp.graph.num_edges() == 0) return SpectralMeasure::dirac(0.0);
    if (dim == 2) {
        if (comp.graph.n() > 4000) throw SizeCapError("root_spectral_measure: complex operator too large");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_operator_complex(comp.graph));
        std::vector<std::pair<double, double>> atoms;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            atoms.emplace_back(es.eigenvalues()(i), std::norm(es.eigenvectors()(0, i)));
        return SpectralMeasure::from_atoms(std::move(atoms));
    }
    if (dim != 1) throw std::invalid_argument("root_spectral_measure: marks must be real or complex scalars");
    if (comp.graph.is_forest()) comp = merge_identical_branches(comp);
    const int n = comp.graph.n();
    if (n <= opt.dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_operator(comp.graph));
        std::vector<std::pair<double, double>> atoms;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            double c = es.eigenvectors()(0, i);
            atoms.emplace_back(es.eigenvalues()(i), c * c);
        }
        return SpectralMeasure::from_atoms(std::move(atoms));
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> A = to_sparse_operator(comp.graph);
    MatVec apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int r = 0; r < A.outerSize(); ++r) {
            double s = 0;
            for (decltype(A)::InnerIterator it(A, r); it; ++it) s += it.value() * x[static_cast<std::size_t>(it.col())];
            y[static_cast<std::size_t>(r)] = s;
        }
    };
    const int steps = std::min(n, opt.lanczos_steps);
    return lanczos_measure(n, 0, apply, steps, static_cast<double>(n) * steps <= opt.reorth_budget);
}

SpectralMeasure root_spectral_measure(const RootedNeighborhood& g, const RootMeasureOptions& opt) {
    return root_spectral_measure(g.representative, opt);
}

SpectralMeasure limit_esd_estimate(const TreeSampler& sampler, const LimitEstimateOptions& opt) {
    if (opt.n_samples < 1) throw std::invalid_argument("limit_esd_estimate: need at least one sample");
    std::vector<SpectralMeasure> parts(static_cast<std::size_t>(opt.n_samples));
    parallel_for(opt.n_samples, opt.jobs, [&](int i) {
        Rng rng = make_rng(opt.seed, static_cast<std::uint64_t>(i));
        RootedGraph g = sampler(rng);
        if (opt.theta > 0) g.graph = theta_truncate_network(g.graph, opt.theta);
        parts[static_cast<std::size_t>(i)] = root_spectral_measure(g, opt.root);
    });
    return average(parts);
}

double moment(const SpectralMeasure& L, int k) {
    if (k < 0 || k > 12) throw std::invalid_argument("moment: order must lie in [0, 12]");
    double s = 0;
    for (const auto& [x, w] : L.atoms()) s += w * std::pow(x, k);
    return s;
}

double trace_moment(const Eigen::SparseMatrix<double>& Y, int k) {
    if (k < 0 || k > 12) throw std::invalid_argument("trace_moment: order must lie in [0, 12]");
    const double n = static_cast<double>(Y.rows());
    if (k == 0) return 1.0;
    const Eigen::SparseMatrix<double>& A = Y;
    Eigen::SparseMatrix<double> P(A.rows(), A.cols());
    P.setIdentity();
    for (int i = 0; i < k / 2; ++i) P = (P * A).pruned();
    // A is symmetric, so tr(A^{2m}) = |P|_F^2 and tr(A^{2m+1}) = <P, A P>.
    if (k % 2 == 0) return P.squaredNorm() / n;
    Eigen::SparseMatrix<double> Q = A * P;
    return Q.cwiseProduct(P).sum() / n;
}

double trace_moment(const Eigen::MatrixXd& Y, int k) {
    return trace_moment(Eigen::SparseMatrix<double>(Y.sparseView()), k);
}

namespace {

template <class F>
void walk_cdfs(const SpectralMeasure& a, const SpectralMeasure& b, F visit) {
    const auto& A = a.atoms();
    const auto& B = b.atoms();
    std::size_t i = 0, j = 0;
    double fa = 0, fb = 0;
    while (i < A.size() || j < B.size()) {
        double x = std::min(i < A.size() ? A[i].first : INFINITY, j < B.size() ? B[j].first : INFINITY);
        while (i < A.size() && A[i].first == x) fa += A[i++].second;
        while (j < B.size() && B[j].first == x) fb += B[j++].second;
        double next = std::min(i < A.size() ? A[i].first : INFINITY, j < B.size() ? B[j].first : INFINITY);
        visit(x, next, fa, fb);
    }
}

}  // namespace

double w1_distance(const SpectralMeasure& a, const SpectralMeasure& b) {
    double s = 0;
    walk_cdfs(a, b, [&](double x, double next, double fa, double fb) {
        if (std::isfinite(next)) s += std::abs(fa - fb) * (next - x);
    });
    return s;
}

double kolmogorov_distance(const SpectralMeasure& a, const SpectralMeasure& b) {
    double s = 0;
    walk_cdfs(a, b, [&](double, double, double fa, double fb) { s = std::max(s, std::abs(fa - fb)); });
    return s;
}

double surrogate_bl(const SpectralMeasure& a, const SpectralMeasure& b) {
    return std::min(w1_distance(a, b), kolmogorov_distance(a, b));
}

RankCheck rank_inequality_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols())
        throw std::invalid_argument("rank_inequality_check: dimension mismatch");
    RankCheck r;
    const double n = static_cast<double>(A.rows());
    EsdOptions plain;
    plain.residual_check = false;
    const SpectralMeasure la = esd(A, plain), lb = esd(B, plain);
    r.ks = kolmogorov_distance(la, lb);
    // Eigenvalues that agree up to solver noise are treated as equal.
    double scale = 0;
    for (const auto* m : {&la, &lb})
        for (const auto& [x, w] : m->atoms()) scale = std::max(scale, std::abs(x));
    r.tie_window = 1e-9 * std::max(scale, 1e-300);
    r.ks_tolerant = 0;
    for (const auto* m : {&la, &lb})
        for (const auto& [x, w] : m->atoms())
            r.ks_tolerant = std::max({r.ks_tolerant, la.cdf(x) - lb.cdf(x + r.tie_window),
                                      lb.cdf(x) - la.cdf(x + r.tie_window)});
    Eigen::MatrixXd D = A - B;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd s = es.eigenvalues().cwiseAbs();
    const double top = s.size() ? s.maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (top > 0 && s(i) > 1e-8 * top) ++r.rank;
    r.bound = r.rank / n;
    r.holds = r.ks_tolerant <= r.bound + 1e-12;
    return r;
}

}  // namespace htrm
