#include <doctest.h>

#include <cmath>
#include <random>

#include "htrm/models.hpp"
#include "htrm/spectral.hpp"

using namespace htrm;

namespace {

// Catalan-type recursion: closed walks of length 2k at the root of the infinite d-regular tree.
std::vector<double> kesten_mckay_moments(int d, int kmax) {
    // f(j, l): walks from a vertex at distance l from the root, j steps left, ending at the root
    const int L = 2 * kmax;
    std::vector<std::vector<double>> f(static_cast<std::size_t>(L + 1), std::vector<double>(static_cast<std::size_t>(L + 2), 0.0));
    f[0][0] = 1;
    for (int j = 1; j <= L; ++j)
        for (int l = 0; l <= L; ++l) {
            double s = 0;
            const double out = l == 0 ? d : d - 1;
            s += out * f[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l + 1)];
            if (l > 0) s += f[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l - 1)];
            f[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = s;
        }
    std::vector<double> m;
    for (int k = 0; k <= kmax; ++k) m.push_back(f[static_cast<std::size_t>(2 * k)][0]);
    return m;
}

MarkedGraph star(int leaves, double t = 1.0) {
    MarkedGraph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i, Mark(t));
    return g;
}

Eigen::MatrixXd random_symmetric(Rng& rng, int n, double density) {
    std::uniform_real_distribution<double> u(-1, 1), v(0, 1);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (v(rng) < density) A(i, j) = A(j, i) = u(rng);
    return A;
}

}  // namespace

TEST_CASE("ESD of small matrices") {
    Eigen::MatrixXd Y(2, 2);
    Y << 0, 1, 1, 0;
    auto L = esd(Y);
    REQUIRE(L.size() == 2);
    CHECK(L.atoms()[0].first == doctest::Approx(-1));
    CHECK(L.atoms()[1].first == doctest::Approx(1));
    CHECK(L.atoms()[0].second == doctest::Approx(0.5));

    auto Z = esd(Eigen::MatrixXd(Eigen::MatrixXd::Zero(5, 5)));
    REQUIRE(Z.size() == 1);
    CHECK(Z.atoms()[0].first == 0.0);

    Eigen::MatrixXd K3 = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
    auto k = eigenvalues(K3);
    CHECK(k[0] == doctest::Approx(-1));
    CHECK(k[1] == doctest::Approx(-1));
    CHECK(k[2] == doctest::Approx(2));
    CHECK(moment(esd(K3), 3) == doctest::Approx(2.0));
    CHECK(moment(esd(K3), 0) == doctest::Approx(1.0));
}

TEST_CASE("trace moments agree with ESD moments") {
    Rng rng = make_rng(70);
    for (int t = 0; t < 5; ++t) {
        Eigen::MatrixXd A = random_symmetric(rng, 100 + 80 * t, 0.05);
        auto L = esd(A);
        for (int k = 1; k <= 6; ++k) {
            const double tr = trace_moment(A, k);
            CHECK(std::abs(moment(L, k) - tr) <= 1e-8 * std::max(1.0, std::abs(tr)));
            Eigen::SparseMatrix<double> S = A.sparseView();
            CHECK(std::abs(trace_moment(S, k) - tr) <= 1e-10 * std::max(1.0, std::abs(tr)));
        }
    }
    // Frobenius identity on a 0/1 graph: second moment is the mean degree
    EnsembleConfig c;
    c.n = 300;
    c.d = 4;
    SparseSym Y = sample_sparse_wigner(c);
    CHECK(trace_moment(Y, 2) == doctest::Approx(static_cast<double>(Y.nonZeros()) / 300));
}

TEST_CASE("root spectral measures") {
    RootedGraph iso{MarkedGraph(1), 0, 0};
    auto a = root_spectral_measure(iso);
    REQUIRE(a.size() == 1);
    CHECK(a.atoms()[0].first == 0.0);

    auto e = root_spectral_measure(RootedGraph{star(1, 2.5), 0, 1});
    REQUIRE(e.size() == 2);
    CHECK(e.atoms()[0].first == doctest::Approx(-2.5));
    CHECK(e.atoms()[1].second == doctest::Approx(0.5));

    auto s = root_spectral_measure(RootedGraph{star(4), 0, 1});
    REQUIRE(s.size() == 2);
    CHECK(s.atoms()[0].first == doctest::Approx(-2.0));
    CHECK(s.atoms()[1].first == doctest::Approx(2.0));
    CHECK(s.atoms()[1].second == doctest::Approx(0.5));
}

TEST_CASE("root measures of random trees: mass, symmetry, moments") {
    Rng rng = make_rng(71);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 10; ++t) {
        const int n = 5 + 37 * t;
        MarkedGraph g(n);
        for (int v = 1; v < n; ++v) g.add_edge(static_cast<int>(rng() % static_cast<unsigned>(v)), v, Mark(u(rng)));
        auto L = root_spectral_measure(RootedGraph{g, 0, n});
        CHECK(L.total() == doctest::Approx(1.0).epsilon(1e-10));
        Eigen::MatrixXd A = to_operator(g);
        Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
        for (int k = 1; k <= 7; ++k) {
            P = P * A;
            const double m = moment(L, k);
            CHECK(m == doctest::Approx(P(0, 0)).epsilon(1e-8).scale(1.0));
            if (k % 2) CHECK(std::abs(m) <= 1e-10 * std::max(1.0, std::abs(moment(L, k + 1))));
        }
    }
}

TEST_CASE("tree Lanczos matches dense root moments") {
    Rng rng = make_rng(72);
    std::uniform_real_distribution<double> u(0.1, 2);
    for (int t = 0; t < 8; ++t) {
        const int n = 2 + 29 * t;
        std::vector<int> parent(static_cast<std::size_t>(n), -1);
        std::vector<double> w(static_cast<std::size_t>(n), 0.0);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (int v = 1; v < n; ++v) {
            const int p = static_cast<int>(rng() % static_cast<unsigned>(v));
            parent[static_cast<std::size_t>(v)] = p;
            w[static_cast<std::size_t>(v)] = u(rng);
            A(p, v) = A(v, p) = w[static_cast<std::size_t>(v)];
        }
        auto L = tree_lanczos_measure(parent, w, std::min(n, 12));
        CHECK(L.total() == doctest::Approx(1.0).epsilon(1e-10));
        Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
        for (int k = 1; k <= 8; ++k) {
            P = P * A;
            CHECK(moment(L, k) == doctest::Approx(P(0, 0)).epsilon(1e-8).scale(1.0));
        }
    }
    auto one = tree_lanczos_measure({-1}, {0.0}, 5);
    CHECK(moment(one, 2) == 0.0);
    CHECK_THROWS_AS(tree_lanczos_measure({-1, 1}, {0.0, 1.0}, 5), std::invalid_argument);
}

TEST_CASE("identical branch merging keeps the root measure") {
    Rng rng = make_rng(72);
    RootedGraph t = sample_ugw(MarkLaw::point_masses({{1.0, 0.5}, {-2.0, 0.5}}), degree_dirac(3), 5, 3);
    RootedGraph m = merge_identical_branches(t);
    CHECK(m.graph.n() < t.graph.n());
    RootMeasureOptions dense;
    dense.dense_limit = 100000;
    auto a = root_spectral_measure(t, dense), b = root_spectral_measure(m, dense);
    for (int k = 1; k <= 10; ++k)
        CHECK(std::abs(moment(a, k) - moment(b, k)) <= 1e-9 * std::max(1.0, moment(a, 2 * ((k + 1) / 2))));
}

TEST_CASE("regular tree moments approach Kesten-McKay") {
    const auto km = kesten_mckay_moments(3, 4);
    CHECK(km[1] == 3);
    CHECK(km[2] == 15);
    CHECK(km[3] == 87);
    CHECK(km[4] == 543);
    std::vector<double> prev(5, 1e300);
    for (int h = 1; h <= 5; ++h) {
        auto L = root_spectral_measure(sample_ugw(MarkLaw::dirac(1.0), degree_dirac(3), h, 1));
        for (int k = 1; k <= 4; ++k) {
            const double gap = std::abs(moment(L, 2 * k) - km[static_cast<std::size_t>(k)]);
            CHECK(gap <= prev[static_cast<std::size_t>(k)] + 1e-9);
            prev[static_cast<std::size_t>(k)] = gap;
        }
    }
    CHECK(prev[4] < 1e-9);  // depth 5 sees every walk of length 8
}

TEST_CASE("limit estimate of a deterministic UGW") {
    LimitEstimateOptions o;
    o.n_samples = 7;
    auto L = limit_esd_estimate([](Rng& r) { return sample_ugw({MarkLaw::dirac(1.0)}, degree_dirac(2), 4, r); }, o);
    auto ref = root_spectral_measure(sample_ugw(MarkLaw::dirac(1.0), degree_dirac(2), 4, 9));
    CHECK(kolmogorov_distance(L, ref) < 1e-9);
}

TEST_CASE("distances between measures") {
    auto a = SpectralMeasure::dirac(0.0), b = SpectralMeasure::dirac(0.3);
    CHECK(w1_distance(a, a) == 0.0);
    CHECK(kolmogorov_distance(a, a) == 0.0);
    CHECK(surrogate_bl(a, a) == 0.0);
    CHECK(w1_distance(a, b) == doctest::Approx(0.3));
    CHECK(kolmogorov_distance(a, b) == doctest::Approx(1.0));
    CHECK(surrogate_bl(a, b) == doctest::Approx(0.3));
    CHECK(surrogate_bl(a, SpectralMeasure::dirac(4.0)) == doctest::Approx(1.0));
    auto c = SpectralMeasure::from_atoms({{0.0, 0.5}, {1.0, 0.5}});
    CHECK(kolmogorov_distance(a, c) == doctest::Approx(0.5));
    CHECK(w1_distance(a, c) == doctest::Approx(0.5));
}

TEST_CASE("histograms and clipping") {
    auto m = SpectralMeasure::uniform({-3.0, -0.5, 0.2, 0.7, 5.0});
    CHECK(m.mass_outside(-1, 1) == doctest::Approx(0.4));
    auto c = m.clipped(-1, 1);
    CHECK(c.total() == doctest::Approx(1.0));
    auto h = c.histogram(-1, 1, 4);
    CHECK(h.edges.size() == 5);
    double s = 0;
    for (double x : h.masses) s += x;
    CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("rank inequality") {
    Rng rng = make_rng(73);
    Eigen::MatrixXd A = random_symmetric(rng, 80, 0.1);
    auto same = rank_inequality_check(A, A);
    CHECK(same.ks == 0.0);
    CHECK(same.rank == 0);
    CHECK(same.holds);

    Eigen::MatrixXd B = A;
    B.row(5).setZero();
    B.col(5).setZero();
    auto r = rank_inequality_check(A, B);
    CHECK(r.rank <= 2);
    CHECK(r.ks_tolerant <= 2.0 / 80 + 1e-12);
    CHECK(r.holds);
}
