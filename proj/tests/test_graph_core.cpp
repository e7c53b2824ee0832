#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>

#include "htrm/canonical.hpp"
#include "htrm/graph_core.hpp"
#include "htrm/parallel.hpp"

using namespace htrm;

namespace {

MarkedGraph random_graph(Rng& rng, int n, double p, bool integer_marks = true) {
    MarkedGraph g(n);
    std::uniform_real_distribution<double> u(0, 1);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (u(rng) < p) g.add_edge(a, b, Mark(integer_marks ? std::floor(1 + 3 * u(rng)) : 0.5 + u(rng)));
    return g;
}

MarkedGraph relabel(const MarkedGraph& g, const std::vector<int>& perm) {
    MarkedGraph out(g.n(), g.space());
    for (const auto& e : g.edges()) out.add_edge_raw(perm[e.u], perm[e.v], e.fwd, e.bwd);
    return out;
}

MarkedGraph star(int leaves, double mark = 1.0) {
    MarkedGraph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i, Mark(mark));
    return g;
}

MarkedGraph path(int n, std::vector<double> marks = {}) {
    MarkedGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, Mark(marks.empty() ? 1.0 : marks[i]));
    return g;
}

}  // namespace

TEST_CASE("involutions square to the identity") {
    for (const Involution& t : {Involution::identity(3), Involution::conjugation(2)}) {
        CHECK(t.valid());
        std::vector<double> x{1.5, -2.0, 3.25, 0.5};
        x.resize(static_cast<std::size_t>(t.dim()));
        CHECK(t.apply(t.apply(x)) == x);
    }
    Involution bad{{1, -1}, {1, 0}};  // eps_0 eps_tau(0) = -1
    CHECK_FALSE(bad.valid());
    CHECK(Involution::conjugation(1).apply({2.0, 1.0}) == std::vector<double>{2.0, -1.0});
}

TEST_CASE("validate accepts symmetric marks and flags asymmetric ones") {
    MarkedGraph g(2);
    g.add_edge(0, 1, Mark(1.0));
    CHECK(validate(g).empty());

    MarkedGraph c(2, MarkSpace{Involution::conjugation(1), {}});
    c.add_edge_raw(0, 1, Mark(0, {2.0, 1.0}), Mark(0, {2.0, 1.0}));
    CHECK(validate(c).size() == 1);

    MarkedGraph ok(2, MarkSpace{Involution::conjugation(1), {}});
    ok.add_edge(0, 1, Mark(0, {2.0, 1.0}));
    CHECK(validate(ok).empty());
    CHECK(ok.edge(0).bwd.value == std::vector<double>{2.0, -1.0});
}

TEST_CASE("three self-conjugate edges give six oriented edges") {
    MarkedGraph g = path(4);
    CHECK(validate(g).empty());
    int oriented = 0;
    for (int v = 0; v < g.n(); ++v) oriented += g.degree(v);
    CHECK(oriented == 6);
}

TEST_CASE("marked degrees") {
    auto s = marked_degree(star(3), 0);
    REQUIRE(s.size() == 1);
    CHECK(s.begin()->second == 3);
    CHECK(marked_degree(MarkedGraph(1), 0).empty());

    MarkedGraph p = path(3, {2.0, -2.0});
    auto m = marked_degree(p, 1);
    CHECK(m.size() == 2);
    CHECK(m[Mark(-2.0)] == 1);
    CHECK(m[Mark(2.0)] == 1);  // xi(1,0) = xi(0,1)* = 2
}

TEST_CASE("quantization") {
    Quantizer q(0.25, 2.0);
    CHECK(q.apply(Mark(0.37)).value[0] == doctest::Approx(0.25));
    CHECK(q.apply(Mark(-0.37)).value[0] == doctest::Approx(-0.25));
    CHECK(q.apply(Mark(3.0)).omega);
    CHECK(q.apply(Mark(2.0)).omega);
    CHECK_FALSE(q.apply(Mark(1.99)).omega);
    CHECK(Quantizer(0.3, 1.0).kappa_eff() == doctest::Approx(1.2));

    Rng rng = make_rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        if (std::abs(x) < 2) CHECK(q.apply(Mark(-x)).value[0] == -q.apply(Mark(x)).value[0]);
    }
    MarkedGraph g = random_graph(rng, 8, 0.5, false);
    MarkedGraph once = quantize_graph(g, q), twice = quantize_graph(once, q);
    REQUIRE(once.num_edges() == twice.num_edges());
    for (std::size_t i = 0; i < once.num_edges(); ++i) CHECK(once.edge(static_cast<int>(i)).fwd == twice.edge(static_cast<int>(i)).fwd);
}

TEST_CASE("epsilon truncation") {
    MarkedGraph g = path(3, {0.5, 1.5});
    CHECK(epsilon_truncate(g, 1.0).num_edges() == 1);
    CHECK(epsilon_truncate(g, 1.0).edge(0).fwd.value[0] == 1.5);
    CHECK(epsilon_truncate(g, 0.1).num_edges() == 2);
    CHECK(epsilon_truncate(g, 1.5).num_edges() == 1);  // closed threshold

    Rng rng = make_rng(4);
    for (int t = 0; t < 20; ++t) {
        MarkedGraph r = random_graph(rng, 10, 0.4, false);
        MarkedGraph a = epsilon_truncate(epsilon_truncate(r, 0.8), 1.1), b = epsilon_truncate(r, 1.1);
        CHECK(a.num_edges() == b.num_edges());
    }
}

TEST_CASE("degree truncation") {
    CHECK(degree_truncate(star(5), 4).num_edges() == 0);
    MarkedGraph k4(4);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b, Mark(1.0));
    CHECK(degree_truncate(k4, 3).num_edges() == 6);
    MarkedGraph p = path(4, {1.0, 10.0, 1.0});
    MarkedGraph t = degree_truncate(p, 5);
    CHECK(t.num_edges() == 2);
    CHECK_FALSE(t.find_edge(1, 2).has_value());
}

TEST_CASE("theta truncation of networks") {
    MarkedGraph g(3);
    g.add_edge(0, 1, Mark(0.1));
    g.add_edge(0, 2, Mark(1.0));
    MarkedGraph t = theta_truncate_network(g, 0.5);
    CHECK(t.num_edges() == 1);
    CHECK(t.find_edge(0, 2).has_value());

    CHECK(theta_truncate_network(star(5), 0.5).num_edges() == 0);  // root energy 5 >= 4
    CHECK(theta_truncate_network(star(3), 0.5).num_edges() == 3);
    CHECK(theta_truncate_network(path(5), 0.01).num_edges() == 4);
}

TEST_CASE("canonical forms") {
    Quantizer q;
    MarkedGraph any = path(4);
    CHECK(canonical_form(any, 1, 0, q).encoding == canonical_form(star(5), 0, 0, q).encoding);

    MarkedGraph s1 = star(3), s2(4);
    for (int i : {0, 1, 3}) s2.add_edge(2, i, Mark(1.0));
    CHECK(canonical_form(s1, 0, 2, q).encoding == canonical_form(s2, 2, 2, q).encoding);
    CHECK(canonical_form(path(4), 0, 2, q).encoding != canonical_form(star(3), 0, 2, q).encoding);

    Rng rng = make_rng(5);
    for (int t = 0; t < 10; ++t) {
        MarkedGraph g = random_graph(rng, 9, 0.35);
        const auto ref = canonical_form(g, 0, 3, q);
        RootedGraph back{ref.representative.graph, ref.representative.root, 3};
        CHECK(canonical_form(back, q).encoding == ref.encoding);
        std::vector<int> perm(static_cast<std::size_t>(g.n()));
        std::iota(perm.begin(), perm.end(), 0);
        for (int r = 0; r < 100; ++r) {
            std::shuffle(perm.begin(), perm.end(), rng);
            CHECK(canonical_form(relabel(g, perm), perm[0], 3, q).encoding == ref.encoding);
        }
    }
}

TEST_CASE("local distance") {
    Quantizer q;
    const auto a = canonical_form(star(3), 0, 2, q);
    CHECK(local_distance(a, a) <= 1.0 / 3 + 1e-12);

    MarkedGraph shifted = star(3, 1.1);
    RootedGraph ra{star(3), 0, 2}, rb{shifted, 0, 2};
    CHECK(local_distance(ra, rb) <= 1.0 / 3 + 0.1 + 1e-9);

    RootedGraph rc{star(2), 0, 2};
    CHECK(local_distance(ra, rc) >= 0.5);

    Rng rng = make_rng(6);
    std::vector<RootedGraph> gs;
    for (int i = 0; i < 8; ++i) gs.push_back({random_graph(rng, 6, 0.4), 0, 2});
    for (const auto& x : gs)
        for (const auto& y : gs) {
            CHECK(local_distance(x, y) == doctest::Approx(local_distance(y, x)).epsilon(1e-12));
            for (const auto& z : gs) CHECK(local_distance(x, z) <= local_distance(x, y) + local_distance(y, z) + 1e-12);
        }
}

TEST_CASE("matrix and graph round trip") {
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(2, 2);
    Y(0, 1) = Y(1, 0) = 3;
    MarkedGraph g = from_matrix(Y);
    REQUIRE(g.num_edges() == 1);
    CHECK(g.edge(0).fwd.value[0] == 3.0);
    CHECK(from_matrix(Eigen::MatrixXd(Eigen::MatrixXd::Zero(4, 4))).num_edges() == 0);

    Rng rng = make_rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(5, 5);
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b)
            if (u(rng) > 0) {
                Z(a, b) = {u(rng), u(rng)};
                Z(b, a) = std::conj(Z(a, b));
            }
    MarkedGraph c = from_matrix(Z);
    CHECK(validate(c).empty());
    CHECK(to_operator_complex(c) == Z);

    Eigen::MatrixXd R = Z.real();
    CHECK(to_operator(from_matrix(R)) == R);
    Eigen::SparseMatrix<double> S = R.sparseView();
    CHECK(Eigen::MatrixXd(to_sparse_operator(from_sparse(S))) == R);
}

TEST_CASE("balls") {
    RootedGraph b = ball(path(7), 3, 2);
    CHECK(b.graph.n() == 5);
    CHECK(b.graph.num_edges() == 4);
    CHECK(b.root == 0);
    auto d = bfs_distances(path(5), {0}, 10);
    CHECK(d == std::vector<int>{0, 1, 2, 3, 4});
}
