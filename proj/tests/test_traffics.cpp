#include <doctest.h>

#include <complex>
#include <random>
#include <set>

#include "htrm/traffics.hpp"

using namespace htrm;

namespace {

// Brute force over all n^|V| maps, injective ones when asked.
Complex naive_traffic(const Matrices& Y, const TestGraph& H, bool injective) {
    const int n = static_cast<int>(Y[0].rows());
    std::vector<int> phi(static_cast<std::size_t>(H.vertices), 0);
    Complex total = 0;
    while (true) {
        bool ok = true;
        if (injective) {
            std::set<int> s(phi.begin(), phi.end());
            ok = static_cast<int>(s.size()) == H.vertices;
        }
        if (ok) {
            Complex p = 1;
            for (const auto& e : H.edges) {
                const int r = phi[static_cast<std::size_t>(e.to)], c = phi[static_cast<std::size_t>(e.from)];
                const auto& M = Y[static_cast<std::size_t>(e.label)];
                p *= e.star ? std::conj(M(c, r)) : M(r, c);
            }
            total += p;
        }
        int i = 0;
        while (i < H.vertices && ++phi[static_cast<std::size_t>(i)] == n) phi[static_cast<std::size_t>(i++)] = 0;
        if (i == H.vertices) break;
    }
    return total / static_cast<double>(n);
}

Eigen::MatrixXcd random_hermitian(Rng& rng, int n) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (g(rng) > 0.3) {
                Y(a, b) = {g(rng), g(rng)};
                Y(b, a) = std::conj(Y(a, b));
            }
    return Y;
}

TestGraph random_test_graph(Rng& rng, int v, int e, int labels) {
    TestGraph H;
    H.vertices = v;
    for (int w = 1; w < v; ++w) H.edges.push_back({static_cast<int>(rng() % w), w, static_cast<int>(rng() % labels), false});
    for (int i = 0; i < e; ++i)
        H.edges.push_back({static_cast<int>(rng() % v), static_cast<int>(rng() % v), static_cast<int>(rng() % labels), rng() % 2 == 0});
    return H;
}

TestGraph cycle(int k) {
    TestGraph H;
    H.vertices = k;
    for (int i = 0; i < k; ++i) H.edges.push_back({i, (i + 1) % k, 0, false});
    return H;
}

}  // namespace

TEST_CASE("traffic values against brute force") {
    Rng rng = make_rng(80);
    Matrices Y{random_hermitian(rng, 5), random_hermitian(rng, 5)};
    for (int t = 0; t < 60; ++t) {
        TestGraph H = random_test_graph(rng, 1 + t % 4, 1 + t % 5, 2);
        CHECK(std::abs(traffic_eval(Y, H) - naive_traffic(Y, H, false)) < 1e-12);
        CHECK(std::abs(traffic_eval_injective(Y, H) - naive_traffic(Y, H, true)) < 1e-12);
    }
}

TEST_CASE("trivial and cyclic test graphs") {
    Rng rng = make_rng(81);
    Matrices Y{random_hermitian(rng, 7)};
    TestGraph one;
    CHECK(std::abs(traffic_eval(Y, one) - Complex(1)) < 1e-15);

    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(7, 7);
    for (int k = 1; k <= 6; ++k) {
        P = P * Y[0];
        CHECK(std::abs(traffic_eval(Y, cycle(k)) - P.trace() / 7.0) < 1e-10);
    }

    TestGraph dbl;
    dbl.vertices = 2;
    dbl.edges = {{0, 1, 0, false}, {1, 0, 0, true}};
    CHECK(std::abs(traffic_eval(Y, dbl) - Y[0].squaredNorm() / 7.0) < 1e-12);
}

TEST_CASE("rooted traffic on small graphs") {
    MarkedGraph g(2);
    g.add_edge(0, 1, Mark(2.0));
    RootedGraph r{g, 0, 1};
    TestGraph H;
    H.vertices = 2;
    H.root = 0;
    H.edges = {{0, 1, 0, false}};
    CHECK(std::abs(rooted_traffic_eval(r, H, false) - Complex(2)) < 1e-15);
    CHECK(std::abs(rooted_traffic_eval(r, H, true) - Complex(2)) < 1e-15);

    TestGraph single;
    single.root = 0;
    CHECK(std::abs(rooted_traffic_eval(r, single, false) - Complex(1)) < 1e-15);

    RootedGraph iso{MarkedGraph(1), 0, 1};
    CHECK(std::abs(rooted_traffic_eval(iso, H, true)) == 0.0);
}

TEST_CASE("set partitions and Mobius inversion") {
    CHECK(set_partitions(1).size() == 1);
    CHECK(set_partitions(4).size() == 15);
    CHECK(set_partitions(6).size() == 203);
    CHECK(refines({0, 1, 2}, {0, 0, 1}));
    CHECK_FALSE(refines({0, 0, 1}, {0, 1, 1}));

    Rng rng = make_rng(82);
    Matrices Y{random_hermitian(rng, 6)};
    for (int t = 0; t < 20; ++t) {
        const int v = 1 + t % 4;
        TestGraph H = random_test_graph(rng, v, 2 + t % 3, 1);
        PartitionTable tau0, tau;
        for (const auto& p : set_partitions(v)) {
            tau0[p] = traffic_eval_injective(Y, quotient(H, p));
            tau[p] = traffic_eval(Y, quotient(H, p));
        }
        auto fwd = mobius_forward(tau0, v);
        auto back = mobius_inverse(fwd, v);
        for (const auto& [p, x] : tau0) {
            CHECK(std::abs(fwd[p] - tau[p]) < 1e-12);
            CHECK(std::abs(back[p] - x) < 1e-12);
        }
        if (v == 1) CHECK(std::abs(fwd.begin()->second - tau0.begin()->second) == 0.0);
    }
}

TEST_CASE("quotients") {
    TestGraph e;
    e.vertices = 2;
    e.edges = {{0, 1, 0, false}};
    TestGraph id = quotient(e, {0, 1});
    CHECK(id.vertices == 2);
    TestGraph loop = quotient(e, {0, 0});
    CHECK(loop.vertices == 1);
    CHECK(loop.edges[0].from == loop.edges[0].to);

    TestGraph p;
    p.vertices = 3;
    p.edges = {{0, 1, 0, false}, {1, 2, 0, false}};
    TestGraph q = quotient(p, {0, 1, 0});
    CHECK(q.vertices == 2);
    CHECK(q.is_cycle());
}

TEST_CASE("chromatic skeleton") {
    MarkedGraph g(2, MarkSpace{Involution::identity(2), {}});
    g.add_edge(0, 1, Mark(0, {2.0, 0.0}));
    TestGraph s = chromatic_skeleton(g);
    REQUIRE(s.edges.size() == 1);
    CHECK(s.edges[0].label == 0);

    MarkedGraph h(2, MarkSpace{Involution::identity(2), {}});
    h.add_edge(0, 1, Mark(0, {2.0, 3.0}));
    CHECK(chromatic_skeleton(h).edges.size() == 2);
    CHECK(chromatic_skeleton(MarkedGraph(3)).edges.empty());
}

TEST_CASE("colored components") {
    auto first = [](int l) { return l == 0; };
    TestGraph mono = cycle(4);
    auto m = colored_components(mono, first);
    CHECK(m.edges.size() == 1);
    CHECK(m.is_tree);

    TestGraph path2;
    path2.vertices = 3;
    path2.edges = {{0, 1, 0, false}, {1, 2, 1, false}};
    auto p = colored_components(path2, first);
    CHECK(p.edges.size() == 2);
    CHECK(p.is_tree);

    TestGraph alt;
    alt.vertices = 4;
    alt.edges = {{0, 1, 0, false}, {1, 2, 1, false}, {2, 3, 0, false}, {3, 0, 1, false}};
    CHECK_FALSE(colored_components(alt, first).is_tree);
}

namespace {

RootedGraph single_edge(double x) {
    MarkedGraph g(2);
    g.add_edge(0, 1, Mark(x));
    return {g, 0, 1};
}

}  // namespace

TEST_CASE("free products of deterministic laws") {
    Rng rng = make_rng(83);
    auto iso = [](Rng&, int) { return RootedGraph{MarkedGraph(1), 0, 0}; };
    RootedGraph z = free_product_sample(iso, iso, 4, rng);
    CHECK(z.graph.n() == 1);

    const double a = 2.0, b = 3.0;
    auto ea = [&](Rng&, int) { return single_edge(a); };
    auto eb = [&](Rng&, int) { return single_edge(b); };
    const int h = 4;
    RootedGraph g = free_product_sample(ea, eb, h, rng);
    CHECK(g.graph.degree(g.root) == 2);
    CHECK(g.graph.num_edges() == static_cast<std::size_t>(2 * h));  // two alternating arms of length h
    CHECK(g.graph.is_forest());

    // two-edge path j1 then j2 from the root: lhs = rhs = a b
    TestGraph H;
    H.vertices = 3;
    H.root = 0;
    H.edges = {{0, 1, 0, false}, {1, 2, 1, false}};
    auto chk = traffic_freeness_check(g, single_edge(a), single_edge(b), H, 1);
    CHECK(chk.equal);
    CHECK(std::abs(chk.lhs - Complex(a * b)) < 1e-12);

    TestGraph alt;
    alt.vertices = 4;
    alt.root = 0;
    alt.edges = {{0, 1, 0, false}, {1, 2, 1, false}, {2, 3, 0, false}, {3, 0, 1, false}};
    auto c2 = traffic_freeness_check(g, single_edge(a), single_edge(b), alt, 1);
    CHECK_FALSE(c2.gcc_tree);
    CHECK(std::abs(c2.lhs) == 0.0);
    CHECK(c2.equal);

    TestGraph only1;
    only1.vertices = 2;
    only1.root = 0;
    only1.edges = {{0, 1, 0, false}, {1, 0, 0, false}};
    auto c3 = traffic_freeness_check(g, single_edge(a), single_edge(b), only1, 1);
    CHECK(c3.equal);
    CHECK(std::abs(c3.lhs - rooted_traffic_eval(single_edge(a), only1, true)) < 1e-12);
}
