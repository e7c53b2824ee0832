#include <doctest.h>

#include <random>

#include "htrm/local_law.hpp"
#include "htrm/parallel.hpp"

using namespace htrm;

namespace {

MarkedGraph cycle(int n) {
    MarkedGraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, Mark(1.0));
    return g;
}

MarkedGraph path(int n) {
    MarkedGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, Mark(1.0));
    return g;
}

MarkedGraph star(int leaves) {
    MarkedGraph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i, Mark(1.0));
    return g;
}

MarkedGraph random_colored(Rng& rng, int n, double p) {
    MarkedGraph g(n);
    std::uniform_real_distribution<double> u(0, 1);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (u(rng) < p) g.add_edge(a, b, Mark(u(rng) < 0.5 ? 0 : 1, {u(rng) < 0.5 ? 1.0 : 2.0}));
    return g;
}

template <class W>
std::map<int, W> degree_pmf(const BasicNeighborhoodLaw<W>& mu) {
    std::map<int, W> p;
    for (const auto& [k, a] : mu.atoms) p[root_degree(a.first)] += a.second;
    return p;
}

}  // namespace

TEST_CASE("neighborhood distributions of small graphs") {
    Quantizer q;
    auto c = neighborhood_distribution(cycle(7), 1, q);
    CHECK(c.atoms.size() == 1);
    CHECK(c.total() == Rational(1));

    auto p = neighborhood_distribution(path(3), 1, q);
    auto pm = degree_pmf(p);
    CHECK(pm[1] == Rational(2, 3));
    CHECK(pm[2] == Rational(1, 3));

    auto e = neighborhood_distribution(MarkedGraph(4), 2, q);
    CHECK(e.atoms.size() == 1);
    CHECK(root_degree(e.atoms.begin()->second.first) == 0);
}

TEST_CASE("edge neighborhood distributions") {
    Quantizer q;
    auto s = edge_neighborhood_distribution(path(2), 1, q);
    CHECK(s.atoms.size() == 1);  // both orientations are isomorphic
    CHECK(s.total() == Rational(1));

    auto p = edge_neighborhood_distribution(path(3), 2, q);
    for (const auto& [k, a] : p.atoms) CHECK((a.second * 4).convert_to<double>() == doctest::Approx(std::round((a.second * 4).convert_to<double>())));

    MarkedGraph k4(4);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b, Mark(1.0));
    CHECK(edge_neighborhood_distribution(k4, 1, q).atoms.size() == 1);
}

TEST_CASE("edge rooting of a star") {
    Quantizer q;
    auto mu = neighborhood_distribution(star(3), 2, q);
    CHECK(mu.mean_degree() == Rational(3, 2));
    auto nu = edge_root(mu);
    std::map<int, Rational> pv;
    for (const auto& [k, a] : nu.atoms) pv[origin_degree(a.first)] += a.second;
    CHECK(pv[1] == Rational(1, 2));
    CHECK(pv[3] == Rational(1, 2));

    auto c = edge_root(neighborhood_distribution(cycle(5), 2, q));
    for (const auto& [k, a] : c.atoms) CHECK(origin_degree(a.first) == 2);

    CHECK_THROWS(edge_root(neighborhood_distribution(MarkedGraph(3), 1, q)));
}

TEST_CASE("size bias, hat and dot") {
    Quantizer q;
    auto reg = neighborhood_distribution(cycle(6), 2, q);
    auto sb = size_bias(reg);
    REQUIRE(sb.atoms.size() == reg.atoms.size());
    for (const auto& [k, a] : reg.atoms) CHECK(sb.weight(k) == a.second);

    // deg == 1 everywhere, dbar = 1: p = 1 and dot = hat
    auto m = neighborhood_distribution(path(2), 2, q);
    auto nu = edge_root(m);
    CHECK(d_nu(nu) == Rational(1));
    auto h = hat(nu), dt = dot(nu, Rational(1));
    REQUIRE(h.atoms.size() == dt.atoms.size());
    for (const auto& [k, a] : h.atoms) CHECK(dt.weight(k) == a.second);
}

TEST_CASE("edge rooting identities on random colored graphs") {
    Quantizer q;
    Rng rng = make_rng(11);
    for (int t = 0; t < 30; ++t) {
        MarkedGraph g = random_colored(rng, 10, 0.25);
        if (g.num_edges() == 0) continue;
        const int h = 2 + t % 2;
        auto mu = neighborhood_distribution(g, h, q);
        auto nu = edge_root(mu);
        const Rational dbar = mu.mean_degree();

        auto pm = degree_pmf(mu);
        std::map<int, Rational> pv;
        for (const auto& [k, a] : nu.atoms) pv[origin_degree(a.first)] += a.second;
        for (const auto& [k, w] : pv) CHECK(w == Rational(k) * pm[k] / dbar);

        auto direct = edge_neighborhood_distribution(g, h, q);
        CHECK(direct.atoms.size() == nu.atoms.size());
        for (const auto& [k, a] : direct.atoms) CHECK(nu.weight(k) == a.second);

        auto back = dot(nu, dbar);
        auto want = restrict_law(mu, h - 1);
        CHECK(back.atoms.size() == want.atoms.size());
        for (const auto& [k, a] : want.atoms) CHECK(back.weight(k) == a.second);

        // root mark law d(b)/dbar
        std::map<int, Rational> d;
        for (const auto& e : g.edges()) d[e.fwd.color] += Rational(2, g.n());
        auto colors = root_color_law(nu);
        for (const auto& [b, w] : colors) CHECK(w == d[b] / dbar);

        CHECK(unimodularity_defect(mu) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(mu.total() == Rational(1));
    }
}

TEST_CASE("unimodularity defect detects a one-sided law") {
    Quantizer q;
    // root of degree 1 whose neighbor always has degree 2
    MarkedGraph g = path(3);
    NeighborhoodLaw mu;
    mu.depth = 2;
    mu.add(canonical_form(g, 0, 2, q), 1.0);
    CHECK(unimodularity_defect(mu) > 0.1);

    NeighborhoodLaw iso;
    iso.depth = 2;
    iso.add(canonical_form(MarkedGraph(1), 0, 2, q), 1.0);
    CHECK(unimodularity_defect(iso) == 0.0);
}

TEST_CASE("law accumulator merge is order independent") {
    Quantizer q;
    Rng rng = make_rng(12);
    std::vector<RootedNeighborhood> items;
    for (int i = 0; i < 40; ++i) {
        MarkedGraph g = random_colored(rng, 6, 0.4);
        items.push_back(canonical_form(g, 0, 2, q));
    }
    LawAccumulator all(2, q), a(2, q), b(2, q);
    for (std::size_t i = 0; i < items.size(); ++i) {
        all.add(items[i]);
        (i % 3 == 0 ? a : b).add(items[i]);
    }
    LawAccumulator ab = a, ba = b;
    ab.merge(b);
    ba.merge(a);
    auto x = all.law(), y = ab.law(), z = ba.law();
    CHECK(all.samples() == 40);
    REQUIRE(x.atoms.size() == y.atoms.size());
    for (const auto& [k, at] : x.atoms) {
        CHECK(y.weight(k) == at.second);
        CHECK(z.weight(k) == at.second);
    }
}
