#include <doctest.h>

#include <cmath>
#include <random>

#include "htrm/entropy.hpp"

using namespace htrm;

namespace {

NeighborhoodLaw law_of(const MarkedGraph& g, int h) { return to_float(neighborhood_distribution(g, h, Quantizer())); }

MarkedGraph single_edge(double x) {
    MarkedGraph g(2);
    g.add_edge(0, 1, Mark(x));
    return g;
}

MarkedGraph random_tree(Rng& rng, int n) {
    MarkedGraph g(n);
    for (int v = 1; v < n; ++v) g.add_edge(static_cast<int>(rng() % static_cast<unsigned>(v)), v, Mark(0.0));
    return g;
}

std::vector<double> mean_vector(const NeighborhoodLaw& mu) { return {mu.mean_degree()}; }

}  // namespace

TEST_CASE("Shannon entropy and KL") {
    FiniteLaw<int> fair{{0, 0.5}, {1, 0.5}}, biased{{0, 0.25}, {1, 0.75}}, one{{0, 1.0}};
    CHECK(shannon(fair) == doctest::Approx(std::log(2.0)));
    CHECK(shannon(one) == 0.0);
    CHECK(kl(fair, fair) == 0.0);
    CHECK(kl(one, fair) == doctest::Approx(std::log(2.0)));
    CHECK(kl(fair, one) == kInf);
    CHECK(kl(fair, biased) == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)));
    CHECK(conditional_shannon(fair, [](int) { return 0; }) == doctest::Approx(std::log(2.0)));
    CHECK(conditional_shannon(fair, [](int k) { return k; }) == doctest::Approx(0.0));
}

TEST_CASE("KL of a degree law against Poisson") {
    DegreeVectorLaw two{{{2}, 1.0}};
    auto r = kl_deg_poisson(two, {2.0});
    CHECK(r.value == doctest::Approx(2.0 - std::log(2.0)));
    CHECK(r.closed_form == doctest::Approx(r.value));
    CHECK(r.mean_match);
    CHECK_FALSE(kl_deg_poisson(two, {1.0}).mean_match);

    Rng rng = make_rng(90);
    std::uniform_real_distribution<double> u(0.05, 1);
    for (int t = 0; t < 50; ++t) {
        DegreeVectorLaw D;
        double s = 0;
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; b <= 1 + t % 3; ++b) s += D[{a, b}] = u(rng);
        std::vector<double> d(2, 0.0);
        for (auto& [k, w] : D) {
            w /= s;
            d[0] += w * k[0];
            d[1] += w * k[1];
        }
        auto x = kl_deg_poisson(D, d);
        CHECK(x.mean_match);
        CHECK(x.value >= 0.0);
        CHECK(x.closed_form == doctest::Approx(x.value).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("Sigma0 basics") {
    const DegreeLaw pi = degree_from_pmf({0.25, 0.25, 0.5});
    TruncatedLaw one = ugw_truncated_law(MarkLaw::dirac(1.0), pi, 1, 100);
    auto s1 = sigma0(one.law, {1.25}, 1);
    CHECK(s1.finite());
    CHECK(s1.value == doctest::Approx(kl_deg_poisson(root_degree_law(one.law, 1), {1.25}).value));

    const DegreeLaw poi = degree_poisson(1.0, 1e-4);
    TruncatedLaw t = ugw_truncated_law(MarkLaw::dirac(1.0), poi, 2, 1 + poi.cap * poi.cap);
    auto s = sigma0(t.law, mean_vector(t.law), 2);
    CHECK(s.finite());
    CHECK(s.value >= -1e-12);
    CHECK(s.value <= 0.02);

    MarkedGraph K3(3);
    K3.add_edge(0, 1, Mark(1.0));
    K3.add_edge(1, 2, Mark(1.0));
    K3.add_edge(2, 0, Mark(1.0));
    auto tri = sigma0(law_of(K3, 2), {2.0}, 2);
    CHECK_FALSE(tri.finite());
    CHECK_FALSE(tri.flags.tree_support);
}

TEST_CASE("edge-rooted Sigma0") {
    const DegreeLaw poi = degree_poisson(1.0, 1e-4);
    TruncatedLaw t2 = ugw_truncated_law(MarkLaw::dirac(1.0), poi, 2, 1 + poi.cap * poi.cap);
    auto v2 = vec_sigma0(edge_root(t2.law), mean_vector(t2.law), 2);
    CHECK(v2.finite());
    CHECK(std::abs(v2.value) <= 0.02);
    TruncatedLaw t3 = ugw_truncated_law(MarkLaw::dirac(1.0), degree_from_pmf({0.25, 0.25, 0.5}), 3, 100);
    auto v3 = vec_sigma0(edge_root(t3.law), mean_vector(t3.law), 3);
    CHECK(v3.finite());
    // only the degree term survives away from Poisson
    const double kd = kl_deg_poisson(root_degree_law(t3.law, 1), mean_vector(t3.law)).value;
    CHECK(v3.value == doctest::Approx(kd).epsilon(1e-9));

    Rng rng = make_rng(91);
    double best = 0;
    for (int i = 0; i < 30; ++i) {
        MarkedGraph T = random_tree(rng, 3 + i % 10);
        const int h = 2 + i % 2;
        NeighborhoodLaw mu = law_of(T, h);
        auto d = mean_vector(mu);
        auto s = sigma0(mu, d, h), v = vec_sigma0(edge_root(mu), d, h);
        REQUIRE(s.finite());
        REQUIRE(v.finite());
        CHECK(s.value - v.value >= -1e-9);
        best = std::max(best, s.value - v.value);
    }
    CHECK(best > 1e-3);

    // root edge mass on one side only: the law cannot come from a graph
    EdgeRootedLaw lop = edge_root(law_of(single_edge(1.0), 2));
    auto bad = vec_sigma0(lop, {3.0}, 2);
    CHECK_FALSE(bad.finite());
}

TEST_CASE("Sigma1 for discrete marks") {
    const MarkLaw coin = MarkLaw::point_masses({{-1.0, 0.5}, {1.0, 0.5}});
    auto e = sigma1_discrete(law_of(single_edge(1.0), 2), {coin}, {1.0}, 2);
    CHECK(e.value == doctest::Approx(std::log(2.0) / 2));

    TruncatedLaw t = ugw_truncated_law(coin, degree_from_pmf({0.25, 0.25, 0.5}), 2, 100);
    auto iid = sigma1_discrete(t.law, {coin}, {1.25}, 2);
    CHECK(iid.value == doctest::Approx(0.0).scale(1.0));

    auto out = sigma1_discrete(law_of(single_edge(1.0), 2), {MarkLaw::dirac(2.0)}, {1.0}, 2);
    CHECK_FALSE(out.finite());
    CHECK_FALSE(out.flags.marks_in_support);
}

TEST_CASE("edge-count rates") {
    CHECK(j_d(2.0, 2.0) == 0.0);
    CHECK(j_d(2.0, 1.0) == doctest::Approx(std::log(2.0) + 0.5));
    CHECK(j_d(0.0, 0.0) == 0.0);
    CHECK(j_d(1.0, 0.0) == kInf);
    CHECK(edge_count_rate(2.0, 2.0) == 0.0);
    CHECK(edge_count_rate(2.0, 3.0) == doctest::Approx(0.5 * (3 * std::log(1.5) - 1)));
    CHECK_THROWS_AS(j_d(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("mark rate I vanishes at d gamma") {
    const Quantizer q;
    const MarkSpace space;
    std::vector<std::pair<Mark, double>> gd{{Mark(1.0), 0.5}, {Mark(-1.0), 0.5}};
    std::vector<std::pair<Mark, double>> dm{{Mark(1.0), 1.0}, {Mark(-1.0), 1.0}};
    CHECK(I_delta_d(dm, {2.0}, gd, space, q) == doctest::Approx(0.0).scale(1.0));
    std::vector<std::pair<Mark, double>> skew{{Mark(1.0), 1.5}, {Mark(-1.0), 0.5}};
    const double want = 0.5 * (1.5 * std::log(1.5) + 0.5 * std::log(0.5));
    CHECK(I_delta_d(skew, {2.0}, gd, space, q) == doctest::Approx(want));
    std::vector<std::pair<Mark, double>> wrong_mass{{Mark(1.0), 1.0}};
    CHECK(I_delta_d(wrong_mass, {2.0}, gd, space, q) == kInf);
}

TEST_CASE("Erdos-Renyi rate") {
    const MarkLaw g = MarkLaw::dirac(1.0);
    const DegreeLaw poi = degree_poisson(1.0, 1e-4);
    TruncatedLaw t = ugw_truncated_law(g, poi, 2, 1 + poi.cap * poi.cap);
    auto at = sigma_er(t.law, g, 1.0, 2);
    CHECK(at.value >= -1e-12);
    CHECK(at.value <= 0.02);
    TruncatedLaw p = ugw_truncated_law(g, degree_from_pmf({0.5, 0.0, 0.5}), 2, 64);
    CHECK(sigma_er(p.law, g, 1.0, 2).value > 0.05);
}

TEST_CASE("discretized KL sweep") {
    const std::vector<double> deltas{0.5, 0.25, 0.125, 0.0625};
    for (const auto& e : discretized_kl_sweep(MarkLaw::gaussian(0, 1), MarkLaw::gaussian(0, 1), 8.0, deltas))
        CHECK(e.kl == doctest::Approx(0.0).scale(1.0));
    auto s = discretized_kl_sweep(MarkLaw::gaussian(0, 1), MarkLaw::gaussian(1, 1), 8.0, deltas);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].kl <= 0.5 + 1e-12);
        if (i) CHECK(s[i].kl >= s[i - 1].kl - 1e-12);
    }
    double total = 0;
    for (const auto& [k, w] : quantized_masses(MarkLaw::gaussian(0, 1), Quantizer(0.25, 4.0))) total += w;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("binomial log tail") {
    const long long N = 30;
    const double p = 0.2;
    for (long long k : {0LL, 3LL, 10LL, 30LL}) {
        double s = 0;
        for (long long j = k; j <= N; ++j)
            s += std::exp(std::lgamma(N + 1.0) - std::lgamma(j + 1.0) - std::lgamma(N - j + 1.0) + j * std::log(p) +
                          (N - j) * std::log1p(-p));
        CHECK(binomial_log_tail(N, p, k) == doctest::Approx(std::log(s)).epsilon(1e-9).scale(1.0));
    }
}
