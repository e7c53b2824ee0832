#include <doctest.h>

#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "htrm/limits.hpp"

using namespace htrm;

namespace {

double chi_square_p(const std::map<int, long>& a, const std::map<int, long>& b) {
    // two-sample homogeneity, cells with fewer than 10 pooled counts merged
    std::map<int, std::pair<long, long>> cells;
    for (const auto& [k, c] : a) cells[k].first += c;
    for (const auto& [k, c] : b) cells[k].second += c;
    std::vector<std::pair<long, long>> pooled;
    std::pair<long, long> rest{0, 0};
    for (const auto& [k, c] : cells) {
        if (c.first + c.second < 10) {
            rest.first += c.first;
            rest.second += c.second;
        } else {
            pooled.push_back(c);
        }
    }
    if (rest.first + rest.second > 0) pooled.push_back(rest);
    double na = 0, nb = 0;
    for (const auto& c : pooled) na += static_cast<double>(c.first), nb += static_cast<double>(c.second);
    double chi = 0;
    for (const auto& c : pooled) {
        const double t = static_cast<double>(c.first + c.second);
        const double ea = t * na / (na + nb), eb = t * nb / (na + nb);
        chi += std::pow(static_cast<double>(c.first) - ea, 2) / ea + std::pow(static_cast<double>(c.second) - eb, 2) / eb;
    }
    if (pooled.size() < 2) return 1.0;
    boost::math::chi_squared dist(static_cast<double>(pooled.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, chi));
}

}  // namespace

TEST_CASE("size-biased degree laws") {
    DegreeLaw hat = size_biased(degree_dirac(3), 0);
    CHECK(hat.pmf.size() == 1);
    CHECK(hat.pmf.begin()->first == std::vector<int>{2});

    ExactDegreeLaw mix;
    mix.pmf[{1}] = Rational(1, 2);
    mix.pmf[{3}] = Rational(1, 2);
    auto sb = size_biased(mix, 0);
    CHECK(sb.pmf[{0}] == Rational(1, 4));
    CHECK(sb.pmf[{2}] == Rational(3, 4));
    CHECK(sb.total() == Rational(1));

    DegreeLaw poi = degree_poisson(2.5, 1e-14);
    DegreeLaw sp = size_biased(poi, 0);
    double worst = 0;
    for (const auto& [k, w] : poi.pmf)
        if (k[0] + 1 < poi.cap) worst = std::max(worst, std::abs(sp.pmf[k] - w));
    CHECK(worst < 1e-10);
    CHECK(check_degree_law(poi).empty());
}

TEST_CASE("Poisson truncation records its cap") {
    DegreeLaw p = degree_poisson(1.0, 1e-12);
    CHECK(p.cap > 0);
    CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-15));
    boost::math::poisson_distribution<double> P(1.0);
    CHECK(boost::math::cdf(boost::math::complement(P, p.cap)) < 1e-12);

    DegreeLaw m = degree_poisson_multi({1.0, 0.5});
    CHECK(m.colors == 2);
    auto d = m.means();
    CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("multivariate Poisson pmf") {
    CHECK(poisson_multivariate_pmf({1.0, 2.0}, {0, 0}) == doctest::Approx(std::exp(-3.0)));
    CHECK(poisson_multivariate_pmf({0.0}, {0}) == 1.0);
    CHECK(poisson_multivariate_pmf({1.0, 2.0}, {1, 1}) == doctest::Approx(std::exp(-3.0) * 2.0));
}

TEST_CASE("deterministic UGW trees") {
    RootedGraph t = sample_ugw(MarkLaw::dirac(1.0), degree_dirac(3), 4, 7);
    // 1 + 3 + 6 + 12 + 24
    CHECK(t.graph.n() == 46);
    CHECK(t.graph.degree(t.root) == 3);
    RootedGraph t2 = sample_ugw(MarkLaw::dirac(1.0), degree_dirac(3), 4, 8);
    CHECK(canonical_form(t, Quantizer()).encoding == canonical_form(t2, Quantizer()).encoding);

    RootedGraph iso = sample_ugw(MarkLaw::dirac(1.0), degree_dirac(0), 5, 1);
    CHECK(iso.graph.n() == 1);
}

TEST_CASE("UGW root degree follows pi") {
    const DegreeLaw pi = degree_poisson(2.0);
    std::map<int, long> seen;
    const int N = 4000;
    Rng rng = make_rng(31);
    for (int i = 0; i < N; ++i) ++seen[sample_ugw({MarkLaw::dirac(1.0)}, pi, 1, rng).graph.degree(0)];
    double chi = 0;
    int cells = 0;
    double tail_e = N, tail_o = N;
    for (int k = 0; k <= 5; ++k) {
        const double e = N * pi.pmf.at({k});
        chi += std::pow(static_cast<double>(seen[k]) - e, 2) / e;
        tail_e -= e;
        tail_o -= static_cast<double>(seen[k]);
        ++cells;
    }
    chi += std::pow(tail_o - tail_e, 2) / tail_e;
    boost::math::chi_squared dist(cells);
    CHECK(boost::math::cdf(boost::math::complement(dist, chi)) > 1e-3);
}

TEST_CASE("PWIT with finite intensity matches UGW") {
    const MarkLaw gamma = MarkLaw::point_masses({{-1.0, 0.25}, {1.0, 0.25}, {2.0, 0.5}});
    const IntensityMeasure L = IntensityMeasure::finite(1.5, gamma);
    const DegreeLaw pi = degree_poisson(1.5);
    std::map<int, long> a, b, ma, mb;
    Rng r1 = make_rng(41), r2 = make_rng(42);
    for (int i = 0; i < 3000; ++i) {
        RootedGraph p = sample_pwit(L, 2, 1e-9, r1);
        RootedGraph u = sample_ugw({gamma}, pi, 2, r2);
        ++a[p.graph.n()];
        ++b[u.graph.n()];
        if (p.graph.degree(0) > 0) ++ma[static_cast<int>(std::abs(p.graph.mark_out(0, p.graph.adj(0)[0]).value[0]) * 2)];
        double top = 0;
        for (const auto& h : u.graph.adj(0)) top = std::max(top, std::abs(u.graph.mark_out(0, h).value[0]));
        if (top > 0) ++mb[static_cast<int>(top * 2)];
    }
    CHECK(chi_square_p(a, b) > 1e-3);
    // the first PWIT child carries the largest norm
    CHECK(chi_square_p(ma, mb) > 1e-3);
}

TEST_CASE("stable PWIT children") {
    const IntensityMeasure L = IntensityMeasure::stable(1.0, 0.5, 1.0);
    CHECK(L.mass_above(1.0) == doctest::Approx(1.0));
    CHECK(L.mass_above(0.5) == doctest::Approx(2.0));
    Rng rng = make_rng(51);
    double total = 0;
    const int N = 20000;
    for (int i = 0; i < N; ++i) {
        auto c = pwit_children(L, 1.0, rng);
        for (std::size_t j = 1; j < c.size(); ++j) CHECK(std::abs(c[j]) <= std::abs(c[j - 1]));
        total += static_cast<double>(c.size());
    }
    CHECK(std::abs(total / N - 1.0) < 4 * std::sqrt(1.0 / N));

    RootedGraph big = sample_pwit(L, 3, 1e6, rng);
    CHECK(big.graph.n() == 1);
}

TEST_CASE("thinning: epsilon truncation of a finer PWIT") {
    // PWIT(Lambda) cut at eps is UGW(Lambda_eps, Poi(d_eps)); compare root degrees after truncation
    const IntensityMeasure L = IntensityMeasure::stable(1.2, 0.5, 1.0);
    std::map<int, long> thin, direct;
    Rng r1 = make_rng(61), r2 = make_rng(62);
    for (int i = 0; i < 3000; ++i) {
        RootedGraph fine = sample_pwit(L, 1, 0.4, r1);
        MarkedGraph cut = epsilon_truncate(fine.graph, 0.8);
        ++thin[cut.degree(fine.root)];
        ++direct[sample_pwit(L, 1, 0.8, r2).graph.degree(0)];
    }
    CHECK(chi_square_p(thin, direct) > 1e-3);
}

TEST_CASE("exact truncated UGW laws") {
    const DegreeLaw pi = degree_from_pmf({0.25, 0.25, 0.5});
    TruncatedLaw t = ugw_truncated_law(MarkLaw::dirac(1.0), pi, 2, 100);
    CHECK(t.dropped == 0.0);
    CHECK(t.law.total() == doctest::Approx(1.0));
    CHECK(unimodularity_defect(t.law) < 1e-15);
    // mean degree is E pi = 1.25
    CHECK(t.law.mean_degree() == doctest::Approx(1.25));
    // hat pi = (1/5, 4/5) on {0, 1}: a root of degree 2 with two leaf children has mass 1/2 * 1/25
    double leafy = 0;
    for (const auto& [k, a] : t.law.atoms)
        if (root_degree(a.first) == 2 && a.first.representative.graph.n() == 3) leafy += a.second;
    CHECK(leafy == doctest::Approx(0.5 / 25));
}
