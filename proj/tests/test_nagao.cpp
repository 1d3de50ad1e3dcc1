#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "thetarank/nagao.hpp"
#include "thetarank/pointcount.hpp"

using namespace thetarank;

namespace {

const ThetaParams kPi3 = ThetaParams::pi_over_3();

// S(N, E) from brute-force counts over F_p^2, good p only.
double brute_sum(const CurveQ& e, std::uint32_t bound) {
    double s = 0;
    for (std::uint32_t p : primes_below(bound)) {
        if (!has_good_reduction(e, std::uint64_t{p})) continue;
        const BigInt pb = p;
        const long a2 = BigInt(((e.a2 % pb) + pb) % pb).get_si(), a4 = BigInt(((e.a4 % pb) + pb) % pb).get_si();
        long np = 1;
        for (long x = 0; x < p; ++x)
            for (long y = 0; y < p; ++y) np += (y * y - (x * x * x + a2 * x * x + a4 * x)) % static_cast<long>(p) == 0;
        const long ap = static_cast<long>(p) + 1 - np;
        s += (2.0 - static_cast<double>(ap)) / static_cast<double>(np) * std::log(static_cast<double>(p));
    }
    return s;
}

}  // namespace

TEST_CASE("small sums") {
    const CurveQ e6 = build_curve(6, kPi3);
    CHECK(nagao_sum(e6, 3) == 0.0);
    CHECK(nagao_sum(e6, 6) == doctest::Approx(0.5 * std::log(5.0)).epsilon(1e-15));
    CHECK(nagao_sum(e6, 6, NagaoForm::point_count) == doctest::Approx(0.5 * std::log(5.0)).epsilon(1e-15));
    for (long n : {1L, 6L, 646L}) {
        const CurveQ e = build_curve(n, kPi3);
        CHECK(nagao_sum(e, 300) == doctest::Approx(brute_sum(e, 300)).epsilon(1e-12));
    }
}

TEST_CASE("the two forms agree on random curves") {
    std::mt19937_64 rng(50);
    std::uniform_int_distribution<long> dist(1, 100000000);
    const std::vector<ThetaParams> thetas = {kPi3, ThetaParams::two_pi_over_3(), ThetaParams(3, 1), ThetaParams(5, -2)};
    int done = 0;
    while (done < 50) {
        const BigInt n = dist(rng);
        if (!is_squarefree(n)) continue;
        const CurveQ e = build_curve(n, thetas[done % thetas.size()]);
        const double a = nagao_sum(e, 200, NagaoForm::trace), b = nagao_sum(e, 200, NagaoForm::point_count);
        CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
        ++done;
    }
}

TEST_CASE("sums are deterministic") {
    const CurveQ e = build_curve(BigInt("11229594411"), kPi3);
    const double first = nagao_sum(e, 20000);
    for (int i = 0; i < 3; ++i) CHECK(nagao_sum(e, 20000) == first);
}

TEST_CASE("sieve configuration") {
    const SieveConfig def;
    REQUIRE(def.stages().size() == 3);
    CHECK(def.stages()[0] == SieveStage{1000, 15});
    CHECK(def.stages()[1] == SieveStage{10000, 20});
    CHECK(def.stages()[2] == SieveStage{100000, 40});
    CHECK(SieveConfig::parse(def.to_string()).stages() == def.stages());
    CHECK(SieveConfig::parse("1000:15, 10000:20").stages().size() == 2);
    CHECK(SieveConfig::parse("500:-inf").stages()[0].threshold == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(SieveConfig::parse("1000:15,1000:20"), std::invalid_argument);
    CHECK_THROWS_AS(SieveConfig::parse("10000:15,1000:20"), std::invalid_argument);
    CHECK_THROWS_AS(SieveConfig::parse("1000:nan"), std::invalid_argument);
    CHECK_THROWS_AS(SieveConfig::parse("1000:inf"), std::invalid_argument);
    CHECK_THROWS_AS(SieveConfig::parse("1:5"), std::invalid_argument);
    CHECK_THROWS_AS(SieveConfig::parse("1000"), std::invalid_argument);
}

TEST_CASE("staged filter") {
    const CurveQ rank7 = build_curve(BigInt("365803464586"), kPi3);
    CHECK(nagao_sum(rank7, 1000) > 15);
    const FilterResult r7 = passes_filter(rank7, SieveConfig());
    CHECK(r7.passed);
    REQUIRE(r7.values.size() == 3);
    for (const auto& v : r7.values) {
        CHECK(v.passed);
        CHECK(v.value == nagao_sum(rank7, v.bound));  // incremental sum, same order
    }

    const CurveQ e1 = build_curve(1, kPi3);
    const FilterResult r1 = passes_filter(e1, SieveConfig());
    CHECK_FALSE(r1.passed);
    REQUIRE(r1.values.size() == 1);  // later stages never evaluated
    CHECK_FALSE(r1.values[0].passed);
    CHECK(r1.values[0].value < 15);

    const double inf = std::numeric_limits<double>::infinity();
    const SieveConfig permissive({{100, -inf}, {1000, -inf}});
    for (long n : {1L, 2L, 3L, 5L, 646L}) CHECK(passes_filter(build_curve(n, kPi3), permissive).passed);

    // A failing middle stage stops evaluation there.
    const SieveConfig strict({{1000, -inf}, {2000, 1e9}, {3000, -inf}});
    const FilterResult mid = passes_filter(rank7, strict);
    CHECK_FALSE(mid.passed);
    CHECK(mid.values.size() == 2);
}
