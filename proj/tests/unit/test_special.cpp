#include <doctest.h>

#include <cmath>

#include "qrisk/errors.hpp"
#include "qrisk/special.hpp"

using namespace qrisk;

namespace {

// High-precision reference values (40-digit arithmetic), frozen.
struct GammaCase {
    double a, x, q;
};
constexpr GammaCase kGammaCases[] = {
    {0.5, 0.25, 0.47950012218695346},
    {1.0, 1.0, 0.36787944117144232},
    {2.5, 0.5, 0.96256577324729637},
    {5.0, 10.0, 0.029252688076961073},
    {10.0, 3.0, 0.99889751186988452},
    {50.0, 55.0, 0.23220478050085633},
    {0.5, 12.0, 9.6335700864309459e-7},
    {125.0, 100.0, 0.99122640101132676},
    {7.5, 7.5, 0.45141721122572524},
};

}  // namespace

TEST_CASE("regularized incomplete gamma matches high-precision reference") {
    for (const auto& c : kGammaCases) {
        CHECK(special::gamma_q(c.a, c.x) == doctest::Approx(c.q).epsilon(1e-12));
        CHECK(special::gamma_p(c.a, c.x) == doctest::Approx(1.0 - c.q).epsilon(1e-10));
    }
    CHECK(special::gamma_q(3.0, 0.0) == 1.0);
    CHECK(special::gamma_p(3.0, 0.0) == 0.0);
    CHECK(special::gamma_q(3.0, 1e-8) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chi-square upper tail") {
    CHECK(special::chi_square_upper(37.234, 10) == doctest::Approx(5.1553324486983163e-5).epsilon(1e-10));
    CHECK(special::chi_square_upper(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(special::chi_square_upper(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(special::chi_square_upper(0.1, 2) == doctest::Approx(0.95122942450071401).epsilon(1e-12));
    CHECK(special::chi_square_upper(0.0, 5) == 1.0);
    CHECK(special::chi_square_upper(-1.0, 5) == 1.0);
}

TEST_CASE("normal tail probabilities") {
    CHECK(special::norm_upper(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(special::norm_upper(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
    CHECK(special::norm_upper(-2.5) == doctest::Approx(0.99379033467422386).epsilon(1e-12));
    CHECK(special::norm_upper(3.0) == doctest::Approx(0.0013498980316300945).epsilon(1e-12));
    CHECK(special::norm_upper(5.0) == doctest::Approx(2.8665157187919391e-7).epsilon(1e-12));
    CHECK(special::norm_cdf(1.0) == doctest::Approx(1.0 - 0.15865525393145705).epsilon(1e-12));
}

TEST_CASE("inverse normal CDF") {
    CHECK(special::norm_inv(0.5) == 0.0);
    CHECK(special::norm_inv(0.975) == doctest::Approx(1.9599639845400542).epsilon(1e-14));
    CHECK(special::norm_inv(0.025) == doctest::Approx(-1.9599639845400542).epsilon(1e-14));
    CHECK(special::norm_inv(1e-6) == doctest::Approx(-4.7534243088228989).epsilon(1e-13));
    CHECK(special::norm_inv(0.3) == doctest::Approx(-0.52440051270804078).epsilon(1e-14));
    CHECK(special::norm_inv(0.9999) == doctest::Approx(3.7190164854556806).epsilon(1e-13));
    CHECK_THROWS_AS(special::norm_inv(0.0), DomainError);
    CHECK_THROWS_AS(special::norm_inv(1.0), DomainError);
}

TEST_CASE("inverse normal round-trips through the CDF") {
    for (double p : {1e-8, 1e-4, 0.01, 0.2, 0.5, 0.8, 0.99, 0.9999, 1.0 - 1e-8}) {
        const double z = special::norm_inv(p);
        CHECK(special::norm_cdf(z) == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("incomplete gamma complements sum to one") {
    for (double a : {0.3, 1.0, 4.2, 33.0}) {
        for (double x : {0.01, 0.7, 3.0, 40.0}) {
            CHECK(special::gamma_p(a, x) + special::gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}
