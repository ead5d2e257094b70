#include <doctest.h>

#include <cmath>

#include "csrp/airy.hpp"
#include "csrp/errors.hpp"

using namespace csrp;

TEST_CASE("Gauss-Hermite rules integrate monomials against e^{-x^2}") {
    std::vector<double> nodes, weights;
    gauss_hermite(12, nodes, weights);
    const double spi = std::sqrt(3.14159265358979323846);
    double m0 = 0, m2 = 0, m4 = 0, m1 = 0;
    for (int i = 0; i < 12; ++i) {
        m0 += weights[i];
        m1 += weights[i] * nodes[i];
        m2 += weights[i] * nodes[i] * nodes[i];
        m4 += weights[i] * std::pow(nodes[i], 4);
    }
    CHECK(m0 == doctest::Approx(spi).epsilon(1e-13));
    CHECK(std::abs(m1) < 1e-14);
    CHECK(m2 == doctest::Approx(0.5 * spi).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(0.75 * spi).epsilon(1e-13));
}

TEST_CASE("lambda = 0 closed form: quadrature exact, Monte Carlo exact") {
    const auto lie = load_preset("su2");
    for (int g : {1, 2}) {  // D = 3, 6
        const auto spec = canonical_preset(g, lie);
        const double closed = airy_closed_form_lambda0(spec, lie);

        AiryConfig quad;
        quad.method = AiryMethod::gauss_quadrature;
        quad.lambda = 0.0;
        quad.order = 8;
        const auto rq = airy_value(spec, lie, quad);
        CHECK(std::abs(rq.value.real() - closed) <= 1e-10 * closed);
        CHECK(std::abs(rq.value.imag()) <= 1e-12 * closed);

        AiryConfig mc;
        mc.method = AiryMethod::monte_carlo;
        mc.lambda = 0.0;
        mc.samples = 20000;
        mc.seed = 5;
        const auto rm = airy_value(spec, lie, mc);
        // the importance-sampled integrand is constant at lambda = 0
        CHECK(std::abs(rm.value.real() - closed) <= 3.0 * rm.std_error + 1e-9 * closed);
    }
}

TEST_CASE("Monte Carlo is deterministic per seed and conjugate under lambda -> -lambda") {
    const auto lie = load_preset("su2");
    const auto spec = canonical_preset(1, lie);
    AiryConfig cfg;
    cfg.method = AiryMethod::monte_carlo;
    cfg.samples = 40000;
    cfg.seed = 11;
    cfg.lambda = 0.6;

    const auto a = airy_value(spec, lie, cfg);
    const auto b = airy_value(spec, lie, cfg);
    CHECK(a.value.real() == b.value.real());
    CHECK(a.value.imag() == b.value.imag());
    CHECK(a.std_error == b.std_error);

    AiryConfig neg = cfg;
    neg.lambda = -0.6;
    const auto c = airy_value(spec, lie, neg);
    CHECK(c.value.real() == a.value.real());
    CHECK(c.value.imag() == -a.value.imag());
}

TEST_CASE("dual-method agreement at nonzero lambda (D = 3)") {
    const auto lie = load_preset("su2");
    const auto spec = canonical_preset(1, lie);  // N = 0: phase trivial, det varies

    AiryConfig quad;
    quad.method = AiryMethod::gauss_quadrature;
    quad.lambda = 0.8;
    quad.order = 20;
    const auto rq = airy_value(spec, lie, quad);

    AiryConfig mc = quad;
    mc.method = AiryMethod::monte_carlo;
    mc.samples = 200000;
    mc.seed = 3;
    const auto rm = airy_value(spec, lie, mc);

    CHECK(std::abs(rm.value.real() - rq.value.real()) <= 3.5 * rm.std_error);
    CHECK(std::abs(rm.value.imag() - rq.value.imag()) <= 3.5 * rm.std_error);
}

TEST_CASE("quadrature order refinement below 1e-8 at lambda <= 1") {
    const auto lie = load_preset("su2");
    const auto spec = canonical_preset(1, lie);
    AiryConfig cfg;
    cfg.method = AiryMethod::gauss_quadrature;
    cfg.lambda = 1.0;
    cfg.order = 20;
    const auto r = airy_value(spec, lie, cfg);
    CHECK(r.refine_delta < 1e-8 * std::max(1.0, std::abs(r.value)));
}

TEST_CASE("MC unbiasedness: truth inside the 99% interval in >= 27 of 30 batches") {
    const auto lie = load_preset("su2");
    const auto spec = canonical_preset(1, lie);

    AiryConfig quad;
    quad.method = AiryMethod::gauss_quadrature;
    quad.lambda = 0.3;
    quad.order = 20;
    const std::complex<double> truth = airy_value(spec, lie, quad).value;

    int inside = 0;
    for (int batch = 0; batch < 30; ++batch) {
        AiryConfig mc;
        mc.method = AiryMethod::monte_carlo;
        mc.lambda = 0.3;
        mc.samples = 8000;
        mc.seed = 1000 + batch;
        const auto r = airy_value(spec, lie, mc);
        const double z = std::abs(r.value - truth) / std::max(r.std_error, 1e-300);
        if (z <= 2.576) ++inside;
    }
    CHECK(inside >= 27);

    // lambda = 0 variant: zero-variance estimator always covers
    const double closed = airy_closed_form_lambda0(spec, lie);
    int inside0 = 0;
    for (int batch = 0; batch < 30; ++batch) {
        AiryConfig mc;
        mc.method = AiryMethod::monte_carlo;
        mc.lambda = 0.0;
        mc.samples = 2000;
        mc.seed = 2000 + batch;
        const auto r = airy_value(spec, lie, mc);
        if (std::abs(r.value.real() - closed) <= 2.576 * r.std_error + 1e-9 * closed)
            ++inside0;
    }
    CHECK(inside0 == 30);
}

TEST_CASE("sweep rows and capacity limits") {
    const auto lie = load_preset("su2");
    const auto spec = canonical_preset(1, lie);
    AiryConfig cfg;
    cfg.method = AiryMethod::monte_carlo;
    cfg.samples = 1000;
    const auto rows = airy_sweep(spec, lie, {0.0, 0.5}, cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].lambda == 0.0);
    CHECK(rows[1].lambda == 0.5);
    CHECK(airy_sweep(spec, lie, {}, cfg).empty());

    // quadrature dimension cap: g * n = 24 > 12
    const auto su3 = load_preset("su3");
    const auto big = canonical_preset(3, su3);
    AiryConfig quad;
    quad.method = AiryMethod::gauss_quadrature;
    quad.order = 4;
    CHECK_THROWS_AS(airy_value(big, su3, quad), capacity_error);
}

TEST_CASE("non-positive J is a configuration error") {
    const auto lie = load_preset("u1");
    auto spec = canonical_preset(2, lie);
    spec.airy_j << 1.0, 0.0, 0.0, -1.0;
    AiryConfig cfg;
    cfg.samples = 10;
    CHECK_THROWS_AS(airy_value(spec, lie, cfg), validation_error);
}
