#include <doctest.h>

#include "csrp/errors.hpp"
#include "csrp/rng.hpp"
#include "csrp/splitting.hpp"

using namespace csrp;

TEST_CASE("canonical preset derives Q = I for genus 1..6") {
    const auto lie = load_preset("u1");
    for (int g = 1; g <= 6; ++g) {
        const auto spec = canonical_preset(g, lie);
        CHECK((spec.q_mat - Eigen::MatrixXd::Identity(g, g)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(validate_splitting(spec).pass());
    }
}

TEST_CASE("derive_Q on the g=1 canonical block arithmetic") {
    const auto spec = canonical_preset(1, load_preset("u1"));
    double asym = 1.0;
    const auto q = derive_Q(spec.omega, spec.s_star, spec.lambda, &asym);
    CHECK(q.rows() == 1);
    CHECK(q(0, 0) == doctest::Approx(1.0));
    CHECK(asym == 0.0);
}

TEST_CASE("positivity fails on the wrong Lagrangian") {
    // On Lambda_+ the pairing omega(S* a, b) is positive, so the Q formula
    // (with its leading minus) is negative definite there.
    const auto spec = canonical_preset(2, load_preset("u1"));
    const auto q_wrong = derive_Q(spec.omega, spec.s_star, spec.lambda_plus);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q_wrong);
    CHECK(es.eigenvalues().maxCoeff() < 0.0);
}

TEST_CASE("genus 2: omega(S* a_i, a_i) = +1 on the a-cycles") {
    const auto spec = canonical_preset(2, load_preset("u1"));
    for (int i = 0; i < 2; ++i) {
        const Eigen::VectorXd a = spec.lambda_plus.col(i);
        CHECK((spec.s_star * a).dot(spec.omega * a) == doctest::Approx(1.0));
    }
}

TEST_CASE("genus 1 canonical: N vanishes; genus 3 carries the amplitude") {
    const auto lie = load_preset("su2");
    const auto g1 = canonical_preset(1, lie, 2.5);
    CHECK(g1.n_at(0, 0, 0) == 0.0);
    const auto g3 = canonical_preset(3, lie, 2.5);
    CHECK(g3.n_at(0, 1, 2) == doctest::Approx(2.5));
    CHECK(g3.n_at(1, 0, 2) == doctest::Approx(-2.5));
    CHECK(validate_splitting(g3).pass());
}

TEST_CASE("validator rejects s_star = I and symmetric n_tensor") {
    auto spec = canonical_preset(2, load_preset("u1"));
    SUBCASE("identity involution is not anti-symplectic") {
        spec.s_star = Eigen::MatrixXd::Identity(4, 4);
        const auto report = validate_splitting(spec);
        bool anti_failed = false;
        for (const auto& c : report.checks)
            if (c.name == "s_star_antisymplectic" && !c.pass) anti_failed = true;
        CHECK(anti_failed);
    }
    SUBCASE("symmetric part in N fails antisymmetry") {
        spec.n_tensor[(0 * 2 + 1) * 2 + 1] = 1.0;  // N_{011} != 0
        const auto report = validate_splitting(spec);
        bool n_failed = false;
        for (const auto& c : report.checks)
            if (c.name == "n_tensor_antisymmetric" && !c.pass) n_failed = true;
        CHECK(n_failed);
    }
}

TEST_CASE("random symplectic base changes preserve the Q spectrum") {
    // Conjugate (omega, s_star, lambda) by a random symplectic matrix built
    // from the group generators; eigenvalues of Q must be unchanged.
    const auto lie = load_preset("u1");
    Rng rng(42);
    for (int g = 1; g <= 3; ++g) {
        const auto spec = canonical_preset(g, lie);
        // exp of a Hamiltonian matrix: S = exp(J H), H symmetric -> symplectic
        Eigen::MatrixXd h(2 * g, 2 * g);
        for (int i = 0; i < 2 * g; ++i)
            for (int j = 0; j < 2 * g; ++j) h(i, j) = 0.3 * rng.gaussian();
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::MatrixXd a = spec.omega * h;
        Eigen::MatrixXd t = Eigen::MatrixXd::Identity(2 * g, 2 * g);
        Eigen::MatrixXd term = t;
        for (int k = 1; k <= 40; ++k) {
            term = (a * term / k).eval();
            t += term;
        }
        // change of basis x -> T^{-1} x on coordinates: forms transform by
        // congruence, operators by conjugation
        const Eigen::MatrixXd ti = t.inverse();
        const Eigen::MatrixXd omega2 = t.transpose() * spec.omega * t;
        const Eigen::MatrixXd s2 = ti * spec.s_star * t;
        const Eigen::MatrixXd lambda2 = ti * spec.lambda;
        CHECK((omega2 - spec.omega).cwiseAbs().maxCoeff() < 1e-8);  // symplectic
        const auto q2 = derive_Q(spec.omega, s2, lambda2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(spec.q_mat), e2(q2);
        // lambda columns changed basis, so compare spectra, not entries
        CHECK((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("dimension mismatch in derive_Q is a configuration error") {
    const auto spec = canonical_preset(2, load_preset("u1"));
    CHECK_THROWS_AS(derive_Q(spec.omega, spec.s_star, Eigen::MatrixXd::Identity(3, 2)),
                    validation_error);
}
