#ifndef CSRP_COVARIANCE_HPP
#define CSRP_COVARIANCE_HPP

#include <cstdint>

#include <Eigen/Dense>

#include <nlohmann/json_fwd.hpp>

#include "csrp/splitting.hpp"
#include "csrp/validation.hpp"

namespace csrp {

// Finite-dimensional stand-ins for the one-particle configuration spaces.
// The propagator is replaced by explicit covariance matrices: cross-region
// blocks are forced to factor through the cohomology class maps (so the
// structural lemmas hold by construction), same-region blocks are seeded
// random and mirrored through the reflection.

// Two regions: 0 = plus, 1 = minus. Per-region dimension g + null_modes;
// the class maps have rank g and a null space of dimension null_modes.
struct BoseOneParticleModel {
    SplittingSpec split;
    int null_modes = 0;
    int dim_side = 0;
    std::uint64_t seed = 0;

    Eigen::MatrixXd pi_plus;   // 2g x dim_side, range = span(lambda)
    Eigen::MatrixXd pi_minus;  // 2g x dim_side, range = span(s_star * lambda)
    Eigen::MatrixXd cov;       // (2 dim_side)^2 symmetric; plus block first
    ValidationReport report;   // invariants re-checked at construction

    int offset(int region) const { return region * dim_side; }

    // Scalar covariance of region-supported coefficient vectors.
    double pairing(int r1, const Eigen::VectorXd& v1, int r2, const Eigen::VectorXd& v2) const {
        return v1.dot(cov.block(offset(r1), offset(r2), dim_side, dim_side) * v2);
    }

    // Reflection exchanges the two regions block-for-block.
    static int reflected_region(int r) { return 1 - r; }

    // Cohomology class in H^1(Sigma,R) = R^{2g}.
    Eigen::VectorXd class_of(int region, const Eigen::VectorXd& v) const {
        return (region == 0 ? pi_plus : pi_minus) * v;
    }

    // One-particle reflected Gram q_ij = C(R* e_i, e_j) on the plus block.
    Eigen::MatrixXd q_gram() const;
};

// Fermi layout per region: [0-form sector | 2-form sector], each of dimension
// 1 + null_modes with the constant direction first. The covariance is
// antisymmetric and pairs 0-form with 2-form directions only.
struct FermiOneParticleModel {
    SplittingSpec split;
    int null_modes = 0;
    int sector_dim = 0;  // 1 + null_modes
    int dim_side = 0;    // 2 * sector_dim
    std::uint64_t seed = 0;

    Eigen::MatrixXd cov;        // (2 dim_side)^2 antisymmetric
    Eigen::MatrixXd same_side;  // sector_dim^2 symmetric 0x2 pairing (both sides)
    ValidationReport report;

    int offset(int region, int sector) const {
        return region * dim_side + sector * sector_dim;
    }
    static int reflected_region(int r) { return 1 - r; }

    double pairing(int r1, int s1, const Eigen::VectorXd& v1, int r2, int s2,
                   const Eigen::VectorXd& v2) const {
        return v1.dot(cov.block(offset(r1, s1), offset(r2, s2), sector_dim, sector_dim) * v2);
    }

    // Constant part c_f / c_g of a sector vector (null directions have none).
    static double constant_of(const Eigen::VectorXd& v) { return v(0); }

    // (f,g)^t = (Lg, -star d f): sectors swap, 0->2 picks up a sign.
    static int t_sector(int sector) { return 1 - sector; }
    static double t_sign(int sector) { return sector == 0 ? -1.0 : 1.0; }
};

ValidationReport validate_bose_model(const BoseOneParticleModel& m, double tol = 1e-12);
ValidationReport validate_fermi_model(const FermiOneParticleModel& m, double tol = 1e-12);

BoseOneParticleModel build_bose_model(const SplittingSpec& spec, int null_modes,
                                      std::uint64_t seed);
FermiOneParticleModel build_fermi_model(const SplittingSpec& spec, int null_modes,
                                        std::uint64_t seed);

// Three regions U, V, W cut by two isotopic surfaces Sigma_1 (U | V+W) and
// Sigma_2 (U+V | W). U- and W-supported classes are cut-independent; the
// middle region carries one class map per cut.
struct ThreeRegionModel {
    SplittingSpec split;
    int null_modes = 0;
    int bose_dim = 0;    // per region
    int sector_dim = 0;  // fermi, per region and sector
    std::uint64_t seed = 0;

    // Bose class maps (2g x bose_dim): pi_u and pi_w serve both cuts.
    Eigen::MatrixXd pi_u, pi_w, pi_v_cut1, pi_v_cut2;
    Eigen::MatrixXd bose_cov;  // (3 bose_dim)^2 symmetric

    Eigen::MatrixXd fermi_cov;  // (3 * 2 sector_dim)^2 antisymmetric

    ValidationReport report;

    int bose_offset(int region) const { return region * bose_dim; }
    int fermi_offset(int region, int sector) const {
        return region * 2 * sector_dim + sector * sector_dim;
    }

    double bose_pairing(int r1, const Eigen::VectorXd& v1, int r2,
                        const Eigen::VectorXd& v2) const {
        return v1.dot(bose_cov.block(bose_offset(r1), bose_offset(r2), bose_dim, bose_dim) * v2);
    }
    double fermi_pairing(int r1, int s1, const Eigen::VectorXd& v1, int r2, int s2,
                         const Eigen::VectorXd& v2) const {
        return v1.dot(
            fermi_cov.block(fermi_offset(r1, s1), fermi_offset(r2, s2), sector_dim, sector_dim) *
            v2);
    }

    // cut: 1 or 2.
    Eigen::VectorXd bose_class(int cut, int region, const Eigen::VectorXd& v) const;
};

ThreeRegionModel build_three_region_model(const SplittingSpec& spec, int null_modes,
                                          std::uint64_t seed);

nlohmann::json to_json(const BoseOneParticleModel& m);
nlohmann::json to_json(const FermiOneParticleModel& m);

}  // namespace csrp

#endif
