#ifndef CSRP_PRODUCT_SPACE_HPP
#define CSRP_PRODUCT_SPACE_HPP

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "csrp/bose_fock.hpp"
#include "csrp/fermi_fock.hpp"

namespace csrp {

// H_B otimes H_F with index (b, f) -> b * dimF + f. The Fermi Gram is always
// diagonal; the Bose Gram is block-diagonal per degree (diagonal when Q = I).
class ProductSpace {
  public:
    ProductSpace(const BoseSpace& bose, const FermiSpace& fermi);

    const BoseSpace& bose() const { return *bose_; }
    const FermiSpace& fermi() const { return *fermi_; }
    int dim() const { return bose_->dim() * fermi_->dim(); }

    const Eigen::VectorXd& number_diag() const { return number_diag_; }       // N_B + N_F
    const Eigen::VectorXd& bose_number_diag() const { return bose_number_; }  // N_B lift
    const SpMat& j_full() const { return j_full_; }                           // I otimes J_F

    SpMat lift_bose(const SpMat& a) const;   // a otimes I
    SpMat lift_fermi(const SpMat& a) const;  // I otimes a

    Eigen::VectorXcd apply_gram(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd solve_gram(const Eigen::VectorXcd& x) const;
    std::complex<double> ip(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;
    double norm(const Eigen::VectorXcd& x) const;

    // G^{-1} A^T G for a real operator on the product space.
    SpMat gram_adjoint(const SpMat& a) const;

    Eigen::VectorXcd vacuum() const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
        v(0) = 1.0;
        return v;
    }

  private:
    const BoseSpace* bose_;
    const FermiSpace* fermi_;
    Eigen::VectorXd number_diag_, bose_number_;
    SpMat j_full_;
};

// y = exp(scale * A) v by scaled Taylor actions; relative series tolerance
// per step. norm_est should bound ||A|| reasonably (a 2-norm estimate).
Eigen::VectorXcd exp_action(const SpMat& a, std::complex<double> scale,
                            const Eigen::VectorXcd& v, double norm_est, double tol = 1e-12);

// Power-iteration estimate of the spectral norm ||A||_2.
double spectral_norm_estimate(const SpMat& a, int iters = 60, std::uint64_t seed = 13);

// Largest eigenvalue (with certified upper bound theta + ||r||) of a
// G-self-adjoint operator given through its matvec, in the G inner product.
struct ExtremeEig {
    double theta = 0.0;     // Rayleigh estimate
    double upper = 0.0;     // theta + residual norm, certified upper bound
};
ExtremeEig g_largest_eigenvalue(const ProductSpace& space,
                                const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& mv,
                                int iters, std::uint64_t seed);

}  // namespace csrp

#endif
