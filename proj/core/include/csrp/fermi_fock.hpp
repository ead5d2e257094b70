#ifndef CSRP_FERMI_FOCK_HPP
#define CSRP_FERMI_FOCK_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "csrp/bose_fock.hpp"
#include "csrp/lie_algebra.hpp"

namespace csrp {

using FermiState = Eigen::VectorXd;

// Finite-dimensional alternating algebra Wedge*(g + g) on 2n generators:
// ids 0..n-1 are the H^0-type directions, n..2n-1 the H^2-type directions.
// Subset basis indexed by bitmask, generators in ascending id order; the
// positive metric is diagonal with <e_I, e_I>_+ = vol^{|I|} (determinant
// convention). The swap J(a,b) = (b,a) lifts to the signed permutation
// J_F = Wedge* J relating the split form to the metric:
// <x,y>_split = <x, J_F y>_+.
class FermiSpace {
  public:
    FermiSpace(const LieAlgebraSpec& lie, double vol);

    int colors() const { return n_; }
    int generators() const { return 2 * n_; }
    int dim() const { return 1 << (2 * n_); }
    double vol() const { return vol_; }

    // sector: 0 = H^0-type, 1 = H^2-type.
    int generator_id(int sector, int color) const { return sector * n_ + color; }
    int sector_of(int gen) const { return gen < n_ ? 0 : 1; }

    int degree_of(int index) const { return __builtin_popcount(static_cast<unsigned>(index)); }

    const Eigen::VectorXd& gram_diag() const { return gram_diag_; }
    const SpMat& j_matrix() const { return j_mat_; }

    double ip_plus(const FermiState& x, const FermiState& y) const {
        return x.dot(gram_diag_.cwiseProduct(y));
    }
    std::complex<double> ip_plus(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
        return x.conjugate().dot(gram_diag_.cwiseProduct(y));
    }
    double ip_split(const FermiState& x, const FermiState& y) const {
        return ip_plus(x, FermiState(j_mat_ * y));
    }

    // Left wedge by a single generator: returns (sign, target) or sign 0.
    std::pair<double, int> wedge_generator(int gen, int subset) const;

    // Left wedge by a one-particle vector (length 2n).
    FermiState multiply_one_particle(const FermiState& state,
                                     const Eigen::VectorXd& one_particle) const;
    FermiState state_from_factors(const std::vector<Eigen::VectorXd>& factors) const;

    FermiState vacuum() const {
        FermiState v = FermiState::Zero(dim());
        v(0) = 1.0;
        return v;
    }

  private:
    int n_ = 0;
    double vol_ = 1.0;
    Eigen::VectorXd gram_diag_;
    SpMat j_mat_;
};

FermiSpace build_fermi_space(const LieAlgebraSpec& lie, double vol);

// m^c = (-1)^{s1+s2} m, s1 = |m|(|m|-1)/2, s2 = number of H^2-type factors.
FermiState c_conjugation(const FermiSpace& space, const FermiState& p);
Eigen::VectorXd c_conjugation_signs(const FermiSpace& space);

OperatorMatrix number_operator_F(const FermiSpace& space);

// Left exterior multiplication by an arbitrary element eta.
OperatorMatrix fermi_multiplication(const FermiSpace& space, const FermiState& eta);

// Adjoint with respect to the positive metric.
OperatorMatrix plus_adjoint(const FermiSpace& space, const OperatorMatrix& op);

// Adjoint in the split form: J_F^{-1} op^{*+} J_F.
OperatorMatrix dagger_adjoint(const FermiSpace& space, const OperatorMatrix& op);

}  // namespace csrp

#endif
