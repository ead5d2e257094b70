#ifndef CSRP_SPLITTING_HPP
#define CSRP_SPLITTING_HPP

#include <vector>

#include <Eigen/Dense>

#include "csrp/lie_algebra.hpp"
#include "csrp/validation.hpp"

namespace csrp {

// Linear-algebraic shadow of a reflection-split 3-manifold: the intersection
// form on H^1 of the splitting surface, the induced anti-symplectic
// involution, the Lagrangian carrying the Hilbert-space metric Q, and the
// tensors feeding the interaction and the finite-dimensional integral.
struct SplittingSpec {
    int genus = 0;
    Eigen::MatrixXd omega;         // 2g x 2g intersection form, antisymmetric
    Eigen::MatrixXd s_star;        // 2g x 2g involution, anti-symplectic
    Eigen::MatrixXd lambda_plus;   // 2g x g, basis of the M_+ Lagrangian
    Eigen::MatrixXd lambda;        // 2g x g, basis of Lambda = S* Lambda_+
    Eigen::MatrixXd q_mat;         // g x g, metric Q on Lambda, SPD
    std::vector<double> n_tensor;  // g^3 row-major, totally antisymmetric
    Eigen::VectorXd v_vec;         // length g, Fermi coupling data
    double vol = 1.0;

    // Data for the finite-dimensional cross-check integral.
    Eigen::MatrixXd airy_j;                 // g x g, positive definite
    Eigen::MatrixXd airy_k;                 // m x m
    std::vector<Eigen::MatrixXd> airy_b;    // g matrices, m x m
    std::vector<Eigen::MatrixXd> airy_f;    // n matrices, m x m

    double n_at(int a, int b, int c) const { return n_tensor[(a * genus + b) * genus + c]; }

    // Pairing Q extended to all of H^1(Sigma,R): Q(a,b) = -(S* a)^T omega b.
    // Restricted to the lambda columns this reproduces q_mat.
    double q_full(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
        return -(s_star * a).dot(omega * b);
    }
};

// Q_ij = -omega(S* lambda_i, lambda_j), symmetrized; the leading sign is the
// trace/metric convention that makes Q positive definite on Lambda.
// asymmetry_out (optional) receives the pre-symmetrization residual.
Eigen::MatrixXd derive_Q(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& s_star,
                         const Eigen::MatrixXd& lambda, double* asymmetry_out = nullptr);

// Standard (a,b)-cycle model: omega = [[0,I],[-I,0]], S* a_i = -b_i,
// S* b_i = -a_i, Lambda_+ = span(a-cycles), Q = I. N_{abc} is the totally
// antisymmetric tensor with value n_amplitude for a<b<c (zero when g < 3),
// V = (1,...,1), vol = 1. Airy data defaults: J = Q, K = I, B_a = elementary
// symmetric matrices, F_alpha = adjoint matrices of the Lie algebra.
SplittingSpec canonical_preset(int genus, const LieAlgebraSpec& lie, double n_amplitude = 1.0);

ValidationReport validate_splitting(const SplittingSpec& spec, double tol = 1e-12);

}  // namespace csrp

#endif
