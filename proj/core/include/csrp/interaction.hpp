#ifndef CSRP_INTERACTION_HPP
#define CSRP_INTERACTION_HPP

#include <vector>

#include "csrp/product_space.hpp"
#include "csrp/splitting.hpp"
#include "csrp/wick.hpp"

namespace csrp {

// Cubic Bose interaction element xi_B in Sym^3(Lambda otimes g): the unique
// degree-3 state with <xi_B, (b_i e_a)(b_j e_b)(b_k e_c)> = -f_{abc} N_{ijk}.
BoseState build_xi_b(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                     const BoseSpace& space);

// O_B = xi_B . + (xi_B .)^*, self-adjoint in the Bose Gram.
OperatorMatrix build_o_b(const BoseSpace& space, const BoseState& xi_b);

// Bose-Fermi interaction element in (Lambda otimes g) otimes Wedge^2(g+g),
// supported on the (0-type ^ 2-type) wedge sector:
// <xi_BF, J((b_i e_a) otimes (e_b,0)^(0,e_c))> = 6 f_{abc} V_i.
// Returned as a coefficient vector on the product space.
Eigen::VectorXd build_xi_bf(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                            const ProductSpace& pspace);

// O_BF = xi_BF . + (xi_BF .)^dagger with the split-form adjoint
// dagger = J^{-1} (.)^* J; raises/lowers the Bose degree by exactly one.
OperatorMatrix build_o_bf(const ProductSpace& pspace, const Eigen::VectorXd& xi_bf);

// Multiplication by an element of Bose degree 1 tensor Fermi degree 2.
SpMat product_multiplication(const ProductSpace& pspace, const Eigen::VectorXd& xi);

struct BoundCertificate {
    double k1 = 0.0;
    double k2 = 0.0;
    // Estimated min eigenvalue of K1 N_B + K2 - O*O (>= -1e-8 when valid).
    double slack = 0.0;
    // n -> c_n = n log || e^{-eps N / n} exp(i lambda O_BF / n) ||.
    std::vector<std::pair<int, double>> growth;
    double c = 0.0;  // fitted constant (value at the largest n)
};

// Grid-searched (K1, K2) with K1 N_B + K2 - O_BF* O_BF psd up to slack, plus
// the n-stability data for the norm-growth constant.
BoundCertificate certify_bound(const ProductSpace& pspace, const OperatorMatrix& o_bf,
                               double eps = 0.1, double lambda = 1.0,
                               const std::vector<int>& ns = {4, 8, 16, 32});

struct InteractionSet {
    BoseState xi_b;
    Eigen::VectorXd xi_bf;
    OperatorMatrix o_b;   // on H_B
    OperatorMatrix o_bf;  // on H_B otimes H_F
    BoundCertificate bound;
};

InteractionSet build_interactions(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                                  const ProductSpace& pspace, bool certify = true);

}  // namespace csrp

#endif
