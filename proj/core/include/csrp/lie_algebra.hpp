#ifndef CSRP_LIE_ALGEBRA_HPP
#define CSRP_LIE_ALGEBRA_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csrp/validation.hpp"

namespace csrp {

// Compact Lie algebra data: a basis orthonormal under <a,b> = -tr(ab) in the
// defining representation, and the totally antisymmetric structure constants
// f[a][b][c] = -tr(e_a [e_b, e_c]). All other modules assume the basis is
// orthonormal, so no Lie-algebra Gram matrix propagates.
struct LieAlgebraSpec {
    std::string name;
    int dim = 0;
    std::vector<double> f;                   // dense n^3, row-major (a,b,c)
    std::vector<Eigen::MatrixXcd> rep;       // defining representation, may be empty

    double f_at(int a, int b, int c) const { return f[(a * dim + b) * dim + c]; }
    double& f_at(int a, int b, int c) { return f[(a * dim + b) * dim + c]; }

    bool abelian() const;

    // Adjoint representation matrices (ad e_a)_{cb} = f_{abc}; used as the
    // default determinant-block matrices in the finite-dimensional integral.
    std::vector<Eigen::MatrixXd> adjoint_matrices() const;
};

// Presets: "u1", "su2" (e_a = i sigma_a / sqrt(2)), "su3" (normalized
// Gell-Mann matrices). Throws validation_error for unknown names.
LieAlgebraSpec load_preset(const std::string& name);

// Custom algebra from explicit structure constants (flattened row-major n^3).
LieAlgebraSpec make_lie_algebra(int dim, const std::vector<double>& f,
                                std::vector<Eigen::MatrixXcd> rep = {});

// Report-only validation: antisymmetry, Jacobi identity, and (when a
// representation is present) orthonormality and f-vs-commutator consistency.
ValidationReport validate_lie(const LieAlgebraSpec& spec, double tol = 1e-12);

}  // namespace csrp

#endif
