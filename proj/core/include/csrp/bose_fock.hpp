#ifndef CSRP_BOSE_FOCK_HPP
#define CSRP_BOSE_FOCK_HPP

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "csrp/lie_algebra.hpp"
#include "csrp/splitting.hpp"

namespace csrp {

using SpMat = Eigen::SparseMatrix<double>;

// Which metric an operator's adjoint refers to.
enum class MetricTag { bose_gram, fermi_gram_plus, combined_gram, split_form };

struct OperatorMatrix {
    SpMat mat;
    MetricTag metric = MetricTag::bose_gram;
};

using BoseState = Eigen::VectorXd;  // real coefficients over the multiset basis

// Truncated symmetric algebra Sym^{<=d}(Lambda otimes g) with the inner
// product induced by M = Q otimes delta in the permanent (unnormalized)
// convention: <v_1...v_k, w_1...w_k> = sum_sigma prod_i M(v_i, w_sigma(i)).
// Degree blocks are orthogonal; the basis is graded-lexicographic in the
// generators (mode-major), so matrix dumps are reproducible.
class BoseSpace {
  public:
    using Multiset = std::vector<std::uint16_t>;  // sorted generator ids

    BoseSpace(const SplittingSpec& spec, const LieAlgebraSpec& lie, int degree);

    int modes() const { return g_; }
    int colors() const { return n_; }
    int generators() const { return g_ * n_; }
    int degree() const { return d_; }
    int dim() const { return static_cast<int>(basis_.size()); }

    int generator_id(int mode, int color) const { return mode * n_ + color; }
    const Multiset& multiset(int index) const { return basis_[index]; }
    int index_of(const Multiset& m) const;
    int degree_of(int index) const { return static_cast<int>(basis_[index].size()); }
    int degree_begin(int k) const { return degree_offset_[k]; }
    int degree_count(int k) const { return degree_offset_[k + 1] - degree_offset_[k]; }

    const Eigen::MatrixXd& one_particle_metric() const { return metric_; }
    const Eigen::MatrixXd& gram_block(int k) const { return gram_[k]; }
    bool gram_is_diagonal() const { return gram_diagonal_; }

    // <x, G y> in the space metric.
    double ip(const BoseState& x, const BoseState& y) const;
    std::complex<double> ip(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;
    Eigen::VectorXd apply_gram(const Eigen::VectorXd& x) const;
    Eigen::VectorXd solve_gram(const Eigen::VectorXd& x) const;

    // Symmetric product with a one-particle vector (truncating beyond d).
    BoseState multiply_one_particle(const BoseState& state,
                                    const Eigen::VectorXd& one_particle) const;
    // Product of one-particle vectors, as a state (empty product = vacuum).
    BoseState state_from_factors(const std::vector<Eigen::VectorXd>& factors) const;

    BoseState vacuum() const;

  private:
    int g_ = 0, n_ = 0, d_ = 0;
    std::vector<Multiset> basis_;
    std::map<Multiset, int> index_;
    std::vector<int> degree_offset_;
    Eigen::MatrixXd metric_;             // (g n)^2 one-particle metric
    std::vector<Eigen::MatrixXd> gram_;  // per-degree blocks
    std::vector<Eigen::LLT<Eigen::MatrixXd>> gram_llt_;
    bool gram_diagonal_ = false;
};

BoseSpace build_bose_space(const SplittingSpec& spec, const LieAlgebraSpec& lie, int degree);

// Diagonal polynomial-degree operator.
OperatorMatrix number_operator(const BoseSpace& space);

// Multiplication by a homogeneous degree-3 element; products beyond the
// truncation are dropped. Throws contract_error if xi is not degree-3.
OperatorMatrix multiplication_operator(const BoseSpace& space, const BoseState& xi);

// gram^{-1} op^T gram.
OperatorMatrix gram_adjoint(const BoseSpace& space, const OperatorMatrix& op);

// Permanent of a k x k matrix (Ryser). Exposed for the Sym-convention tests.
double permanent(const Eigen::MatrixXd& m);

}  // namespace csrp

#endif
