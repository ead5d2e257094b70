#ifndef CSRP_PARTITION_HPP
#define CSRP_PARTITION_HPP

#include <complex>
#include <vector>

#include "csrp/interaction.hpp"
#include "csrp/product_space.hpp"

namespace csrp {

// Z_n(eps, lambda) = <Omega, J (e^{-eps N/n} e^{i lambda O_BF/n} e^{i lambda O_B/n})^n Omega>.
// The product is applied to a single vector through exponential actions; no
// dense exponential of the tensor operator is ever formed. bf_order = false
// swaps the two interaction factors (ordering-sensitivity probe).
std::complex<double> z_n(const ProductSpace& pspace, const InteractionSet& inter, double eps,
                         double lambda, int n, bool bf_order = true,
                         std::vector<double>* step_norms = nullptr);

// Direct exponential on the truncation: <Omega, J e^{-eps N + i lambda (O_B + O_BF)} Omega>,
// evaluated by a Taylor action of the full generator (the n -> infinity
// limit of z_n by the Lie product formula).
std::complex<double> z_direct(const ProductSpace& pspace, const InteractionSet& inter,
                              double eps, double lambda);

struct TrotterOptions {
    double eps = 0.1;
    double lambda = 0.5;
    int n_max = 256;  // geometric sequence 1, 2, 4, ..., n_max
    bool bf_order = true;
    bool compute_direct = true;
};

struct PartitionSequence {
    std::vector<int> ns;
    std::vector<std::complex<double>> z;
    std::complex<double> direct{0.0, 0.0};
    bool has_direct = false;
    // |Z_n - Z_{2n}| per consecutive pair (size ns.size()-1).
    std::vector<double> cauchy;
    double fitted_order = 0.0;  // slope of the Cauchy decay in 1/n
    std::complex<double> richardson{0.0, 0.0};
};

PartitionSequence z_limit(const ProductSpace& pspace, const InteractionSet& inter,
                          const TrotterOptions& opt);

}  // namespace csrp

#endif
