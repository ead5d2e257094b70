#ifndef CSRP_AIRY_HPP
#define CSRP_AIRY_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "csrp/lie_algebra.hpp"
#include "csrp/splitting.hpp"

namespace csrp {

// Finite-dimensional companion integral over Lambda otimes g = R^{g n}:
//   int dt exp(-<t,(J^{-1} otimes I) t> - i lambda sum t t t f N)
//          det(K otimes I + 6 i lambda sum_{a,alpha} t_a^alpha B_a otimes F_alpha).
// Monte Carlo importance-samples the Gaussian factor exactly (t ~ N(0, (J otimes I)/2));
// the quadrature path uses tensorized Gauss-Hermite after the same change of
// variables. Normalization fixed so lambda = 0, K = I, J = I gives pi^{D/2}.

enum class AiryMethod { monte_carlo, gauss_quadrature };

struct AiryConfig {
    double lambda = 0.0;
    AiryMethod method = AiryMethod::monte_carlo;
    std::int64_t samples = 100000;  // Monte Carlo
    int order = 12;                 // Gauss-Hermite nodes per dimension
    std::uint64_t seed = 1;
};

struct AiryResult {
    std::complex<double> value{0.0, 0.0};
    double std_error = 0.0;         // MC standard error (combined components)
    std::int64_t samples = 0;       // MC sample count, or order^D for quadrature
    double refine_delta = 0.0;      // quadrature: |value(order) - value(order-2)|
};

// Dimension cap for the tensorized quadrature.
inline constexpr int kQuadratureDimCap = 12;

AiryResult airy_value(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                      const AiryConfig& cfg);

// Closed form at lambda = 0: pi^{D/2} det(J otimes I)^{1/2} det(K otimes I).
double airy_closed_form_lambda0(const SplittingSpec& spec, const LieAlgebraSpec& lie);

struct AirySweepRow {
    double lambda = 0.0;
    AiryResult result;
};
std::vector<AirySweepRow> airy_sweep(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                                     const std::vector<double>& lambdas, const AiryConfig& cfg);

// Gauss-Hermite nodes/weights for weight e^{-x^2} (Golub-Welsch).
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace csrp

#endif
