#ifndef CSRP_WICK_HPP
#define CSRP_WICK_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "csrp/bose_fock.hpp"
#include "csrp/covariance.hpp"
#include "csrp/fermi_fock.hpp"
#include "csrp/validation.hpp"

namespace csrp {

// Formal polynomials over a one-particle model. A factor is a coefficient
// vector inside one region block (Fermi: one sector block) tensored with a
// Lie-algebra color. Two-region models use regions {0 = plus, 1 = minus};
// the three-region model uses {0 = U, 1 = V, 2 = W}.

struct BoseFactor {
    int region = 0;
    Eigen::VectorXd vec;
    int color = 0;
};

struct FermiFactor {
    int region = 0;
    int sector = 0;  // 0 = H^0-type, 1 = H^2-type
    Eigen::VectorXd vec;
    int color = 0;
};

struct BoseMonomial {
    double coeff = 1.0;
    std::vector<BoseFactor> factors;
};
struct FermiMonomial {
    double coeff = 1.0;
    std::vector<FermiFactor> factors;
};
struct MixedMonomial {
    double coeff = 1.0;
    std::vector<BoseFactor> bose;
    std::vector<FermiFactor> fermi;
};

using BosePoly = std::vector<BoseMonomial>;
using FermiPoly = std::vector<FermiMonomial>;
using MixedPoly = std::vector<MixedMonomial>;

// Colored covariances. Bose colors contract with +delta; Fermi colors carry
// the trace sign tr(e_a e_b) = -delta, which turns the stored -vol c_f c_g
// cross pairing into the split form on g + g.
using BosePairing = std::function<double(const BoseFactor&, const BoseFactor&)>;
using FermiPairing = std::function<double(const FermiFactor&, const FermiFactor&)>;

// alpha scales the free quadratic term: every pairing is divided by alpha.
BosePairing bose_pairing(const BoseOneParticleModel& model, double alpha = 1.0);
FermiPairing fermi_pairing(const FermiOneParticleModel& model, double alpha = 1.0);
BosePairing bose_pairing(const ThreeRegionModel& model, double alpha = 1.0);
FermiPairing fermi_pairing(const ThreeRegionModel& model, double alpha = 1.0);

// Degree caps keep the matching enumerations sub-second.
inline constexpr int kBoseMonomialCap = 12;
inline constexpr int kFermiMonomialCap = 16;  // = 8 (0,2)-pairs

// Free-theory moment functionals: sum over perfect matchings (Bose) and the
// signed Pfaffian expansion (Fermi). Linear in the polynomial; zero on odd
// degree. Throws capacity_error beyond the caps.
double phi(const BosePoly& poly, const BosePairing& c);
double psi(const FermiPoly& poly, const FermiPairing& c);
double phi_psi(const MixedPoly& poly, const BosePairing& cb, const FermiPairing& cf);

// Independent oracles for the functionals.
// Full permutation sum with the 1/(2^{n/2} (n/2)!) prefactor.
double phi_permutation_sum(const BoseMonomial& m, const BosePairing& c);
double psi_permutation_sum(const FermiMonomial& m, const FermiPairing& c);
// Reorder to (f_m ... f_1 g_1 ... g_n) with the permutation sign, then det.
double psi_determinant(const FermiMonomial& m, const FermiPairing& c);

// Wick transforms e^{-i_v} / e^{+i_v}; mutually inverse, never raise degree.
BosePoly wick_order(const BosePoly& poly, const BosePairing& c);
BosePoly wick_unorder(const BosePoly& poly, const BosePairing& c);
FermiPoly wick_order(const FermiPoly& poly, const FermiPairing& c);
FermiPoly wick_unorder(const FermiPoly& poly, const FermiPairing& c);
MixedPoly wick_unorder(const MixedPoly& poly, const BosePairing& cb, const FermiPairing& cf);

// Algebra helpers.
BosePoly bose_product(const BosePoly& a, const BosePoly& b);
FermiPoly fermi_product(const FermiPoly& a, const FermiPoly& b);
MixedPoly mixed_product(const MixedPoly& a, const MixedPoly& b);

// Region reflection (two-region models): block swap, colors untouched.
BosePoly reflect(const BosePoly& poly);
FermiPoly reflect(const FermiPoly& poly);
MixedPoly reflect(const MixedPoly& poly);

// m^c = (-1)^{s1+s2} m on the Fermi part; identity on the Bose part.
FermiPoly c_conj(const FermiPoly& poly);
MixedPoly c_conj(const MixedPoly& poly);

// (f,g)^t = (Lg, -star d f) on the model: sector swap with a sign.
FermiPoly t_map(const FermiPoly& poly);

// Wick identity right-hand sides (footnote forms), used as test oracles:
// Phi(:P::Q:) = perm[C(p_i,q_j)], Psi(:P::Q:) = (-1)^{k(k-1)/2} det[C(p_i,q_j)]
// in the unnormalized Sym/Wedge conventions used throughout.
double phi_wick_rhs(const BoseMonomial& p, const BoseMonomial& q, const BosePairing& c);
double psi_wick_rhs(const FermiMonomial& p, const FermiMonomial& q, const FermiPairing& c);

// q(P,Q) = Phi((R*P) Q) for plus-supported polynomials.
double q_form(const BosePoly& p, const BosePoly& q, const BoseOneParticleModel& model);
Eigen::MatrixXd gram_q(const std::vector<BosePoly>& polys, const BoseOneParticleModel& model);

// Combined reflected pairing (Phi x Psi)((R*p)^c q) for plus-supported
// mixed polynomials.
double combined_q_form(const MixedPoly& p, const MixedPoly& q,
                       const BoseOneParticleModel& bmodel, const FermiOneParticleModel& fmodel);

// Projections into the truncated Hilbert spaces. The polynomial is expressed
// in the Wick basis (e^{+i_v}) and each factor is sent to its cohomology
// class (Bose: lambda-coordinates; Fermi: the constants (c_f, c_g)).
BoseState pi_sigma(const BosePoly& poly, const BoseOneParticleModel& model,
                   const BoseSpace& space);
FermiState pi_sigma_F(const FermiPoly& poly, const FermiOneParticleModel& model,
                      const FermiSpace& space);
Eigen::VectorXd pi_sigma_combined(const MixedPoly& poly, const BoseOneParticleModel& bmodel,
                                  const FermiOneParticleModel& fmodel, const BoseSpace& bspace,
                                  const FermiSpace& fspace);

// The footnote ghost example: p built from a same-side null (0,2)-pair gives
// Psi((R p^t) p) < 0. Requires null_modes >= 1.
double ghost_negativity_witness(const FermiOneParticleModel& model);

// Appendix gluing identities over the three-region model: both cut
// evaluations of Phi / Psi / combined values on random (p,q,r) triples, and
// cut-independence of the class maps on the outer regions.
ValidationReport verify_gluing(const ThreeRegionModel& model, int trials, std::uint64_t seed,
                               double tol = 1e-10);

}  // namespace csrp

#endif
