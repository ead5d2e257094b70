#include "csrp/wick.hpp"

#include <algorithm>
#include <cmath>

#include "csrp/errors.hpp"
#include "csrp/rng.hpp"

namespace csrp {

namespace {

void check_bose_capacity(std::size_t k) {
    if (k > kBoseMonomialCap)
        throw capacity_error("phi: monomial degree " + std::to_string(k) + " exceeds cap " +
                             std::to_string(kBoseMonomialCap));
}
void check_fermi_capacity(std::size_t k) {
    if (k > kFermiMonomialCap)
        throw capacity_error("psi: monomial degree " + std::to_string(k) + " exceeds cap " +
                             std::to_string(kFermiMonomialCap));
}

// Full-matching evaluation over the alive indices. Bose: plain products.
// Fermi: first-row Pfaffian recursion, jump sign (-1)^{j-1} for pairing the
// front factor with the j-th alive one.
template <typename Factor>
double sum_matchings(const std::vector<Factor>& f, std::vector<int>& alive,
                     const std::function<double(const Factor&, const Factor&)>& c,
                     bool fermi_signs) {
    if (alive.empty()) return 1.0;
    const int first = alive.front();
    double total = 0.0;
    for (std::size_t j = 1; j < alive.size(); ++j) {
        const double pair_value = c(f[first], f[alive[j]]);
        if (pair_value == 0.0) continue;
        const double sign = (!fermi_signs || j % 2 == 1) ? 1.0 : -1.0;
        std::vector<int> rest;
        rest.reserve(alive.size() - 2);
        for (std::size_t i = 1; i < alive.size(); ++i)
            if (i != j) rest.push_back(alive[i]);
        total += sign * pair_value * sum_matchings(f, rest, c, fermi_signs);
    }
    return total;
}

template <typename Factor>
double moment_of_monomial(const std::vector<Factor>& factors,
                          const std::function<double(const Factor&, const Factor&)>& c,
                          bool fermi_signs) {
    if (factors.size() % 2 != 0) return 0.0;
    std::vector<int> alive(factors.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
    return sum_matchings(factors, alive, c, fermi_signs);
}

// Partial-matching expansion of e^{s i_v}: every term keeps a subset of the
// factors (in order) and contributes s^{#pairs} times the contraction values
// (with Pfaffian jump signs in the Fermi case).
template <typename Factor>
void expand_partial(const std::vector<Factor>& f, const std::vector<int>& alive, double weight,
                    double s, bool fermi_signs, std::vector<Factor>& kept,
                    const std::function<double(const Factor&, const Factor&)>& c,
                    std::vector<std::pair<double, std::vector<Factor>>>& out) {
    if (alive.empty()) {
        out.emplace_back(weight, kept);
        return;
    }
    const int first = alive.front();
    std::vector<int> rest(alive.begin() + 1, alive.end());
    // keep the front factor
    kept.push_back(f[first]);
    expand_partial(f, rest, weight, s, fermi_signs, kept, c, out);
    kept.pop_back();
    // or contract it with a later factor
    for (std::size_t j = 1; j < alive.size(); ++j) {
        const double pair_value = c(f[first], f[alive[j]]);
        if (pair_value == 0.0) continue;
        const double sign = (!fermi_signs || j % 2 == 1) ? 1.0 : -1.0;
        std::vector<int> remaining;
        remaining.reserve(alive.size() - 2);
        for (std::size_t i = 1; i < alive.size(); ++i)
            if (i != j) remaining.push_back(alive[i]);
        expand_partial(f, remaining, weight * s * sign * pair_value, s, fermi_signs, kept, c,
                       out);
    }
}

template <typename Monomial, typename Factor>
std::vector<Monomial> wick_transform(const std::vector<Monomial>& poly, double s,
                                     bool fermi_signs,
                                     const std::function<double(const Factor&, const Factor&)>& c) {
    std::vector<Monomial> out;
    for (const auto& m : poly) {
        std::vector<int> alive(m.factors.size());
        for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
        std::vector<Factor> kept;
        std::vector<std::pair<double, std::vector<Factor>>> terms;
        expand_partial<Factor>(m.factors, alive, 1.0, s, fermi_signs, kept, c, terms);
        for (auto& [w, factors] : terms) {
            if (w == 0.0) continue;
            Monomial t;
            t.coeff = m.coeff * w;
            t.factors = std::move(factors);
            out.push_back(std::move(t));
        }
    }
    return out;
}

int permutation_parity(const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2;
}

double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

}  // namespace

BosePairing bose_pairing(const BoseOneParticleModel& model, double alpha) {
    return [&model, alpha](const BoseFactor& a, const BoseFactor& b) {
        if (a.color != b.color) return 0.0;
        return model.pairing(a.region, a.vec, b.region, b.vec) / alpha;
    };
}

FermiPairing fermi_pairing(const FermiOneParticleModel& model, double alpha) {
    // Colors contract with tr(e_a e_b) = -delta.
    return [&model, alpha](const FermiFactor& a, const FermiFactor& b) {
        if (a.color != b.color) return 0.0;
        return -model.pairing(a.region, a.sector, a.vec, b.region, b.sector, b.vec) / alpha;
    };
}

BosePairing bose_pairing(const ThreeRegionModel& model, double alpha) {
    return [&model, alpha](const BoseFactor& a, const BoseFactor& b) {
        if (a.color != b.color) return 0.0;
        return model.bose_pairing(a.region, a.vec, b.region, b.vec) / alpha;
    };
}

FermiPairing fermi_pairing(const ThreeRegionModel& model, double alpha) {
    return [&model, alpha](const FermiFactor& a, const FermiFactor& b) {
        if (a.color != b.color) return 0.0;
        return -model.fermi_pairing(a.region, a.sector, a.vec, b.region, b.sector, b.vec) /
               alpha;
    };
}

double phi(const BosePoly& poly, const BosePairing& c) {
    double total = 0.0;
    for (const auto& m : poly) {
        check_bose_capacity(m.factors.size());
        total += m.coeff * moment_of_monomial<BoseFactor>(m.factors, c, false);
    }
    return total;
}

double psi(const FermiPoly& poly, const FermiPairing& c) {
    double total = 0.0;
    for (const auto& m : poly) {
        check_fermi_capacity(m.factors.size());
        total += m.coeff * moment_of_monomial<FermiFactor>(m.factors, c, true);
    }
    return total;
}

double phi_psi(const MixedPoly& poly, const BosePairing& cb, const FermiPairing& cf) {
    double total = 0.0;
    for (const auto& m : poly) {
        check_bose_capacity(m.bose.size());
        check_fermi_capacity(m.fermi.size());
        total += m.coeff * moment_of_monomial<BoseFactor>(m.bose, cb, false) *
                 moment_of_monomial<FermiFactor>(m.fermi, cf, true);
    }
    return total;
}

double phi_permutation_sum(const BoseMonomial& m, const BosePairing& c) {
    const int k = static_cast<int>(m.factors.size());
    if (k % 2 != 0) return 0.0;
    if (k == 0) return m.coeff;
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    double total = 0.0;
    do {
        double prod = 1.0;
        for (int i = 0; i < k; i += 2) prod *= c(m.factors[perm[i]], m.factors[perm[i + 1]]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return m.coeff * total / (std::pow(2.0, k / 2) * factorial(k / 2));
}

double psi_permutation_sum(const FermiMonomial& m, const FermiPairing& c) {
    const int k = static_cast<int>(m.factors.size());
    if (k % 2 != 0) return 0.0;
    if (k == 0) return m.coeff;
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    double total = 0.0;
    do {
        double prod = permutation_parity(perm) == 0 ? 1.0 : -1.0;
        for (int i = 0; i < k; i += 2) prod *= c(m.factors[perm[i]], m.factors[perm[i + 1]]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return m.coeff * total / (std::pow(2.0, k / 2) * factorial(k / 2));
}

double psi_determinant(const FermiMonomial& m, const FermiPairing& c) {
    std::vector<int> zeros, twos;
    for (std::size_t i = 0; i < m.factors.size(); ++i)
        (m.factors[i].sector == 0 ? zeros : twos).push_back(static_cast<int>(i));
    if (zeros.size() != twos.size()) return 0.0;
    const int k = static_cast<int>(zeros.size());
    if (k == 0) return m.coeff;

    // Sign of reordering to (f_k ... f_1 g_1 ... g_k).
    std::vector<int> target(zeros.rbegin(), zeros.rend());
    target.insert(target.end(), twos.begin(), twos.end());
    const double sign = permutation_parity(target) == 0 ? 1.0 : -1.0;

    Eigen::MatrixXd mat(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) mat(i, j) = c(m.factors[zeros[i]], m.factors[twos[j]]);
    return m.coeff * sign * mat.determinant();
}

BosePoly wick_order(const BosePoly& poly, const BosePairing& c) {
    return wick_transform<BoseMonomial, BoseFactor>(poly, -1.0, false, c);
}
BosePoly wick_unorder(const BosePoly& poly, const BosePairing& c) {
    return wick_transform<BoseMonomial, BoseFactor>(poly, 1.0, false, c);
}
FermiPoly wick_order(const FermiPoly& poly, const FermiPairing& c) {
    return wick_transform<FermiMonomial, FermiFactor>(poly, -1.0, true, c);
}
FermiPoly wick_unorder(const FermiPoly& poly, const FermiPairing& c) {
    return wick_transform<FermiMonomial, FermiFactor>(poly, 1.0, true, c);
}

MixedPoly wick_unorder(const MixedPoly& poly, const BosePairing& cb, const FermiPairing& cf) {
    MixedPoly out;
    for (const auto& m : poly) {
        std::vector<int> alive_b(m.bose.size());
        for (std::size_t i = 0; i < alive_b.size(); ++i) alive_b[i] = static_cast<int>(i);
        std::vector<BoseFactor> kept_b;
        std::vector<std::pair<double, std::vector<BoseFactor>>> terms_b;
        expand_partial<BoseFactor>(m.bose, alive_b, 1.0, 1.0, false, kept_b, cb, terms_b);

        std::vector<int> alive_f(m.fermi.size());
        for (std::size_t i = 0; i < alive_f.size(); ++i) alive_f[i] = static_cast<int>(i);
        std::vector<FermiFactor> kept_f;
        std::vector<std::pair<double, std::vector<FermiFactor>>> terms_f;
        expand_partial<FermiFactor>(m.fermi, alive_f, 1.0, 1.0, true, kept_f, cf, terms_f);

        for (const auto& [wb, fb] : terms_b)
            for (const auto& [wf, ff] : terms_f) {
                MixedMonomial t;
                t.coeff = m.coeff * wb * wf;
                t.bose = fb;
                t.fermi = ff;
                out.push_back(std::move(t));
            }
    }
    return out;
}

BosePoly bose_product(const BosePoly& a, const BosePoly& b) {
    BosePoly out;
    for (const auto& x : a)
        for (const auto& y : b) {
            BoseMonomial m;
            m.coeff = x.coeff * y.coeff;
            m.factors = x.factors;
            m.factors.insert(m.factors.end(), y.factors.begin(), y.factors.end());
            out.push_back(std::move(m));
        }
    return out;
}

FermiPoly fermi_product(const FermiPoly& a, const FermiPoly& b) {
    FermiPoly out;
    for (const auto& x : a)
        for (const auto& y : b) {
            FermiMonomial m;
            m.coeff = x.coeff * y.coeff;
            m.factors = x.factors;
            m.factors.insert(m.factors.end(), y.factors.begin(), y.factors.end());
            out.push_back(std::move(m));
        }
    return out;
}

MixedPoly mixed_product(const MixedPoly& a, const MixedPoly& b) {
    MixedPoly out;
    for (const auto& x : a)
        for (const auto& y : b) {
            MixedMonomial m;
            m.coeff = x.coeff * y.coeff;
            m.bose = x.bose;
            m.bose.insert(m.bose.end(), y.bose.begin(), y.bose.end());
            m.fermi = x.fermi;
            m.fermi.insert(m.fermi.end(), y.fermi.begin(), y.fermi.end());
            out.push_back(std::move(m));
        }
    return out;
}

BosePoly reflect(const BosePoly& poly) {
    BosePoly out = poly;
    for (auto& m : out)
        for (auto& f : m.factors) f.region = 1 - f.region;
    return out;
}

FermiPoly reflect(const FermiPoly& poly) {
    FermiPoly out = poly;
    for (auto& m : out)
        for (auto& f : m.factors) f.region = 1 - f.region;
    return out;
}

MixedPoly reflect(const MixedPoly& poly) {
    MixedPoly out = poly;
    for (auto& m : out) {
        for (auto& f : m.bose) f.region = 1 - f.region;
        for (auto& f : m.fermi) f.region = 1 - f.region;
    }
    return out;
}

namespace {
double c_sign(const std::vector<FermiFactor>& factors) {
    const int k = static_cast<int>(factors.size());
    int s = k * (k - 1) / 2;
    for (const auto& f : factors) s += (f.sector == 1) ? 1 : 0;
    return (s % 2 == 0) ? 1.0 : -1.0;
}
}  // namespace

FermiPoly c_conj(const FermiPoly& poly) {
    FermiPoly out = poly;
    for (auto& m : out) m.coeff *= c_sign(m.factors);
    return out;
}

MixedPoly c_conj(const MixedPoly& poly) {
    MixedPoly out = poly;
    for (auto& m : out) m.coeff *= c_sign(m.fermi);
    return out;
}

FermiPoly t_map(const FermiPoly& poly) {
    FermiPoly out;
    for (const auto& m : poly) {
        FermiMonomial t;
        t.coeff = m.coeff;
        // m = f_1...f_k g_1...g_l (interleaved) maps to
        // Lg_l...Lg_1 (-star d f_k)...(-star d f_1).
        for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it)
            if (it->sector == 1) {
                FermiFactor g = *it;
                g.sector = 0;
                t.factors.push_back(std::move(g));
            }
        for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it)
            if (it->sector == 0) {
                FermiFactor f = *it;
                f.sector = 1;
                t.coeff = -t.coeff;
                t.factors.push_back(std::move(f));
            }
        out.push_back(std::move(t));
    }
    return out;
}

double phi_wick_rhs(const BoseMonomial& p, const BoseMonomial& q, const BosePairing& c) {
    if (p.factors.size() != q.factors.size()) return 0.0;
    const int k = static_cast<int>(p.factors.size());
    if (k == 0) return p.coeff * q.coeff;
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = c(p.factors[i], q.factors[j]);
    return p.coeff * q.coeff * permanent(m);
}

double psi_wick_rhs(const FermiMonomial& p, const FermiMonomial& q, const FermiPairing& c) {
    if (p.factors.size() != q.factors.size()) return 0.0;
    const int k = static_cast<int>(p.factors.size());
    if (k == 0) return p.coeff * q.coeff;
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = c(p.factors[i], q.factors[j]);
    const double sign = (k * (k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return p.coeff * q.coeff * sign * m.determinant();
}

namespace {
void require_plus_supported(const BosePoly& p, const char* where) {
    for (const auto& m : p)
        for (const auto& f : m.factors)
            if (f.region != 0) throw contract_error(std::string(where) + ": polynomial not plus-supported");
}
void require_plus_supported(const MixedPoly& p, const char* where) {
    for (const auto& m : p) {
        for (const auto& f : m.bose)
            if (f.region != 0) throw contract_error(std::string(where) + ": polynomial not plus-supported");
        for (const auto& f : m.fermi)
            if (f.region != 0) throw contract_error(std::string(where) + ": polynomial not plus-supported");
    }
}
void require_plus_supported(const FermiPoly& p, const char* where) {
    for (const auto& m : p)
        for (const auto& f : m.factors)
            if (f.region != 0) throw contract_error(std::string(where) + ": polynomial not plus-supported");
}
}  // namespace

double q_form(const BosePoly& p, const BosePoly& q, const BoseOneParticleModel& model) {
    require_plus_supported(p, "q_form");
    require_plus_supported(q, "q_form");
    return phi(bose_product(reflect(p), q), bose_pairing(model));
}

Eigen::MatrixXd gram_q(const std::vector<BosePoly>& polys, const BoseOneParticleModel& model) {
    const int n = static_cast<int>(polys.size());
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = q_form(polys[i], polys[j], model);
            g(i, j) = g(j, i) = v;
        }
    return 0.5 * (g + g.transpose());
}

double combined_q_form(const MixedPoly& p, const MixedPoly& q,
                       const BoseOneParticleModel& bmodel, const FermiOneParticleModel& fmodel) {
    require_plus_supported(p, "combined_q_form");
    require_plus_supported(q, "combined_q_form");
    const MixedPoly lhs = c_conj(reflect(p));
    return phi_psi(mixed_product(lhs, q), bose_pairing(bmodel), fermi_pairing(fmodel));
}

namespace {

// Coordinates of a class in span(lambda columns).
struct LambdaCoords {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    explicit LambdaCoords(const Eigen::MatrixXd& lambda) : qr(lambda) {}
    Eigen::VectorXd operator()(const Eigen::VectorXd& cls) const { return qr.solve(cls); }
};

Eigen::VectorXd bose_one_particle_vector(const BoseSpace& space, const Eigen::VectorXd& coords,
                                         int color) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(space.generators());
    for (int i = 0; i < space.modes(); ++i) v(space.generator_id(i, color)) = coords(i);
    return v;
}

Eigen::VectorXd fermi_one_particle_vector(const FermiSpace& space, int sector, double c,
                                          int color) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(space.generators());
    v(space.generator_id(sector, color)) = c;
    return v;
}

}  // namespace

BoseState pi_sigma(const BosePoly& poly, const BoseOneParticleModel& model,
                   const BoseSpace& space) {
    require_plus_supported(poly, "pi_sigma");
    for (const auto& m : poly)
        if (static_cast<int>(m.factors.size()) > space.degree())
            throw contract_error("pi_sigma: monomial degree exceeds the truncation");
    const LambdaCoords coords(model.split.lambda);
    const BosePoly expanded = wick_unorder(poly, bose_pairing(model));
    BoseState state = BoseState::Zero(space.dim());
    for (const auto& m : expanded) {
        std::vector<Eigen::VectorXd> factors;
        factors.reserve(m.factors.size());
        for (const auto& f : m.factors)
            factors.push_back(
                bose_one_particle_vector(space, coords(model.class_of(0, f.vec)), f.color));
        state += m.coeff * space.state_from_factors(factors);
    }
    return state;
}

FermiState pi_sigma_F(const FermiPoly& poly, const FermiOneParticleModel& model,
                      const FermiSpace& space) {
    require_plus_supported(poly, "pi_sigma_F");
    const FermiPoly expanded = wick_unorder(poly, fermi_pairing(model));
    FermiState state = FermiState::Zero(space.dim());
    for (const auto& m : expanded) {
        std::vector<Eigen::VectorXd> factors;
        factors.reserve(m.factors.size());
        for (const auto& f : m.factors)
            factors.push_back(fermi_one_particle_vector(
                space, f.sector, FermiOneParticleModel::constant_of(f.vec), f.color));
        state += m.coeff * space.state_from_factors(factors);
    }
    return state;
}

Eigen::VectorXd pi_sigma_combined(const MixedPoly& poly, const BoseOneParticleModel& bmodel,
                                  const FermiOneParticleModel& fmodel, const BoseSpace& bspace,
                                  const FermiSpace& fspace) {
    require_plus_supported(poly, "pi_sigma_combined");
    for (const auto& m : poly)
        if (static_cast<int>(m.bose.size()) > bspace.degree())
            throw contract_error("pi_sigma_combined: Bose degree exceeds the truncation");
    const LambdaCoords coords(bmodel.split.lambda);
    const MixedPoly expanded =
        wick_unorder(poly, bose_pairing(bmodel), fermi_pairing(fmodel));
    Eigen::VectorXd state = Eigen::VectorXd::Zero(bspace.dim() * fspace.dim());
    for (const auto& m : expanded) {
        std::vector<Eigen::VectorXd> bf;
        bf.reserve(m.bose.size());
        for (const auto& f : m.bose)
            bf.push_back(
                bose_one_particle_vector(bspace, coords(bmodel.class_of(0, f.vec)), f.color));
        std::vector<Eigen::VectorXd> ff;
        ff.reserve(m.fermi.size());
        for (const auto& f : m.fermi)
            ff.push_back(fermi_one_particle_vector(
                fspace, f.sector, FermiOneParticleModel::constant_of(f.vec), f.color));
        const BoseState b = bspace.state_from_factors(bf);
        const FermiState fs = fspace.state_from_factors(ff);
        for (int ib = 0; ib < bspace.dim(); ++ib) {
            if (b(ib) == 0.0) continue;
            state.segment(ib * fspace.dim(), fspace.dim()) += m.coeff * b(ib) * fs;
        }
    }
    return state;
}

double ghost_negativity_witness(const FermiOneParticleModel& model) {
    if (model.null_modes < 1)
        throw contract_error("ghost_negativity_witness: needs null_modes >= 1");
    // Pick the largest same-side null pairing w_ij (null indices start at 1).
    int bi = 1, bj = 1;
    double best = -1.0;
    for (int i = 1; i < model.sector_dim; ++i)
        for (int j = 1; j < model.sector_dim; ++j)
            if (std::abs(model.same_side(i, j)) > best) {
                best = std::abs(model.same_side(i, j));
                bi = i;
                bj = j;
            }
    FermiMonomial p;
    p.factors.push_back({0, 0, Eigen::VectorXd::Unit(model.sector_dim, bi), 0});
    p.factors.push_back({0, 1, Eigen::VectorXd::Unit(model.sector_dim, bj), 0});
    const FermiPoly pp{p};
    const FermiPoly rpt = reflect(t_map(pp));
    return psi(fermi_product(rpt, pp), fermi_pairing(model));
}

// ---------------------------------------------------------------------------
// Gluing identities over the three-region model.

namespace {

struct ClassFactorB {
    Eigen::VectorXd cls;  // in H^1(Sigma,R) = R^{2g}
    int color = 0;
};
struct ClassFactorF {
    int sector = 0;
    double c = 0.0;
    int color = 0;
};
struct ClassMonomial {
    double coeff = 1.0;
    std::vector<ClassFactorB> bose;
    std::vector<ClassFactorF> fermi;
};
using ClassPoly = std::vector<ClassMonomial>;

// pi-hat for a given cut: express in the Wick basis, then map factors.
ClassPoly project_classes(const MixedPoly& poly, const ThreeRegionModel& model, int cut) {
    const MixedPoly expanded =
        wick_unorder(poly, bose_pairing(model), fermi_pairing(model));
    ClassPoly out;
    for (const auto& m : expanded) {
        ClassMonomial cm;
        cm.coeff = m.coeff;
        for (const auto& f : m.bose)
            cm.bose.push_back({model.bose_class(cut, f.region, f.vec), f.color});
        for (const auto& f : m.fermi)
            cm.fermi.push_back({f.sector, f.vec(0), f.color});
        out.push_back(std::move(cm));
    }
    return out;
}

// <tensor of a_i, S* tensor of b_j> in the permanent Sym convention over the
// Q-metric on H^1; Q(a, S*b) is the plain intersection pairing.
double bose_class_pairing(const std::vector<ClassFactorB>& a, const std::vector<ClassFactorB>& b,
                          const SplittingSpec& spec) {
    if (a.size() != b.size()) return 0.0;
    const int k = static_cast<int>(a.size());
    if (k == 0) return 1.0;
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m(i, j) = (a[i].color == b[j].color)
                          ? spec.q_full(a[i].cls, spec.s_star * b[j].cls)
                          : 0.0;
    return permanent(m);
}

// <wedge of x_i, J_F wedge of y_j>_+ = det[split(x_i, y_j)].
double fermi_class_pairing(const std::vector<ClassFactorF>& a, const std::vector<ClassFactorF>& b,
                           double vol) {
    if (a.size() != b.size()) return 0.0;
    const int k = static_cast<int>(a.size());
    if (k == 0) return 1.0;
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m(i, j) = (a[i].color == b[j].color && a[i].sector != b[j].sector)
                          ? vol * a[i].c * b[j].c
                          : 0.0;
    return m.determinant();
}

double class_pairing(const ClassPoly& a, const ClassPoly& b, const SplittingSpec& spec) {
    double total = 0.0;
    for (const auto& x : a)
        for (const auto& y : b)
            total += x.coeff * y.coeff * bose_class_pairing(x.bose, y.bose, spec) *
                     fermi_class_pairing(x.fermi, y.fermi, spec.vol);
    return total;
}

MixedMonomial random_monomial(const ThreeRegionModel& model, int region, int max_deg, int colors,
                              Rng& rng) {
    MixedMonomial m;
    m.coeff = rng.gaussian();
    const int deg = rng.uniform_int(max_deg + 1);
    for (int i = 0; i < deg; ++i) {
        if (rng.uniform() < 0.5) {
            BoseFactor f;
            f.region = region;
            f.vec = Eigen::VectorXd::Zero(model.bose_dim);
            for (int k = 0; k < model.bose_dim; ++k) f.vec(k) = rng.gaussian();
            f.color = rng.uniform_int(colors);
            m.bose.push_back(std::move(f));
        } else {
            FermiFactor f;
            f.region = region;
            f.sector = rng.uniform_int(2);
            f.vec = Eigen::VectorXd::Zero(model.sector_dim);
            for (int k = 0; k < model.sector_dim; ++k) f.vec(k) = rng.gaussian();
            f.color = rng.uniform_int(colors);
            m.fermi.push_back(std::move(f));
        }
    }
    return m;
}

}  // namespace

ValidationReport verify_gluing(const ThreeRegionModel& model, int trials, std::uint64_t seed,
                               double tol) {
    ValidationReport report;
    report.subject = "gluing";
    Rng rng = Rng::stream(seed, 0x61ae);
    // Colors kept small: the identities are color-diagonal.
    const int colors = 2;

    double res_cut1 = 0.0, res_cut2 = 0.0, res_pi = 0.0;
    double res_bose1 = 0.0, res_bose2 = 0.0, res_fermi1 = 0.0, res_fermi2 = 0.0;

    for (int t = 0; t < trials; ++t) {
        const MixedPoly p{random_monomial(model, 0, 3, colors, rng)};
        const MixedPoly q{random_monomial(model, 1, 3, colors, rng)};
        const MixedPoly r{random_monomial(model, 2, 3, colors, rng)};
        const MixedPoly pq = mixed_product(p, q);
        const MixedPoly qr = mixed_product(q, r);
        const MixedPoly pqr = mixed_product(pq, r);

        const double lhs = phi_psi(pqr, bose_pairing(model), fermi_pairing(model));
        const double scale = std::max(1.0, std::abs(lhs));

        // Combined identity, both cuts. The conjugation is applied at the
        // polynomial level; it commutes with the Wick expansion because every
        // contraction removes one 0-form and one 2-form factor.
        const double cut1 = class_pairing(project_classes(c_conj(p), model, 1),
                                          project_classes(qr, model, 1), model.split);
        const double cut2 = class_pairing(project_classes(c_conj(pq), model, 2),
                                          project_classes(r, model, 2), model.split);
        res_cut1 = std::max(res_cut1, std::abs(lhs - cut1) / scale);
        res_cut2 = std::max(res_cut2, std::abs(lhs - cut2) / scale);

        // Bose-only and Fermi-only specializations.
        {
            MixedPoly pb = p, qb = q, rb = r;
            for (auto* poly : {&pb, &qb, &rb})
                for (auto& m : *poly) m.fermi.clear();
            const MixedPoly prod = mixed_product(mixed_product(pb, qb), rb);
            const double l = phi_psi(prod, bose_pairing(model), fermi_pairing(model));
            const double s = std::max(1.0, std::abs(l));
            const double c1 = class_pairing(project_classes(pb, model, 1),
                                            project_classes(mixed_product(qb, rb), model, 1),
                                            model.split);
            const double c2 = class_pairing(project_classes(mixed_product(pb, qb), model, 2),
                                            project_classes(rb, model, 2), model.split);
            res_bose1 = std::max(res_bose1, std::abs(l - c1) / s);
            res_bose2 = std::max(res_bose2, std::abs(l - c2) / s);
        }
        {
            MixedPoly pf = p, qf = q, rf = r;
            for (auto* poly : {&pf, &qf, &rf})
                for (auto& m : *poly) m.bose.clear();
            const MixedPoly prod = mixed_product(mixed_product(pf, qf), rf);
            const double l = phi_psi(prod, bose_pairing(model), fermi_pairing(model));
            const double s = std::max(1.0, std::abs(l));
            const double c1 = class_pairing(project_classes(c_conj(pf), model, 1),
                                            project_classes(mixed_product(qf, rf), model, 1),
                                            model.split);
            const double c2 =
                class_pairing(project_classes(c_conj(mixed_product(pf, qf)), model, 2),
                              project_classes(rf, model, 2), model.split);
            res_fermi1 = std::max(res_fermi1, std::abs(l - c1) / s);
            res_fermi2 = std::max(res_fermi2, std::abs(l - c2) / s);
        }

        // Cut-independence of the outer-region projections, probed against
        // random dual tuples.
        for (const auto& [poly, region] : {std::pair{&p, 0}, std::pair{&r, 2}}) {
            (void)region;
            const ClassPoly a1 = project_classes(*poly, model, 1);
            const ClassPoly a2 = project_classes(*poly, model, 2);
            for (int probe = 0; probe < 3; ++probe) {
                ClassMonomial cm;
                cm.coeff = 1.0;
                const int nb = static_cast<int>((*poly)[0].bose.size());
                const int nf = static_cast<int>((*poly)[0].fermi.size());
                for (int i = 0; i < nb; ++i) {
                    Eigen::VectorXd cls(2 * model.split.genus);
                    for (int k = 0; k < cls.size(); ++k) cls(k) = rng.gaussian();
                    cm.bose.push_back({cls, rng.uniform_int(colors)});
                }
                for (int i = 0; i < nf; ++i)
                    cm.fermi.push_back({rng.uniform_int(2), rng.gaussian(), rng.uniform_int(colors)});
                const ClassPoly probe_poly{cm};
                const double v1 = class_pairing(a1, probe_poly, model.split);
                const double v2 = class_pairing(a2, probe_poly, model.split);
                res_pi = std::max(res_pi, std::abs(v1 - v2) / std::max(1.0, std::abs(v1)));
            }
        }
    }

    report.add("combined_gluing_cut1", res_cut1, tol);
    report.add("combined_gluing_cut2", res_cut2, tol);
    report.add("bose_gluing_cut1", res_bose1, tol);
    report.add("bose_gluing_cut2", res_bose2, tol);
    report.add("fermi_gluing_cut1", res_fermi1, tol);
    report.add("fermi_gluing_cut2", res_fermi2, tol);
    report.add("pi_cut_independence", res_pi, tol);
    return report;
}

}  // namespace csrp
