#include "csrp/partition.hpp"

#include <cmath>

#include "csrp/errors.hpp"

namespace csrp {

namespace {

struct LiftedOps {
    SpMat ob;   // O_B otimes I
    SpMat obf;  // O_BF
    double ob_norm = 0.0;
    double obf_norm = 0.0;
};

LiftedOps lift(const ProductSpace& pspace, const InteractionSet& inter) {
    LiftedOps ops;
    ops.ob = pspace.lift_bose(inter.o_b.mat);
    ops.obf = inter.o_bf.mat;
    ops.ob_norm = spectral_norm_estimate(ops.ob);
    ops.obf_norm = spectral_norm_estimate(ops.obf);
    return ops;
}

}  // namespace

std::complex<double> z_n(const ProductSpace& pspace, const InteractionSet& inter, double eps,
                         double lambda, int n, bool bf_order,
                         std::vector<double>* step_norms) {
    if (n < 1) throw contract_error("z_n: n must be >= 1");
    const LiftedOps ops = lift(pspace, inter);
    const Eigen::ArrayXd damp = (-eps / n * pspace.number_diag().array()).exp();
    const std::complex<double> phase(0.0, lambda / n);

    Eigen::VectorXcd v = pspace.vacuum();
    for (int step = 0; step < n; ++step) {
        if (lambda != 0.0) {
            if (bf_order) {
                v = exp_action(ops.ob, phase, v, ops.ob_norm);
                v = exp_action(ops.obf, phase, v, ops.obf_norm);
            } else {
                v = exp_action(ops.obf, phase, v, ops.obf_norm);
                v = exp_action(ops.ob, phase, v, ops.ob_norm);
            }
        }
        v.array() *= damp.cast<std::complex<double>>();
        if (step_norms) step_norms->push_back(pspace.norm(v));
    }
    // <Omega, J v>: the Gram is 1 on the vacuum and J fixes it.
    return v(0);
}

std::complex<double> z_direct(const ProductSpace& pspace, const InteractionSet& inter,
                              double eps, double lambda) {
    const LiftedOps ops = lift(pspace, inter);
    const Eigen::ArrayXd number = pspace.number_diag().array();
    const double norm_est =
        eps * number.maxCoeff() + std::abs(lambda) * (ops.ob_norm + ops.obf_norm) + 1e-12;

    const auto av = [&](const Eigen::VectorXcd& x) {
        Eigen::VectorXcd w = std::complex<double>(0.0, lambda) * (ops.ob * x + ops.obf * x);
        w.array() -= eps * number.cast<std::complex<double>>() * x.array();
        return w;
    };

    // Taylor action of the full generator with step splitting.
    const int steps = std::max(1, static_cast<int>(std::ceil(norm_est)));
    Eigen::VectorXcd v = pspace.vacuum();
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd acc = v;
        Eigen::VectorXcd term = v;
        const double base = v.norm();
        for (int k = 1; k <= 96; ++k) {
            term = av(term) / static_cast<double>(steps * k);
            acc += term;
            if (term.norm() <= 1e-13 * std::max(base, acc.norm())) break;
            if (k == 96) throw numeric_error("z_direct: Taylor series failed to converge");
        }
        v.swap(acc);
    }
    return v(0);
}

PartitionSequence z_limit(const ProductSpace& pspace, const InteractionSet& inter,
                          const TrotterOptions& opt) {
    PartitionSequence seq;
    for (int n = 1; n <= opt.n_max; n *= 2) seq.ns.push_back(n);
    for (int n : seq.ns)
        seq.z.push_back(z_n(pspace, inter, opt.eps, opt.lambda, n, opt.bf_order));
    for (std::size_t i = 0; i + 1 < seq.z.size(); ++i)
        seq.cauchy.push_back(std::abs(seq.z[i] - seq.z[i + 1]));

    // Least-squares slope of log |Z_n - Z_2n| against log n, fitted on the
    // asymptotic tail (the last few pairs) where the expansion is clean.
    int used = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t tail_begin =
        seq.cauchy.size() > 5 ? seq.cauchy.size() - 5 : std::size_t{0};
    for (std::size_t i = tail_begin; i < seq.cauchy.size(); ++i) {
        if (seq.cauchy[i] <= 1e-15) continue;
        const double x = std::log(static_cast<double>(seq.ns[i]));
        const double y = std::log(seq.cauchy[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used >= 2) {
        const double denom = used * sxx - sx * sx;
        if (std::abs(denom) > 1e-30) seq.fitted_order = -(used * sxy - sx * sy) / denom;
    }

    if (seq.z.size() >= 2) {
        const double p = std::min(3.0, std::max(0.5, seq.fitted_order));
        const auto zn = seq.z[seq.z.size() - 2];
        const auto z2n = seq.z.back();
        seq.richardson = z2n + (z2n - zn) / (std::pow(2.0, p) - 1.0);
    }

    if (opt.compute_direct) {
        seq.direct = z_direct(pspace, inter, opt.eps, opt.lambda);
        seq.has_direct = true;
    }
    return seq;
}

}  // namespace csrp
