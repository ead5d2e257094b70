#include "csrp/airy.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include <Eigen/Dense>

#include "csrp/errors.hpp"
#include "csrp/rng.hpp"

namespace csrp {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

int env_thread_cap() {
    if (const char* s = std::getenv("CSRP_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Nonzero entries of the cubic phase tensor sum f_{abc} N_{ijk} over the
// composite index (a i).
struct PhaseTerm {
    int x, y, z;  // composite indices a*n+alpha style (mode-major: i*n+a? see below)
    double w;
};

struct Integrand {
    int g = 0, n = 0, m = 0, dim = 0;  // dim = g*n
    std::vector<PhaseTerm> phase;      // cubic coefficients
    std::vector<Eigen::MatrixXd> tb;   // per composite index: 6 B_a otimes F_alpha
    Eigen::MatrixXd k_full;            // K otimes I_n
    Eigen::MatrixXd chol;              // L with L L^T = (J otimes I)/2
    double gauss_norm = 0.0;           // pi^{D/2} det(J otimes I)^{1/2}

    // t indexed by (mode a, color alpha) -> a*n + alpha.
    std::complex<double> operator()(const Eigen::VectorXd& t, double lambda) const {
        double s3 = 0.0;
        for (const auto& term : phase) s3 += term.w * t(term.x) * t(term.y) * t(term.z);
        const std::complex<double> ph = std::exp(std::complex<double>(0.0, -lambda * s3));

        Eigen::MatrixXcd d = k_full.cast<std::complex<double>>();
        for (int idx = 0; idx < dim; ++idx) {
            if (t(idx) == 0.0) continue;
            d += std::complex<double>(0.0, 6.0 * lambda * t(idx)) *
                 tb[idx].cast<std::complex<double>>();
        }
        return ph * Eigen::PartialPivLU<Eigen::MatrixXcd>(d).determinant();
    }
};

Integrand make_integrand(const SplittingSpec& spec, const LieAlgebraSpec& lie) {
    Integrand f;
    f.g = spec.genus;
    f.n = lie.dim;
    f.dim = f.g * f.n;
    f.m = static_cast<int>(spec.airy_k.rows());
    if (static_cast<int>(spec.airy_b.size()) < f.g)
        throw validation_error("airy: need one B matrix per mode");
    if (static_cast<int>(spec.airy_f.size()) < f.n)
        throw validation_error("airy: need one F matrix per color");

    for (int a = 0; a < f.g; ++a)
        for (int b = 0; b < f.g; ++b)
            for (int c = 0; c < f.g; ++c) {
                const double nv = spec.n_at(a, b, c);
                if (nv == 0.0) continue;
                for (int al = 0; al < f.n; ++al)
                    for (int be = 0; be < f.n; ++be)
                        for (int ga = 0; ga < f.n; ++ga) {
                            const double fv = lie.f_at(al, be, ga);
                            if (fv == 0.0) continue;
                            f.phase.push_back(
                                {a * f.n + al, b * f.n + be, c * f.n + ga, fv * nv});
                        }
            }

    const int mn = f.m * f.n;
    f.k_full.setZero(mn, mn);
    for (int i = 0; i < f.m; ++i)
        for (int j = 0; j < f.m; ++j)
            for (int al = 0; al < f.n; ++al)
                f.k_full(i * f.n + al, j * f.n + al) = spec.airy_k(i, j);

    f.tb.resize(f.dim);
    for (int a = 0; a < f.g; ++a)
        for (int al = 0; al < f.n; ++al) {
            Eigen::MatrixXd kron(mn, mn);
            kron.setZero();
            for (int i = 0; i < f.m; ++i)
                for (int j = 0; j < f.m; ++j) {
                    const double bv = spec.airy_b[a](i, j);
                    if (bv == 0.0) continue;
                    for (int r = 0; r < f.n; ++r)
                        for (int s = 0; s < f.n; ++s)
                            kron(i * f.n + r, j * f.n + s) = bv * spec.airy_f[al](r, s);
                }
            f.tb[a * f.n + al] = kron;
        }

    // Covariance (J otimes I)/2 and the Gaussian normalization.
    Eigen::MatrixXd jfull(f.dim, f.dim);
    jfull.setZero();
    for (int a = 0; a < f.g; ++a)
        for (int b = 0; b < f.g; ++b)
            for (int al = 0; al < f.n; ++al)
                jfull(a * f.n + al, b * f.n + al) = spec.airy_j(a, b);
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * jfull);
    if (llt.info() != Eigen::Success)
        throw validation_error("airy: J must be positive definite");
    f.chol = llt.matrixL();
    f.gauss_norm =
        std::pow(kPi, 0.5 * f.dim) * std::sqrt(jfull.determinant());
    return f;
}

AiryResult airy_monte_carlo(const Integrand& f, const AiryConfig& cfg) {
    const std::int64_t total = cfg.samples;
    if (total < 1) throw validation_error("airy: samples must be >= 1");
    // Fixed shard size: the shard split (and hence every drawn number) is
    // independent of the thread count.
    const std::int64_t shard_size = 16384;
    const std::int64_t shards = (total + shard_size - 1) / shard_size;

    std::vector<std::complex<double>> shard_sum(shards, 0.0);
    std::vector<double> shard_sum_re2(shards, 0.0), shard_sum_im2(shards, 0.0);

    const auto run_shard = [&](std::int64_t s) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(s));
        const std::int64_t begin = s * shard_size;
        const std::int64_t count = std::min(shard_size, total - begin);
        Eigen::VectorXd zvec(f.dim);
        std::complex<double> sum = 0.0;
        double sre2 = 0.0, sim2 = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            for (int k = 0; k < f.dim; ++k) zvec(k) = rng.gaussian();
            const Eigen::VectorXd t = f.chol * zvec;
            const std::complex<double> v = f(t, cfg.lambda);
            sum += v;
            sre2 += v.real() * v.real();
            sim2 += v.imag() * v.imag();
        }
        shard_sum[s] = sum;
        shard_sum_re2[s] = sre2;
        shard_sum_im2[s] = sim2;
    };

    const int threads = std::min<std::int64_t>(env_thread_cap(), shards);
    if (threads <= 1) {
        for (std::int64_t s = 0; s < shards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        std::int64_t next = 0;
        // static interleaved assignment keeps the result deterministic
        for (int tid = 0; tid < threads; ++tid)
            pool.emplace_back([&, tid]() {
                for (std::int64_t s = tid; s < shards; s += threads) run_shard(s);
            });
        for (auto& th : pool) th.join();
        (void)next;
    }

    std::complex<double> sum = 0.0;
    double sre2 = 0.0, sim2 = 0.0;
    for (std::int64_t s = 0; s < shards; ++s) {  // fixed merge order
        sum += shard_sum[s];
        sre2 += shard_sum_re2[s];
        sim2 += shard_sum_im2[s];
    }
    const double inv = 1.0 / static_cast<double>(total);
    const std::complex<double> mean = sum * inv;
    const double var_re = std::max(0.0, sre2 * inv - mean.real() * mean.real());
    const double var_im = std::max(0.0, sim2 * inv - mean.imag() * mean.imag());

    AiryResult r;
    r.value = f.gauss_norm * mean;
    r.std_error =
        f.gauss_norm * std::sqrt((var_re + var_im) / static_cast<double>(total));
    r.samples = total;
    return r;
}

std::complex<double> quadrature_pass(const Integrand& f, double lambda, int order) {
    std::vector<double> nodes, weights;
    gauss_hermite(order, nodes, weights);
    // Tensor product over dimensions via odometer iteration.
    std::vector<int> idx(f.dim, 0);
    Eigen::VectorXd u(f.dim);
    std::complex<double> total = 0.0;
    while (true) {
        double w = 1.0;
        for (int k = 0; k < f.dim; ++k) {
            u(k) = nodes[idx[k]];
            w *= weights[idx[k]];
        }
        // t = sqrt(2) L u maps e^{-u^2} onto the Gaussian factor.
        const Eigen::VectorXd t = std::sqrt(2.0) * (f.chol * u);
        total += w * f(t, lambda);
        int k = 0;
        while (k < f.dim && ++idx[k] == order) idx[k++] = 0;
        if (k == f.dim) break;
    }
    // Weights integrate e^{-u^2}; the Jacobian of t = sqrt2 L u combines with
    // the Gaussian normalization into gauss_norm / pi^{D/2}.
    return total * (f.gauss_norm / std::pow(kPi, 0.5 * f.dim));
}

AiryResult airy_quadrature(const Integrand& f, const AiryConfig& cfg) {
    if (f.dim > kQuadratureDimCap)
        throw capacity_error("airy: quadrature dimension " + std::to_string(f.dim) +
                             " exceeds cap " + std::to_string(kQuadratureDimCap));
    const int order = std::max(2, cfg.order);
    AiryResult r;
    r.value = quadrature_pass(f, cfg.lambda, order);
    r.refine_delta = std::abs(r.value - quadrature_pass(f, cfg.lambda, order - 2));
    r.samples = static_cast<std::int64_t>(std::pow(order, f.dim));
    return r;
}

}  // namespace

void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    // Golub-Welsch on the Hermite Jacobi matrix: off-diagonals sqrt(k/2).
    Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = std::sqrt(0.5 * k);
        jm(k - 1, k) = b;
        jm(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
    nodes.resize(order);
    weights.resize(order);
    const double mu0 = std::sqrt(kPi);  // int e^{-x^2} dx
    for (int k = 0; k < order; ++k) {
        nodes[k] = es.eigenvalues()(k);
        const double v = es.eigenvectors()(0, k);
        weights[k] = mu0 * v * v;
    }
}

double airy_closed_form_lambda0(const SplittingSpec& spec, const LieAlgebraSpec& lie) {
    const int d = spec.genus * lie.dim;
    const double detj = std::pow(spec.airy_j.determinant(), lie.dim);
    const double detk = std::pow(spec.airy_k.determinant(), lie.dim);
    return std::pow(kPi, 0.5 * d) * std::sqrt(detj) * detk;
}

AiryResult airy_value(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                      const AiryConfig& cfg) {
    const Integrand f = make_integrand(spec, lie);
    return cfg.method == AiryMethod::monte_carlo ? airy_monte_carlo(f, cfg)
                                                 : airy_quadrature(f, cfg);
}

std::vector<AirySweepRow> airy_sweep(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                                     const std::vector<double>& lambdas,
                                     const AiryConfig& cfg) {
    const Integrand f = make_integrand(spec, lie);
    std::vector<AirySweepRow> rows;
    for (double lam : lambdas) {
        AiryConfig c = cfg;
        c.lambda = lam;
        AirySweepRow row;
        row.lambda = lam;
        row.result = cfg.method == AiryMethod::monte_carlo ? airy_monte_carlo(f, c)
                                                           : airy_quadrature(f, c);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace csrp
