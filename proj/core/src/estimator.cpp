#include "nettrack/estimator.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "nettrack/errors.hpp"
#include "nettrack/linalg.hpp"

namespace nettrack {

Design make_scalar_design(const Plant& p, double alpha, Design::Provenance prov) {
    Design d;
    d.kind = Design::Kind::scalar;
    d.alpha = alpha;
    d.provenance = prov;
    d.W = identity(p.N()) - alpha * laplacian(p.graph);
    d.B = alpha * identity(p.n() * p.N());
    return d;
}

void validate_design(const Plant& p, const Design& d) {
    const int N = p.N(), n = p.n();
    if (d.W.rows != N || d.W.cols != N) throw DimensionMismatch("design: W must be N x N");
    if (d.B.rows != n * N || d.B.cols != n * N) throw DimensionMismatch("design: B must be nN x nN");
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += d.W(i, j);
        if (std::fabs(s - 1.0) > 1e-10)
            throw BadParams("design: W row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
    // scalar designs carry signed off-support entries (W = I - alpha L),
    // full designs must respect the graph support
    if (d.kind == Design::Kind::full) {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (i != j && !has_edge(p.graph, i, j) && d.W(i, j) != 0.0)
                    throw BadParams("design: W entry outside graph support at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
        for (int i = 0; i < n * N; ++i)
            for (int j = 0; j < n * N; ++j)
                if (i / n != j / n && d.B(i, j) != 0.0)
                    throw BadParams("design: B entry outside block diagonal");
    }
}

ErrorDynamics error_dynamics(const Plant& p, const Design& d) {
    validate_design(p, d);
    const int N = p.N(), n = p.n();
    const Matrix IA = kron(identity(N), p.A);
    const Matrix DH = build_DH(p);

    ErrorDynamics ed;
    ed.P = IA * (kron(d.W, identity(n)) - d.B * DH);
    std::vector<Matrix> rblocks;
    rblocks.reserve(N);
    for (int i = 0; i < N; ++i)
        rblocks.push_back(symmetrize(transpose(p.H[i]) * p.R[i] * p.H[i]));
    ed.Rbar = blockdiag(rblocks);
    ed.Acal = adjacency(p.graph) + identity(N);
    const Matrix AI = kron(ed.Acal, identity(n));
    const Matrix F = IA * d.B * AI;
    ed.Phi = symmetrize(F * ed.Rbar * transpose(F));
    ed.Sigma = symmetrize(ed.Phi + kron(ones(N, N), p.V));
    return ed;
}

std::vector<Vec> step_estimates(const Plant& p, const Design& d, const std::vector<Vec>& xhat,
                                const std::vector<Vec>& y) {
    const int N = p.N(), n = p.n();
    if (static_cast<int>(xhat.size()) != N || static_cast<int>(y.size()) != N)
        throw DimensionMismatch("step_estimates: need one state and one observation per agent");
    const auto nb = closed_neighborhoods(p.graph);
    std::vector<Vec> next(N);
    for (int i = 0; i < N; ++i) {
        Vec mix(n, 0.0);
        for (int j = 0; j < N; ++j) {
            const double w = d.W(i, j);
            if (w == 0.0) continue;
            for (int k = 0; k < n; ++k) mix[k] += w * xhat[j][k];
        }
        Vec innov(n, 0.0);
        for (int j : nb[i]) {
            // H_j^T (y_j - H_j xhat_i)
            Vec resid = y[j];
            const Vec pred = matvec(p.H[j], xhat[i]);
            for (size_t k = 0; k < resid.size(); ++k) resid[k] -= pred[k];
            const Vec back = matvec(transpose(p.H[j]), resid);
            for (int k = 0; k < n; ++k) innov[k] += back[k];
        }
        const Matrix Bi = block(d.B, i * n, i * n, n, n);
        const Vec gain = matvec(Bi, innov);
        for (int k = 0; k < n; ++k) mix[k] += gain[k];
        next[i] = matvec(p.A, mix);
    }
    return next;
}

namespace {

// Counter-derived stream: every (seed, trial) pair gets its own splitmix64
// sequence, so trials are independent and schedulable in any order. The
// starting state is a hash of the pair, not an arithmetic offset: splitmix
// walks its orbit in fixed increments, so adjacent offsets would make the
// trials shifted copies of one another instead of independent draws.
struct Rng {
    std::uint64_t s;
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    explicit Rng(std::uint64_t seed, std::uint64_t stream) {
        s = mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix((stream + 1) * 0xD1B54A32D192ED03ULL);
        for (int i = 0; i < 4; ++i) next();
    }
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double gaussian() {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }
};

int resolve_threads(int requested) {
    int t = requested;
    if (t <= 0) {
        t = static_cast<int>(std::thread::hardware_concurrency());
        if (t <= 0) t = 1;
    }
    if (const char* env = std::getenv("NETTRACK_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1 && cap < 1024) t = std::min(t, static_cast<int>(cap));
    }
    return std::max(1, t);
}

struct TrialOut {
    Matrix cov_avg;       // windowed average of e e^T
    Vec agent_sq;         // per-agent windowed sum of squared error norms
    Vec final_e;
    bool diverged = false;
    int diverged_step = -1;
};

}  // namespace

SimulationResult simulate(const Plant& p, const Design& d, const SimOptions& opts) {
    if (opts.steps < 1 || opts.trials < 1) throw BadParams("simulate: steps and trials must be >= 1");
    const ErrorDynamics ed = error_dynamics(p, d);
    const double pnorm = spectral_norm(ed.P);
    if (pnorm >= 1.0 && !opts.allow_unstable)
        throw Unstable("simulate: ||P||_2 = " + std::to_string(pnorm) + " >= 1");

    const int N = p.N(), n = p.n(), nN = n * N;
    const int steps = opts.steps, trials = opts.trials;
    const int win_start = steps - std::max(1, steps / 5);  // last 20% of steps
    const auto nb = closed_neighborhoods(p.graph);
    const Matrix AB = kron(identity(N), p.A) * d.B;
    const Matrix sqrtV = psd_sqrt(p.V);
    std::vector<Matrix> sqrtR;
    std::vector<Matrix> Ht;
    for (int i = 0; i < N; ++i) {
        sqrtR.push_back(psd_sqrt(p.R[i]));
        Ht.push_back(transpose(p.H[i]));
    }

    // Trials are grouped into fixed-size chunks. Chunk-local sums are merged
    // into the global series strictly in chunk order, so the result is
    // bit-identical for any thread count.
    const int chunk_size = 8;
    const int nchunks = (trials + chunk_size - 1) / chunk_size;
    std::vector<double> series_sum(static_cast<size_t>(steps) * nN, 0.0);
    std::vector<TrialOut> outs(trials);

    std::atomic<int> next_chunk{0};
    int merge_turn = 0;
    std::mutex merge_mu;
    std::condition_variable merge_cv;

    auto run_trial = [&](int t, std::vector<double>& local_series) {
        Rng rng(opts.seed, static_cast<std::uint64_t>(t));
        TrialOut& out = outs[t];
        out.cov_avg = Matrix(nN, nN);
        out.agent_sq.assign(N, 0.0);
        Vec e(nN, 0.0), u(nN, 0.0), stacked(nN, 0.0), v(n, 0.0), gv(n, 0.0);
        std::vector<Vec> r(N);
        int win_count = 0;
        for (int k = 0; k < steps; ++k) {
            for (int c = 0; c < n; ++c) gv[c] = rng.gaussian();
            v = matvec(sqrtV, gv);
            for (int i = 0; i < N; ++i) {
                Vec g(p.R[i].rows);
                for (auto& x : g) x = rng.gaussian();
                r[i] = matvec(sqrtR[i], g);
            }
            std::fill(stacked.begin(), stacked.end(), 0.0);
            for (int i = 0; i < N; ++i)
                for (int j : nb[i]) {
                    const Vec back = matvec(Ht[j], r[j]);
                    for (int c = 0; c < n; ++c) stacked[i * n + c] += back[c];
                }
            // u = (I (x) A) B stacked - 1 (x) v
            u = matvec(AB, stacked);
            for (int i = 0; i < N; ++i)
                for (int c = 0; c < n; ++c) u[i * n + c] -= v[c];
            const Vec Pe = matvec(ed.P, e);
            for (int c = 0; c < nN; ++c) e[c] = Pe[c] + u[c];

            double nsq = 0.0;
            for (int c = 0; c < nN; ++c) nsq += e[c] * e[c];
            if (nsq > 1e24) {  // norm above 1e12: flag and freeze this trial
                out.diverged = true;
                out.diverged_step = k;
                break;
            }
            for (int c = 0; c < nN; ++c) local_series[static_cast<size_t>(k) * nN + c] += e[c];
            if (k >= win_start) {
                ++win_count;
                for (int ci = 0; ci < nN; ++ci)
                    for (int cj = ci; cj < nN; ++cj) out.cov_avg(ci, cj) += e[ci] * e[cj];
                for (int i = 0; i < N; ++i) {
                    double s = 0.0;
                    for (int c = 0; c < n; ++c) s += e[i * n + c] * e[i * n + c];
                    out.agent_sq[i] += s;
                }
            }
            if (k == steps - 1) out.final_e = e;
        }
        if (out.final_e.empty()) out.final_e.assign(nN, 0.0);
        if (win_count > 0) {
            for (int ci = 0; ci < nN; ++ci)
                for (int cj = ci; cj < nN; ++cj) {
                    out.cov_avg(ci, cj) /= win_count;
                    out.cov_avg(cj, ci) = out.cov_avg(ci, cj);
                }
            for (auto& s : out.agent_sq) s /= win_count;
        }
    };

    auto worker = [&]() {
        std::vector<double> local_series(static_cast<size_t>(steps) * nN);
        while (true) {
            const int c = next_chunk.fetch_add(1);
            if (c >= nchunks) break;
            std::fill(local_series.begin(), local_series.end(), 0.0);
            const int lo = c * chunk_size;
            const int hi = std::min(trials, lo + chunk_size);
            for (int t = lo; t < hi; ++t) run_trial(t, local_series);
            std::unique_lock<std::mutex> lk(merge_mu);
            merge_cv.wait(lk, [&] { return merge_turn == c; });
            for (size_t i = 0; i < series_sum.size(); ++i) series_sum[i] += local_series[i];
            ++merge_turn;
            merge_cv.notify_all();
        }
    };

    const int nthreads = std::min(resolve_threads(opts.threads), nchunks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SimulationResult res;
    res.trials = trials;
    res.steps = steps;
    res.seed = opts.seed;
    res.empirical_mean_error.resize(steps);
    for (int k = 0; k < steps; ++k) {
        double s = 0.0;
        for (int c = 0; c < nN; ++c) {
            const double m = series_sum[static_cast<size_t>(k) * nN + c] / trials;
            s += m * m;
        }
        res.empirical_mean_error[k] = std::sqrt(s);
    }

    Matrix Sbar(nN, nN);
    res.per_agent_mse.assign(N, 0.0);
    res.final_mean.assign(nN, 0.0);
    for (int t = 0; t < trials; ++t) {
        Sbar = Sbar + outs[t].cov_avg;
        for (int i = 0; i < N; ++i) res.per_agent_mse[i] += outs[t].agent_sq[i];
        for (int c = 0; c < nN; ++c) res.final_mean[c] += outs[t].final_e[c];
        if (outs[t].diverged && !res.diverged) {
            res.diverged = true;
            res.diverged_step = outs[t].diverged_step;
        }
    }
    Sbar = (1.0 / trials) * Sbar;
    for (auto& x : res.per_agent_mse) x /= trials;
    for (auto& x : res.final_mean) x /= trials;

    const Spectrum spec = sym_eigen(symmetrize(Sbar));
    res.empirical_cov_norm = std::max(0.0, spec.eigenvalues.back());
    Vec topv(nN);
    for (int c = 0; c < nN; ++c) topv[c] = spec.eigenvectors(c, nN - 1);
    double mean_proj = 0.0, sq_proj = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Vec sv = matvec(outs[t].cov_avg, topv);
        const double proj = dot(topv, sv);
        mean_proj += proj;
        sq_proj += proj * proj;
    }
    mean_proj /= trials;
    const double var_proj = std::max(0.0, sq_proj / trials - mean_proj * mean_proj);
    res.cov_norm_stderr = std::sqrt(var_proj / std::max(1, trials - 1));

    double fvar = 0.0;
    for (int t = 0; t < trials; ++t) {
        double s = 0.0;
        for (int c = 0; c < nN; ++c) {
            const double dv = outs[t].final_e[c] - res.final_mean[c];
            s += dv * dv;
        }
        fvar += s;
    }
    res.final_std = trials > 1 ? std::sqrt(fvar / (trials - 1)) : 0.0;
    return res;
}

Matrix exact_steady_covariance(const ErrorDynamics& ed) {
    const double rho = spectral_radius(ed.P);
    if (rho >= 1.0 - 1e-9)
        throw Unstable("exact_steady_covariance: rho(P) = " + std::to_string(rho));
    return dlyap(ed.P, ed.Sigma, 1e-10);
}

}  // namespace nettrack
