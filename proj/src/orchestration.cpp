#include "spinbeats/orchestration.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "spinbeats/channels.hpp"
#include "spinbeats/rng.hpp"

namespace spinbeats {

int worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned cap = hw;
    if (const char* env = std::getenv("SPINBEATS_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) cap = static_cast<unsigned>(v);
    }
    return static_cast<int>(std::min<std::size_t>(std::min<unsigned>(hw, cap), std::max<std::size_t>(jobs, 1)));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    const int count = std::min<int>(threads, static_cast<int>(n));
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::vector<SimPoint> run_method_grid(const SpinSystemSpec& spec, const MethodSettings& method,
                                      const std::vector<double>& times, std::uint64_t seed,
                                      int threads) {
    spec.validate();
    const SpinEvolution evolution(spec);  // shared, read-only across workers

    std::vector<SimPoint> out(times.size());
    parallel_for(times.size(), threads, [&](std::size_t i) {
        const double t = times[i];
        const std::uint64_t point_seed = mix_seed(seed, i);
        SimPoint& p = out[i];
        p.t_ns = t;
        p.shots = method.shots;
        p.seed = point_seed;

        const double s_isolated = evolution.singlet_probability(t);

        switch (method.kind) {
            case MethodKind::Kraus: {
                const MethodResult r =
                    kraus_method(std::clamp(s_isolated, 0.0, 1.0), t, spec.t1_ns, spec.t2_ns,
                                 method.shots, point_seed, spec.sigma_rad_per_ns);
                p.s_est = r.s_estimate;
                p.stderr_est = r.stderr_estimate;
                p.s_exact = relaxed_gaussian(s_isolated, t, spec.t1_ns, spec.t2_ns,
                                             spec.sigma_rad_per_ns);
                break;
            }
            case MethodKind::Inherent: {
                const InherentResult r = inherent_method(spec, t, method.qubit, method.n_echo,
                                                         method.shots, point_seed, s_isolated);
                p.s_est = r.s_echo;
                p.stderr_est = r.stderr_estimate;
                p.s_exact = relaxed_gaussian(s_isolated, t, spec.t1_ns, spec.t2_ns,
                                             spec.sigma_rad_per_ns);
                break;
            }
            case MethodKind::InherentCorrection: {
                // run the inherent stage at equal pair times set by the
                // finite target T2, then re-map onto (target T1, target T2)
                SpinSystemSpec stage = spec;
                stage.t1_ns = method.target_t2_ns;
                stage.t2_ns = method.target_t2_ns;
                const InherentResult run = inherent_method(stage, t, method.qubit, method.n_echo,
                                                           method.shots, point_seed, s_isolated);
                const InherentResult corr = inherent_correction(
                    stage, t, method.qubit, method.n_echo, method.shots, mix_seed(point_seed, 1));
                const double n = static_cast<double>(std::max<std::uint64_t>(method.shots, 1));
                auto pop_var = [&](double prob) { return std::max(0.0, prob * (1.0 - prob)) / n; };
                if (std::isinf(method.target_t1_ns) && run.t_wall_ns > 0.0) {
                    // no transitions into T+- come from the encoding, so the
                    // population lost to T1 decay is read straight off the
                    // corrector and added back
                    p.s_est = run.pops.singlet + corr.pops.t_minus;
                    if (method.shots > 0)
                        p.stderr_est = std::sqrt(pop_var(run.pops.singlet) +
                                                 pop_var(2.0 * corr.pops.t_minus) / 4.0);
                } else {
                    const MethodResult kraus_corr =
                        kraus_correction(t, method.target_t1_ns, method.target_t2_ns, method.shots,
                                         mix_seed(point_seed, 2), spec.sigma_rad_per_ns);
                    p.s_est = double_correction(run.pops, corr.pops, kraus_corr.pops);
                    if (method.shots > 0) {
                        // first-order error propagation through the undo/redo
                        const double denom_s = corr.pops.singlet - corr.pops.t0;
                        const double denom_t = 1.0 - 4.0 * corr.pops.t_plus;
                        const double d = (run.pops.singlet - run.pops.t0) / denom_s;
                        const double u =
                            (run.pops.t_plus - corr.pops.t_plus) / denom_t;
                        const double a2 = 0.5 * (kraus_corr.pops.singlet + kraus_corr.pops.t0);
                        const double b2 = 0.5 * (kraus_corr.pops.singlet - kraus_corr.pops.t0);
                        const double var_d =
                            (pop_var(run.pops.singlet) + pop_var(run.pops.t0) +
                             d * d * (pop_var(corr.pops.singlet) + pop_var(corr.pops.t0))) /
                            (denom_s * denom_s);
                        const double var_u =
                            (pop_var(2.0 * run.pops.t_plus) / 4.0 +
                             pop_var(2.0 * corr.pops.t_plus) / 4.0 * (1.0 - 4.0 * u) *
                                 (1.0 - 4.0 * u)) /
                            (denom_t * denom_t);
                        const double var_kraus =
                            0.25 * ((1.0 - 2.0 * u + d) * (1.0 - 2.0 * u + d) *
                                        pop_var(kraus_corr.pops.singlet) +
                                    (1.0 - 2.0 * u - d) * (1.0 - 2.0 * u - d) *
                                        pop_var(kraus_corr.pops.t0));
                        p.stderr_est = std::sqrt(b2 * b2 * var_d + 4.0 * a2 * a2 * var_u + var_kraus);
                    }
                }
                p.s_exact = relaxed_gaussian(s_isolated, t, method.target_t1_ns,
                                             method.target_t2_ns, spec.sigma_rad_per_ns);
                break;
            }
        }
    });
    return out;
}

std::vector<MfePoint> assemble_mfe(const std::vector<SimPoint>& high,
                                   const std::vector<SimPoint>& low, double theta) {
    if (high.size() != low.size())
        throw std::invalid_argument("assemble_mfe: time grids differ in length");
    std::vector<MfePoint> out(high.size());
    for (std::size_t i = 0; i < high.size(); ++i) {
        if (std::abs(high[i].t_ns - low[i].t_ns) > 1e-9)
            throw std::invalid_argument("assemble_mfe: time grids do not match");
        out[i].t_ns = high[i].t_ns;
        out[i].m_est = tr_mfe(high[i].s_est, low[i].s_est, theta);
        out[i].m_theory = tr_mfe(high[i].s_exact, low[i].s_exact, theta);
    }
    return out;
}

}  // namespace spinbeats
