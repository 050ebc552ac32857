#include "spinbeats/experiments.hpp"

#include <cmath>

#include "spinbeats/channels.hpp"
#include "spinbeats/protocols.hpp"
#include "spinbeats/rng.hpp"

namespace spinbeats {

void FtParams::validate() const {
    if (a <= 0.0 || b <= 0.0 || t1_ns <= 0.0 || t2_ns <= 0.0 || alpha <= 0.0)
        throw std::invalid_argument("FtParams: all parameters must be positive");
}

double ft_model(double t_ns, const FtParams& p) {
    if (t_ns < 0.0) throw std::invalid_argument("ft_model: t must be >= 0");
    return p.a * std::exp(-t_ns / p.t1_ns) + p.b * std::pow(1.0 + t_ns / p.t2_ns, -p.alpha);
}

void GridSpec::validate() const {
    if (points < 2) throw std::invalid_argument("grid: need at least two points");
    if (!(stop_ns > start_ns) || start_ns < 0.0)
        throw std::invalid_argument("grid: need 0 <= start < stop");
}

std::vector<double> GridSpec::times() const {
    validate();
    std::vector<double> t(points);
    const double step = (stop_ns - start_ns) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) t[i] = start_ns + step * i;
    return t;
}

SystemPreset preset(const std::string& name) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    SystemPreset p;
    p.name = name;
    if (name == "dps" || name == "dps-hfc") {
        p.low.g1 = 2.0028;
        p.low.g2 = 2.0082;
        p.low.field_mT = 17.0;
        p.high = p.low;
        p.high.field_mT = 960.0;
        const double tau = (name == "dps") ? 50.0 : 60.0;
        p.low.t1_ns = p.low.t2_ns = tau;
        p.high.t1_ns = p.high.t2_ns = tau;
        p.theta = 0.425;
        p.ft = {1.317e6, 6.658e5, 2.1432, 5.1549, 1.223};
        p.detector_sigma = 700.0;
        p.grid = {0.0, 60.0, 121};
        return p;
    }
    if (name == "custom") {
        // bare scaffold: every physical quantity comes from the config
        p.low.t1_ns = p.low.t2_ns = nan;
        p.high = p.low;
        p.grid = {0.0, 60.0, 121};
        p.relaxation_required = true;
        return p;
    }
    if (name == "tmp") {
        p.low.g1 = p.low.g2 = kGFree;
        p.low.field_mT = 0.0;
        p.low.hfc = {{1, 1.0, 1.8}, {1, 0.5, -1.87}};  // nitrogen, then amine hydrogen
        p.high = p.low;
        p.high.field_mT = 100.0;
        p.low.t1_ns = p.low.t2_ns = nan;   // not printed in the source data; must be configured
        p.high.t1_ns = p.high.t2_ns = nan;
        p.theta = 0.108;
        p.ft = {3.12e6, 2.21e5, 3.47, 123.0, 6.11};
        p.detector_sigma = 75.0;
        p.grid = {0.0, 100.0, 121};
        p.relaxation_required = true;
        return p;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"dps", "dps-hfc", "tmp", "custom"}; }

std::vector<NoisePoint> noisy_mfe_study(const SystemPreset& sys, const NoiseStudyConfig& cfg,
                                        const std::vector<double>& times) {
    if (cfg.sigma < 0.0) throw std::invalid_argument("noisy_mfe_study: sigma must be >= 0");
    if (cfg.trials < 1) throw std::invalid_argument("noisy_mfe_study: trials must be >= 1");
    sys.ft.validate();

    const SpinEvolution low(sys.low);
    const SpinEvolution high(sys.high);

    std::vector<NoisePoint> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double s0 = relaxed_gaussian(low.singlet_probability(t), t, sys.low.t1_ns,
                                           sys.low.t2_ns, sys.low.sigma_rad_per_ns);
        const double sb = relaxed_gaussian(high.singlet_probability(t), t, sys.high.t1_ns,
                                           sys.high.t2_ns, sys.high.sigma_rad_per_ns);
        const double f = ft_model(t, sys.ft);
        const double i0 = intensity(f, s0, sys.theta);
        const double ib = intensity(f, sb, sys.theta);

        NoisePoint& pt = out[i];
        pt.t_ns = t;
        pt.m_theory = tr_mfe(sb, s0, sys.theta);
        pt.delta_prediction =
            i0 > 0.0 ? (cfg.sigma / i0) * std::sqrt(1.0 + pt.m_theory * pt.m_theory) : 0.0;

        Rng64 rng(mix_seed(cfg.seed, i));
        std::vector<double> samples;
        samples.reserve(cfg.trials);
        for (int trial = 0; trial < cfg.trials; ++trial) {
            const double noisy_ib = ib + rng.normal(cfg.mu, cfg.sigma);
            const double noisy_i0 = i0 + rng.normal(cfg.mu, cfg.sigma);
            if (noisy_i0 <= 0.0) {
                ++pt.rejected;
                continue;
            }
            samples.push_back(noisy_ib / noisy_i0);
        }
        if (!samples.empty()) {
            double sum = 0.0;
            for (double m : samples) sum += m;
            pt.mean = sum / static_cast<double>(samples.size());
            double var = 0.0;
            for (double m : samples) var += (m - pt.mean) * (m - pt.mean);
            pt.stddev = std::sqrt(var / static_cast<double>(samples.size()));
        }
    }
    return out;
}

double mse_percent(const std::vector<double>& series, const std::vector<double>& reference) {
    if (series.size() != reference.size() || series.empty())
        throw std::invalid_argument("mse_percent: series lengths differ or are empty");
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double d = series[i] - reference[i];
        acc += d * d;
    }
    return 100.0 * acc / static_cast<double>(series.size());
}

}  // namespace spinbeats
