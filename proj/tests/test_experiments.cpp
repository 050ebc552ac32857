#include "doctest.h"

#include <cmath>

#include "spinbeats/channels.hpp"
#include "spinbeats/experiments.hpp"
#include "spinbeats/protocols.hpp"

using namespace spinbeats;

namespace {

SystemPreset tmp_with_times(double tau_low, double t2_high) {
    SystemPreset sys = preset("tmp");
    sys.low.t1_ns = sys.low.t2_ns = tau_low;
    sys.high.t1_ns = std::numeric_limits<double>::infinity();
    sys.high.t2_ns = t2_high;
    return sys;
}

}  // namespace

TEST_CASE("recombination rate model") {
    const FtParams tmp{3.12e6, 2.21e5, 3.47, 123.0, 6.11};
    const FtParams dps{1.317e6, 6.658e5, 2.1432, 5.1549, 1.223};

    SUBCASE("t = 0 is the sum of the two amplitudes") {
        CHECK(ft_model(0.0, tmp) == doctest::Approx(3.341e6).epsilon(1e-12));
        CHECK(ft_model(0.0, dps) == doctest::Approx(1.9828e6).epsilon(1e-12));
    }

    SUBCASE("decays monotonically toward zero") {
        for (const FtParams& p : {tmp, dps}) {
            double prev = ft_model(0.0, p);
            for (double t : {5.0, 20.0, 60.0, 100.0, 1e4, 1e8}) {
                const double f = ft_model(t, p);
                CHECK(f < prev);
                CHECK(f > 0.0);
                prev = f;
            }
            CHECK(prev < 1.0);
        }
    }

    SUBCASE("parameter validation") {
        FtParams bad = tmp;
        bad.alpha = 0.0;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        CHECK_THROWS_AS(ft_model(-1.0, tmp), std::invalid_argument);
    }
}

TEST_CASE("presets") {
    SUBCASE("dps carries the two-g system with equal relaxation times") {
        const SystemPreset p = preset("dps");
        CHECK(p.low.g1 == 2.0028);
        CHECK(p.low.g2 == 2.0082);
        CHECK(p.low.field_mT == 17.0);
        CHECK(p.high.field_mT == 960.0);
        CHECK(p.low.t1_ns == 50.0);
        CHECK(p.theta == 0.425);
        CHECK(p.low.hfc.empty());
        CHECK_FALSE(p.relaxation_required);
        CHECK(preset("dps-hfc").low.t1_ns == 60.0);
    }

    SUBCASE("tmp carries the hyperfine couplings and no default times") {
        const SystemPreset p = preset("tmp");
        REQUIRE(p.low.hfc.size() == 2);
        CHECK(p.low.hfc[0].nuclear_spin == 1.0);
        CHECK(p.low.hfc[0].a_mT == 1.8);
        CHECK(p.low.hfc[1].nuclear_spin == 0.5);
        CHECK(p.low.hfc[1].a_mT == -1.87);
        CHECK(p.low.hilbert_dim() == 24);
        CHECK(p.high.field_mT == 100.0);
        CHECK(p.theta == 0.108);
        CHECK(std::isnan(p.low.t1_ns));
        CHECK(p.relaxation_required);
    }

    SUBCASE("unknown names rejected") {
        CHECK_THROWS_AS(preset("nope"), std::invalid_argument);
    }
}

TEST_CASE("grid") {
    GridSpec g{0.0, 60.0, 121};
    const auto t = g.times();
    CHECK(t.size() == 121);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 60.0);
    CHECK(t[1] == doctest::Approx(0.5));
    GridSpec bad{10.0, 10.0, 5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("detector-noise study") {
    const SystemPreset sys = tmp_with_times(10.0, 10.0);
    const std::vector<double> times = {10.0, 30.0, 50.0};

    SUBCASE("zero noise reproduces the theory curve exactly") {
        NoiseStudyConfig cfg;
        cfg.sigma = 0.0;
        cfg.trials = 10;
        const auto pts = noisy_mfe_study(sys, cfg, times);
        for (const auto& pt : pts) {
            CHECK(pt.mean == doctest::Approx(pt.m_theory).epsilon(1e-14));
            CHECK(pt.stddev < 1e-12);
            CHECK(pt.rejected == 0);
        }
    }

    SUBCASE("noise grows with time as the recombination rate decays") {
        NoiseStudyConfig cfg;
        cfg.sigma = 75.0;
        cfg.trials = 1000;
        cfg.seed = 5;
        const auto pts = noisy_mfe_study(sys, cfg, times);
        CHECK(pts[2].stddev > pts[0].stddev);
        for (const auto& pt : pts) CHECK(pt.rejected == 0);
    }

    SUBCASE("empirical spread matches the first-order prediction within 20%") {
        NoiseStudyConfig cfg;
        cfg.sigma = 75.0;
        cfg.trials = 4000;
        cfg.seed = 6;
        const auto pts = noisy_mfe_study(sys, cfg, times);
        for (const auto& pt : pts) {
            CHECK(pt.stddev == doctest::Approx(pt.delta_prediction).epsilon(0.2));
        }
    }

    SUBCASE("the dps noise scale never rejects samples on its time range") {
        SystemPreset dps = preset("dps");
        NoiseStudyConfig cfg;
        cfg.sigma = 700.0;
        cfg.trials = 500;
        cfg.seed = 9;
        const auto pts = noisy_mfe_study(dps, cfg, dps.grid.times());
        for (const auto& pt : pts) CHECK(pt.rejected == 0);
    }

    SUBCASE("fixed seed reproduces the study bit for bit") {
        NoiseStudyConfig cfg;
        cfg.sigma = 75.0;
        cfg.trials = 200;
        cfg.seed = 7;
        const auto a = noisy_mfe_study(sys, cfg, times);
        const auto b = noisy_mfe_study(sys, cfg, times);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].mean == b[i].mean);
            CHECK(a[i].stddev == b[i].stddev);
        }
    }
}

TEST_CASE("mean squared error in percent") {
    SUBCASE("identical series give zero") {
        CHECK(mse_percent({0.1, 0.5, 0.9}, {0.1, 0.5, 0.9}) == 0.0);
    }

    SUBCASE("a constant 0.01 offset gives 0.01 percent") {
        const std::vector<double> ref = {0.2, 0.4, 0.6, 0.8};
        std::vector<double> shifted = ref;
        for (auto& v : shifted) v += 0.01;
        CHECK(mse_percent(shifted, ref) == doctest::Approx(0.01).epsilon(1e-12));
    }

    SUBCASE("exact-mode pipeline against the closed form is numerically zero") {
        std::vector<double> est, oracle;
        for (int i = 0; i < 50; ++i) {
            const double t = 60.0 * i / 49.0;
            const double s = 0.5 * (1.0 + std::cos(0.3 * t));
            est.push_back(kraus_method(s, t, 50.0, 50.0, 0, 0).s_estimate);
            oracle.push_back(relaxed_closed_form(s, t, 50.0, 50.0));
        }
        CHECK(mse_percent(est, oracle) < 1e-10);
    }

    SUBCASE("length mismatch rejected") {
        CHECK_THROWS_AS(mse_percent({1.0}, {1.0, 2.0}), std::invalid_argument);
    }
}
