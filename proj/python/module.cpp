// Python bindings for the main operations: spin systems and exact S(t),
// relaxation channels and their decay parameters, the three protocols,
// correction algebra, TR-MFE assembly and the preset systems.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinbeats/experiments.hpp"
#include "spinbeats/orchestration.hpp"
#include "spinbeats/protocols.hpp"
#include "spinbeats/verify_suite.hpp"

namespace py = pybind11;
using namespace spinbeats;

namespace {

py::array_t<std::complex<double>> to_numpy(const ComplexMatrix& m) {
    py::array_t<std::complex<double>> arr({m.rows(), m.cols()});
    auto buf = arr.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) buf(i, j) = m(i, j);
    return arr;
}

ComplexMatrix from_numpy(const py::array_t<std::complex<double>>& arr) {
    const auto buf = arr.unchecked<2>();
    ComplexMatrix m(buf.shape(0), buf.shape(1));
    for (py::ssize_t i = 0; i < buf.shape(0); ++i)
        for (py::ssize_t j = 0; j < buf.shape(1); ++j) m(i, j) = buf(i, j);
    return m;
}

Populations pops_from_tuple(const std::array<double, 4>& p) {
    return Populations{p[0], p[1], p[2], p[3]};
}

py::dict pops_to_dict(const Populations& p) {
    py::dict d;
    d["S"] = p.singlet;
    d["T0"] = p.t0;
    d["Tplus"] = p.t_plus;
    d["Tminus"] = p.t_minus;
    return d;
}

py::dict method_result_to_dict(const MethodResult& r) {
    py::dict d;
    d["s_estimate"] = r.s_estimate;
    d["stderr"] = r.stderr_estimate;
    d["populations"] = pops_to_dict(r.pops);
    d["w_z"] = r.w_z;
    return d;
}

py::dict inherent_result_to_dict(const InherentResult& r) {
    py::dict d;
    d["s_echo"] = r.s_echo;
    d["s_corrected"] = r.s_corrected;
    d["stderr"] = r.stderr_estimate;
    d["populations"] = pops_to_dict(r.pops);
    d["t_wall_ns"] = r.t_wall_ns;
    d["n_id_gates"] = r.n_id_gates;
    return d;
}

}  // namespace

PYBIND11_MODULE(_spinbeats, m) {
    m.doc() = "density-matrix simulation of radical-pair quantum beats under thermal relaxation";
    m.attr("GAMMA_RAD_PER_NS_PER_MT") = kGammaRadPerNsPerMT;
    m.attr("G_FREE") = kGFree;

    py::class_<HyperfineCoupling>(m, "HyperfineCoupling")
        .def(py::init([](int electron, double nuclear_spin, double a_mT) {
                 return HyperfineCoupling{electron, nuclear_spin, a_mT};
             }),
             py::arg("electron"), py::arg("nuclear_spin"), py::arg("a_mT"))
        .def_readwrite("electron", &HyperfineCoupling::electron)
        .def_readwrite("nuclear_spin", &HyperfineCoupling::nuclear_spin)
        .def_readwrite("a_mT", &HyperfineCoupling::a_mT);

    py::class_<SpinSystemSpec>(m, "SpinSystemSpec")
        .def(py::init<>())
        .def_readwrite("g1", &SpinSystemSpec::g1)
        .def_readwrite("g2", &SpinSystemSpec::g2)
        .def_readwrite("field_mT", &SpinSystemSpec::field_mT)
        .def_readwrite("hfc", &SpinSystemSpec::hfc)
        .def_readwrite("T1_ns", &SpinSystemSpec::t1_ns)
        .def_readwrite("T2_ns", &SpinSystemSpec::t2_ns)
        .def_readwrite("theta", &SpinSystemSpec::theta)
        .def_readwrite("sigma_rad_per_ns", &SpinSystemSpec::sigma_rad_per_ns)
        .def("hilbert_dim", &SpinSystemSpec::hilbert_dim)
        .def("validate", &SpinSystemSpec::validate);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_readwrite("T1_ns", &NoiseModel::t1_ns)
        .def_readwrite("T2_ns", &NoiseModel::t2_ns)
        .def_readwrite("t_id_ns", &NoiseModel::t_id_ns)
        .def_readwrite("drift_rad_per_ns", &NoiseModel::drift_rad_per_ns)
        .def_readwrite("per_shot_random_rz", &NoiseModel::per_shot_random_rz);

    py::class_<SpinEvolution>(m, "SpinEvolution")
        .def(py::init<const SpinSystemSpec&>())
        .def("singlet_probability", &SpinEvolution::singlet_probability, py::arg("t_ns"))
        .def("electron_state",
             [](const SpinEvolution& evo, double t) { return to_numpy(evo.electron_state(t).mat); },
             py::arg("t_ns"))
        .def("populations", [](const SpinEvolution& evo, double t) {
            const auto p = evo.populations(t);
            return pops_to_dict(Populations{p.singlet, p.t0, p.t_plus, p.t_minus});
        });

    m.def("spin_operators", [](double s) {
        const SpinOperators ops = spin_operators(s);
        return py::make_tuple(to_numpy(ops.sx), to_numpy(ops.sy), to_numpy(ops.sz));
    });
    m.def("build_hamiltonian",
          [](const SpinSystemSpec& spec) { return to_numpy(build_hamiltonian(spec)); });
    m.def("initial_state",
          [](const SpinSystemSpec& spec) { return to_numpy(initial_state(spec).mat); });
    m.def("singlet_probability",
          py::overload_cast<const SpinSystemSpec&, double>(&singlet_probability));
    m.def("analytic_two_g", &analytic_two_g);
    m.def("second_moment", &second_moment);

    m.def("decay_params", [](double t, double t1, double t2) {
        const DecayParams p = decay_params(t, t1, t2);
        return py::make_tuple(p.p_x, p.p_z);
    });
    m.def("gad_kraus", [](double p_x, double p_n) {
        py::list out;
        for (const auto& k : gad_kraus(p_x, p_n).kraus) out.append(to_numpy(k));
        return out;
    });
    m.def("dephasing_kraus", [](double p_z) {
        py::list out;
        for (const auto& k : dephasing_kraus(p_z).kraus) out.append(to_numpy(k));
        return out;
    });
    m.def("apply_channel",
          [](const py::list& kraus, const py::array_t<std::complex<double>>& rho,
             const std::vector<std::size_t>& targets) {
              QuantumChannel ch;
              for (const auto& k : kraus)
                  ch.kraus.push_back(from_numpy(k.cast<py::array_t<std::complex<double>>>()));
              ch.dim = ch.kraus.empty() ? 0 : ch.kraus.front().rows();
              ch.validate();
              return to_numpy(apply_channel(ch, DensityMatrix(from_numpy(rho)), targets).mat);
          },
          py::arg("kraus"), py::arg("rho"), py::arg("targets"));

    m.def("relaxed_closed_form", &relaxed_closed_form, py::arg("s"), py::arg("t_ns"),
          py::arg("T1_ns"), py::arg("T2_ns"));
    m.def("relaxed_gaussian", &relaxed_gaussian, py::arg("s"), py::arg("t_ns"), py::arg("T1_ns"),
          py::arg("T2_ns"), py::arg("sigma"));
    m.def("echo_deviation", &echo_deviation, py::arg("t_ns"), py::arg("T1_ns"), py::arg("n_echo"));

    m.def("kraus_method",
          [](double s, double t, double t1, double t2, std::uint64_t shots, std::uint64_t seed,
             double sigma) { return method_result_to_dict(kraus_method(s, t, t1, t2, shots, seed, sigma)); },
          py::arg("s_of_t"), py::arg("t_ns"), py::arg("T1_ns"), py::arg("T2_ns"),
          py::arg("shots") = 0, py::arg("seed") = 1, py::arg("sigma") = 0.0);
    m.def("kraus_correction",
          [](double t, double t1, double t2, std::uint64_t shots, std::uint64_t seed, double sigma) {
              return method_result_to_dict(kraus_correction(t, t1, t2, shots, seed, sigma));
          },
          py::arg("t_ns"), py::arg("T1_ns"), py::arg("T2_ns"), py::arg("shots") = 0,
          py::arg("seed") = 1, py::arg("sigma") = 0.0);
    m.def("inherent_method",
          [](const SpinSystemSpec& spec, double t, const NoiseModel& qubit, int n_echo,
             std::uint64_t shots, std::uint64_t seed) {
              return inherent_result_to_dict(inherent_method(spec, t, qubit, n_echo, shots, seed));
          },
          py::arg("spec"), py::arg("t_ns"), py::arg("qubit"), py::arg("n_echo") = 4,
          py::arg("shots") = 0, py::arg("seed") = 1);
    m.def("inherent_correction",
          [](const SpinSystemSpec& spec, double t, const NoiseModel& qubit, int n_echo,
             std::uint64_t shots, std::uint64_t seed) {
              return inherent_result_to_dict(
                  inherent_correction(spec, t, qubit, n_echo, shots, seed));
          },
          py::arg("spec"), py::arg("t_ns"), py::arg("qubit"), py::arg("n_echo") = 4,
          py::arg("shots") = 0, py::arg("seed") = 1);

    m.def("correction_combine",
          [](const std::array<double, 4>& run, const std::array<double, 4>& corr) {
              return correction_combine(pops_from_tuple(run), pops_from_tuple(corr));
          });
    m.def("correction_apply",
          [](const std::array<double, 4>& run, const std::array<double, 4>& corr) {
              const Populations out = correction_apply(pops_from_tuple(run), pops_from_tuple(corr));
              return pops_to_dict(out);
          });
    m.def("correction_undo",
          [](const std::array<double, 4>& damped, const std::array<double, 4>& corr) {
              const Populations out = correction_undo(pops_from_tuple(damped), pops_from_tuple(corr));
              return pops_to_dict(out);
          });
    m.def("double_correction",
          [](const std::array<double, 4>& run, const std::array<double, 4>& corr_inh,
             const std::array<double, 4>& corr_kraus) {
              return double_correction(pops_from_tuple(run), pops_from_tuple(corr_inh),
                                       pops_from_tuple(corr_kraus));
          });

    m.def("tr_mfe", &tr_mfe, py::arg("s_b"), py::arg("s_0"), py::arg("theta"));
    m.def("intensity", &intensity, py::arg("f"), py::arg("s"), py::arg("theta"));
    m.def("ft_model", [](double t, double a, double b, double t1, double t2, double alpha) {
        return ft_model(t, FtParams{a, b, t1, t2, alpha});
    });
    m.def("mse_percent", &mse_percent);

    m.def("preset", [](const std::string& name) {
        const SystemPreset p = preset(name);
        py::dict d;
        d["name"] = p.name;
        d["low"] = p.low;
        d["high"] = p.high;
        d["theta"] = p.theta;
        d["detector_sigma"] = p.detector_sigma;
        d["grid_start_ns"] = p.grid.start_ns;
        d["grid_stop_ns"] = p.grid.stop_ns;
        d["grid_points"] = p.grid.points;
        d["relaxation_required"] = p.relaxation_required;
        return d;
    });
    m.def("preset_names", &preset_names);

    m.def("verify", [] {
        const auto checks = run_verify_suite();
        py::list out;
        for (const auto& c : checks) {
            py::dict d;
            d["name"] = c.name;
            d["deviation"] = c.deviation;
            d["threshold"] = c.threshold;
            d["pass"] = c.passed;
            out.append(d);
        }
        return out;
    });
}
