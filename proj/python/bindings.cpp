#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "cyldiff/arithmetic.hpp"
#include "cyldiff/config.hpp"
#include "cyldiff/errors.hpp"
#include "cyldiff/mc_engine.hpp"
#include "cyldiff/normal_form.hpp"
#include "cyldiff/potentials.hpp"
#include "cyldiff/stats.hpp"

namespace py = pybind11;
using namespace cyldiff;

namespace {

py::object to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(to_py(e));
      return out;
    }
    default: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = to_py(it.value());
      return out;
    }
  }
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

InitialMode parse_mode(const std::string& m) {
  if (m == "fixed") return InitialMode::Fixed;
  if (m == "uniform_theta") return InitialMode::UniformTheta;
  if (m == "uniform_torus") return InitialMode::UniformTorus;
  throw std::invalid_argument("initial mode must be fixed, uniform_theta or uniform_torus");
}

py::object witness(const std::optional<Rational>& w) {
  if (!w) return py::none();
  return py::make_tuple(w->p, w->q);
}

EnsembleSpec make_spec(const MapSystem& sys, double s, std::size_t samples, std::uint64_t seed,
                       const std::string& mode, double theta, double r, double r_lo, double r_hi, unsigned threads) {
  return EnsembleSpec{sys, {parse_mode(mode), theta, r, r_lo, r_hi}, s, samples, seed, threads};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random perturbations of near-integrable twist maps on the cylinder";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResonantInput>(m, "ResonantInput", PyExc_ValueError);
  py::register_exception<NotTIAdmissible>(m, "NotTIAdmissible", PyExc_ValueError);
  py::register_exception<DegenerateVariance>(m, "DegenerateVariance", PyExc_ArithmeticError);
  py::register_exception<InsufficientSamples>(m, "InsufficientSamples", PyExc_ValueError);
  py::register_exception<NonFiniteState>(m, "NonFiniteState", PyExc_ArithmeticError);

  py::class_<SystemPotentials>(m, "Potentials")
      .def_static("cos_sin", &SystemPotentials::cos_sin)
      .def_static(
          "from_json",
          [](const std::string& text) { return parse_potentials(nlohmann::json::parse(text)); },
          py::arg("text"), "Parse the \"potentials\" value of a run config (a JSON string).")
      .def_property_readonly("degree", &SystemPotentials::degree)
      .def("sigma2", [](const SystemPotentials& p, double r) { return sigma_squared(p, r); }, py::arg("r"))
      .def(
          "v",
          [](const SystemPotentials& p, int omega, double theta, double r) {
            return omega > 0 ? p.v_plus(theta, r) : p.v_minus(theta, r);
          },
          py::arg("omega"), py::arg("theta"), py::arg("r"));

  m.def(
      "check_hypotheses",
      [](const SystemPotentials& p, double r_lo, double r_hi) {
        const HypothesisReport rep = check_hypotheses(p, {r_lo, r_hi});
        py::list out;
        for (const auto& h : rep.results) {
          py::dict d;
          d["name"] = h.name;
          d["pass"] = h.pass;
          d["required"] = h.required;
          d["detail"] = h.detail;
          d["witnesses"] = h.witnesses;
          out.append(d);
        }
        return out;
      },
      py::arg("potentials"), py::arg("r_lo") = 0.0, py::arg("r_hi") = 1.0);

  py::class_<MapSystem>(m, "MapSystem")
      .def(py::init<SystemPotentials, double, double, int>(), py::arg("potentials"), py::arg("epsilon"),
           py::arg("a") = 0.55, py::arg("smoothness") = 7)
      .def_property_readonly("epsilon", &MapSystem::epsilon)
      .def_property_readonly("degree", &MapSystem::degree)
      .def(
          "step",
          [](const MapSystem& s, double theta, double r, int omega) {
            const State st = step(s, {theta, r}, omega);
            return py::make_tuple(st.theta, st.r);
          },
          py::arg("theta"), py::arg("r"), py::arg("omega"))
      .def(
          "iterate",
          [](const MapSystem& s, double theta, double r, const std::vector<int>& word) {
            const auto traj = iterate(s, {theta, r}, Word(word.begin(), word.end()));
            py::array_t<double> out({static_cast<py::ssize_t>(traj.size()), py::ssize_t{2}});
            auto a = out.mutable_unchecked<2>();
            for (std::size_t k = 0; k < traj.size(); ++k) {
              a(k, 0) = traj[k].theta;
              a(k, 1) = traj[k].r;
            }
            return out;
          },
          py::arg("theta"), py::arg("r"), py::arg("word"), "Trajectory as an (n + 1, 2) array of (theta, r).");

  py::class_<NormalForm>(m, "NormalForm")
      .def(py::init([](const SystemPotentials& p, double beta) { return NormalForm(p, {beta}); }),
           py::arg("potentials"), py::arg("beta") = 0.05)
      .def("drift", &NormalForm::drift, py::arg("r"))
      .def("drift_quadrature", &NormalForm::drift_quadrature, py::arg("r"))
      .def("sigma2", &NormalForm::sigma2, py::arg("r"))
      .def("homological_residual", &NormalForm::homological_residual, py::arg("theta"), py::arg("r"))
      .def(
          "resonance_within",
          [](const NormalForm& nf, double r, double width) { return witness(nf.resonance_within(r, width)); },
          py::arg("r"), py::arg("width"));

  py::class_<StripParams>(m, "StripParams")
      .def(py::init(&StripParams::make), py::arg("l") = 6, py::arg("gamma") = 0.81, py::arg("tau") = 0.02,
           py::arg("beta") = 0.05, py::arg("kappa") = 0.2, py::arg("delta") = 0.01, py::arg("d") = 1,
           py::arg("a") = 0.55)
      .def_readonly("l", &StripParams::l)
      .def_readonly("d", &StripParams::d)
      .def_readonly("gamma", &StripParams::gamma)
      .def_readonly("nu", &StripParams::nu)
      .def_readonly("R", &StripParams::R)
      .def_readonly("rho", &StripParams::rho)
      .def_readonly("b", &StripParams::b)
      .def_readonly("tau", &StripParams::tau)
      .def_readonly("beta", &StripParams::beta);

  m.def(
      "classify",
      [](double lo, double hi, const StripParams& p, double eps) {
        const StripClass c = classify({lo, hi}, p, eps);
        return py::make_tuple(to_string(c.kind), witness(c.witness));
      },
      py::arg("lo"), py::arg("hi"), py::arg("params"), py::arg("eps"), "Returns (class, witness or None).");
  m.def(
      "ir_measure",
      [](const StripParams& p, double eps, double lo, double hi, double width_factor, long q_min) {
        const IrMeasure r = ir_measure(p, eps, {lo, hi}, width_factor, q_min);
        py::dict d;
        d["measure"] = r.measure;
        d["bound"] = r.bound;
        d["count"] = r.count;
        d["within_bound"] = r.within_bound;
        return d;
      },
      py::arg("params"), py::arg("eps"), py::arg("lo") = 0.0, py::arg("hi") = 1.0, py::arg("width_factor") = 1.0,
      py::arg("q_min") = 0L);
  m.def(
      "ergodization_time",
      [](double r_star, const StripParams& p, double eps) {
        const Ergodization e = ergodization_time(r_star, p, eps);
        py::dict d;
        d["N"] = e.N;
        d["p"] = e.p;
        d["bound"] = e.bound;
        d["residual"] = e.residual;
        return d;
      },
      py::arg("r_star"), py::arg("params"), py::arg("eps"));

  m.def(
      "run_ensemble",
      [](const MapSystem& sys, double s, std::size_t samples, std::uint64_t seed, const std::string& mode,
         double theta, double r, double r_lo, double r_hi, unsigned threads) {
        const EnsembleSpec spec = make_spec(sys, s, samples, seed, mode, theta, r, r_lo, r_hi, threads);
        EnsembleResult res;
        {
          py::gil_scoped_release release;
          res = run_ensemble(spec);
        }
        return to_array(res.displacement);
      },
      py::arg("system"), py::arg("s") = 1.0, py::arg("samples") = 1000, py::arg("seed") = 1,
      py::arg("mode") = "uniform_torus", py::arg("theta") = 0.0, py::arg("r") = 0.0, py::arg("r_lo") = 0.0,
      py::arg("r_hi") = 1.0, py::arg("threads") = 0u, "Displacements r_n - r_0 with n = round(s / eps^2).");

  m.def(
      "clt_test",
      [](const std::vector<double>& samples, double s, double b, double sigma2, std::uint64_t seed) {
        return to_py(to_json(clt_test(samples, s, b, sigma2, seed).report));
      },
      py::arg("samples"), py::arg("s"), py::arg("b"), py::arg("sigma2"), py::arg("seed") = 0);
  m.def(
      "moments",
      [](const std::vector<double>& x) {
        const Moments mo = moments(x);
        py::dict d;
        d["n"] = mo.n;
        d["mean"] = mo.mean;
        d["variance"] = mo.variance;
        d["skewness"] = mo.skewness;
        d["excess_kurtosis"] = mo.excess_kurtosis;
        return d;
      },
      py::arg("x"));
  m.def("ks_statistic", &ks_statistic, py::arg("samples"), py::arg("mean"), py::arg("variance"));
  m.def("hitting_probability", &hitting_probability, py::arg("r"), py::arg("r_left"), py::arg("r_right"),
        py::arg("b"), py::arg("sigma2"), "Probability of reaching r_left before r_right.");
}
