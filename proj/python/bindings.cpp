#include "christoffel/christoffel.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace christoffel;

namespace {

std::vector<double> to_vector(const Eigen::Ref<const Eigen::VectorXd>& x) { return {x.data(), x.data() + x.size()}; }

py::dict estimate_to_dict(const ChristoffelEstimate& e) {
  py::dict d;
  d["z"] = e.z;
  d["christoffel"] = e.c_value;
  d["leverage"] = e.leverage;
  d["p_hat"] = e.p_hat ? py::cast(*e.p_hat) : py::none();
  d["label"] = std::string(to_string(e.label));
  return d;
}

}  // namespace

PYBIND11_MODULE(_christoffel, m) {
  m.doc() = "Regularized Christoffel functions and kernel leverage scores";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("matern", &KernelSpec::matern, py::arg("nu"), py::arg("length"), py::arg("dimension") = 1)
      .def_static("gaussian", &KernelSpec::gaussian, py::arg("length"), py::arg("dimension") = 1)
      .def_static("radial_profile", &KernelSpec::radial_profile, py::arg("q_hat_of_r"), py::arg("s"),
                  py::arg("gamma"), py::arg("dimension") = 1, py::arg("leading_coefficient") = py::none())
      .def_static("sum", &KernelSpec::sum)
      .def_property_readonly("dimension", &KernelSpec::dimension)
      .def_property_readonly("q_at_zero", &KernelSpec::q_at_zero)
      .def("q", [](const KernelSpec& k, const Eigen::VectorXd& x) { return k.q(to_vector(x)); })
      .def("q_radial", &KernelSpec::q_radial)
      .def("q_hat", [](const KernelSpec& k, const Eigen::VectorXd& w) { return k.q_hat(to_vector(w)); })
      .def("q_hat_radial", &KernelSpec::q_hat_radial)
      .def("__repr__", &KernelSpec::describe);

  m.def("bessel_k", &bessel_k, py::arg("nu"), py::arg("x"));

  py::class_<WeightedSample>(m, "WeightedSample")
      .def(py::init<PointMatrix, Eigen::VectorXd>(), py::arg("points"), py::arg("weights"))
      .def_property_readonly("points", &WeightedSample::points)
      .def_property_readonly("weights", &WeightedSample::weights)
      .def_property_readonly("size", &WeightedSample::size)
      .def_property_readonly("dimension", &WeightedSample::dimension)
      .def_property_readonly("total_weight", &WeightedSample::total_weight);

  m.def("from_iid_sample", &from_iid_sample, py::arg("points"));
  m.def("load_csv", [](const std::string& path) { return load_csv(path); }, py::arg("path"));
  m.def(
      "riemann_sample",
      [](const std::string& density, Eigen::Index n) {
        const auto& d = builtin_density(density);
        return riemann_from_density(default_lattice(d, n), d.p);
      },
      py::arg("density"), py::arg("n"), "Riemann plug-in of a built-in test density on its default grid.");
  m.def(
      "iid_sample",
      [](const std::string& density, Eigen::Index n, std::uint64_t seed) {
        return from_iid_sample(sample_iid(builtin_density(density), n, seed));
      },
      py::arg("density"), py::arg("n"), py::arg("seed"));
  m.def(
      "density_value",
      [](const std::string& density, const Eigen::VectorXd& x) { return builtin_density(density).p(to_vector(x)); },
      py::arg("density"), py::arg("x"));
  m.def("density_names", &builtin_density_names);

  py::class_<GramSystem>(m, "GramSystem")
      .def_static(
          "assemble",
          [](const KernelSpec& k, const WeightedSample& s, double lambda) { return GramSystem::assemble(k, s, lambda); },
          py::arg("kernel"), py::arg("sample"), py::arg("lam"))
      .def("refit_lambda", &GramSystem::refit_lambda, py::arg("lam"))
      .def("christoffel_at_support", py::overload_cast<Eigen::Index>(&GramSystem::christoffel_at_support, py::const_))
      .def("christoffel_at_support_all", &GramSystem::christoffel_at_support_all)
      .def("christoffel_at_points", &GramSystem::christoffel_at_points, py::arg("queries"))
      .def("christoffel_smoothing_form",
           py::overload_cast<Eigen::Index>(&GramSystem::christoffel_smoothing_form, py::const_))
      .def("leverage_score", [](const GramSystem& g, const Eigen::VectorXd& z) { return g.leverage_score(to_vector(z)); })
      .def_property_readonly("lam", &GramSystem::lambda)
      .def_property_readonly("jitter", &GramSystem::jitter)
      .def_property_readonly("gram", &GramSystem::gram);

  py::class_<SpectralProfile>(m, "SpectralProfile")
      .def(py::init([](const KernelSpec& k) { return SpectralProfile(k); }), py::arg("kernel"))
      .def_property_readonly("has_power_law", &SpectralProfile::has_power_law)
      .def_property_readonly("exponent", &SpectralProfile::exponent)
      .def_property_readonly("q0", &SpectralProfile::q0)
      .def("compute_D", &SpectralProfile::compute_D, py::arg("lam"))
      .def("eval_f_lambda", py::overload_cast<double, double>(&SpectralProfile::eval_f_lambda, py::const_),
           py::arg("lam"), py::arg("radius"))
      .def("tail_mass_ratio", &SpectralProfile::tail_mass_ratio, py::arg("lam"), py::arg("epsilon"))
      .def("predict_inside", &SpectralProfile::predict_inside, py::arg("lam"), py::arg("p"))
      .def("predict_asymptotic", &SpectralProfile::predict_asymptotic, py::arg("lam"), py::arg("p"))
      .def("predict_outside", [](const SpectralProfile& p, double lambda) {
        const auto e = p.predict_outside(lambda);
        return py::make_tuple(e.sqrt_scale, e.linear);
      });

  m.def("estimate_density", &estimate_density, py::arg("profile"), py::arg("lam"), py::arg("christoffel"));
  m.def("rate_diagnostic", &rate_diagnostic, py::arg("profile"), py::arg("lam"), py::arg("christoffel"),
        py::arg("p_true"));
  m.def(
      "support_indicator",
      [](const SpectralProfile& p, double lambda, double c, double margin, double p_min) {
        return std::string(to_string(support_indicator(p, lambda, c, SupportThresholds{margin, p_min})));
      },
      py::arg("profile"), py::arg("lam"), py::arg("christoffel"), py::arg("margin") = 10.0, py::arg("p_min") = 1e-2);
  m.def(
      "evaluate_field",
      [](const GramSystem& g, const SpectralProfile& p, const PointMatrix& q, double margin, double p_min) {
        py::list out;
        for (const auto& e : evaluate_field(g, p, q, SupportThresholds{margin, p_min})) {
          out.append(estimate_to_dict(e));
        }
        return out;
      },
      py::arg("system"), py::arg("profile"), py::arg("queries"), py::arg("margin") = 10.0, py::arg("p_min") = 1e-2);
}
