#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "triharm/atoms.hpp"
#include "triharm/experiments.hpp"
#include "triharm/multiplier.hpp"
#include "triharm/regions.hpp"

namespace py = pybind11;
using namespace triharm;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

GridFunction to_grid(const GridSpec& spec, const CArray& a) {
  if (std::size_t(a.size()) != spec.size()) throw DomainError("array size does not match the grid");
  return GridFunction(spec, std::vector<cplx>(a.data(), a.data() + a.size()));
}

CArray to_array(const std::vector<cplx>& v) {
  CArray out(py::ssize_t(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_triharm, m) {
  m.doc() = "Numerical laboratory for trilinear Fourier multipliers";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_RuntimeError);
  py::register_exception<ThresholdError>(m, "ThresholdError", domain.ptr());

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init(&GridSpec::make), py::arg("dim"), py::arg("N"), py::arg("L"))
      .def_property_readonly("dim", &GridSpec::dim)
      .def_property_readonly("N", &GridSpec::samples)
      .def_property_readonly("L", &GridSpec::length)
      .def_property_readonly("spacing", &GridSpec::spacing)
      .def_property_readonly("size", &GridSpec::size)
      .def("coord", &GridSpec::coord)
      .def("frequency", &GridSpec::frequency)
      .def("__repr__", [](const GridSpec& s) {
        std::ostringstream os;
        os << "GridSpec(dim=" << s.dim() << ", N=" << s.samples() << ", L=" << s.length() << ")";
        return os.str();
      });

  m.def("forward_transform", [](const GridSpec& s, const CArray& a) {
    return to_array(forward_transform(to_grid(s, a)).values());
  });
  m.def("inverse_transform", [](const GridSpec& s, const CArray& a) {
    if (std::size_t(a.size()) != s.size()) throw DomainError("array size does not match the grid");
    return to_array(inverse_transform(SpectralFunction(s, std::vector<cplx>(a.data(), a.data() + a.size()))).values());
  });
  m.def("lp_norm", [](const GridSpec& s, const CArray& a, double p) { return lp_norm(to_grid(s, a), p); });

  m.def("classify", [](const std::string& t, int n) { return std::string(to_string(classify(parse_exponent_point(t, n)))); },
        py::arg("t"), py::arg("n") = 1);
  m.def("required_regularity",
        [](const std::string& t, int n) { return to_string(required_regularity(parse_exponent_point(t, n))); },
        py::arg("t"), py::arg("n") = 1);
  m.def(
      "plan",
      [](const std::string& t, const std::string& s, int n) {
        InterpPlan p = plan_interpolation(parse_exponent_point(t, n), parse_rational(s));
        PlanVerdict v = verify_plan(p);
        return py::make_tuple(p.to_json(), v.ok, v.violation);
      },
      py::arg("t"), py::arg("s"), py::arg("n") = 1);

  m.def(
      "make_atom",
      [](const GridSpec& spec, int level, std::vector<std::int64_t> pos, double p, int M, std::uint64_t seed) {
        DyadicCube q;
        q.dim = spec.dim();
        q.level = level;
        pos.resize(2, 0);
        q.position = {pos[0], pos[1]};
        Atom a = make_atom(spec, q, p, M < 0 ? default_moment_order(spec.dim(), p) : M, seed);
        AtomCertificate c = certify(a);
        return py::make_tuple(to_array(a.f.values()), c.passed(), a.sidecar_json(c));
      },
      py::arg("spec"), py::arg("level"), py::arg("position"), py::arg("p") = 1.0, py::arg("M") = -1,
      py::arg("seed") = 1);

  m.def(
      "apply_multiplier",
      [](const std::string& family, const GridSpec& spec, const std::vector<CArray>& inputs, const std::string& method) {
        std::vector<GridFunction> f;
        for (const auto& a : inputs) f.push_back(to_grid(spec, a));
        MultiplierTensor sigma = make_named(family, int(f.size()), spec);
        if (method == "direct") return to_array(apply_direct(sigma, f).values());
        if (method == "separable") return to_array(apply_separable(sigma, f).values());
        if (method == "auto") return to_array(triharm::apply(sigma, f).values());
        throw UsageError("method is direct, separable or auto");
      },
      py::arg("family"), py::arg("spec"), py::arg("inputs"), py::arg("method") = "auto");

  m.def(
      "ls2_norm",
      [](const std::string& family, const GridSpec& spec, int arity, double s, double delta) {
        MultiplierTensor sigma = make_named(family, arity, spec);
        if (delta > 0) sigma = make_vanishing_multiplier(sigma, delta);
        Ls2Options opt;
        opt.s = s;
        Ls2Result r = ls2_norm(sigma, AnnularPartition::build(spec, arity), opt);
        return py::make_tuple(r.value, r.shells, r.per_shell);
      },
      py::arg("family"), py::arg("spec"), py::arg("m"), py::arg("s"), py::arg("delta") = 0.0);

  m.def(
      "ratio_experiment",
      [](const std::string& config_json, bool timestamp) {
        RatioReport r;
        {
          py::gil_scoped_release release;
          r = run_ratio_experiment(ExperimentConfig::from_json(config_json));
        }
        std::ostringstream os;
        r.write_csv(os, timestamp);
        return os.str();
      },
      py::arg("config_json"), py::arg("timestamp") = false);
  m.def(
      "moment_experiment",
      [](const std::string& config_json, bool timestamp) {
        MomentExperimentReport r;
        {
          py::gil_scoped_release release;
          r = run_moment_experiment(ExperimentConfig::from_json(config_json));
        }
        std::ostringstream os;
        r.write_csv(os, timestamp);
        return os.str();
      },
      py::arg("config_json"), py::arg("timestamp") = false);
  m.def("default_config", [] { return ExperimentConfig{}.to_json(); });
}
