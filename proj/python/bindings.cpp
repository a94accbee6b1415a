// Python bindings for nlslab. Fields cross the boundary as complex128 numpy
// arrays; everything is copied, so Python never aliases library storage.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlslab/functionals.hpp"
#include "nlslab/lab.hpp"
#include "nlslab/linops.hpp"
#include "nlslab/modulation.hpp"
#include "nlslab/waves.hpp"

namespace py = pybind11;
using namespace nlslab;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

CVec to_cvec(const ComplexArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return CVec(a.data(), a.data() + a.size());
}

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict record_dict(const RunRecord& r) {
  py::dict d;
  d["t"] = to_array(r.times);
  d["energy_drift"] = to_array(r.energy_drift);
  d["charge_drift"] = to_array(r.charge_drift);
  d["dist_x"] = to_array(r.orbital_distance_x);
  d["A"] = to_array(r.a_series);
  d["P"] = to_array(r.p_series);
  d["termination"] = std::string(to_string(r.termination));
  d["reason"] = r.reason;
  d["final_u1"] = to_array(r.final_state.u1);
  d["final_u2"] = to_array(r.final_state.u2);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupled cubic NLS stability laboratory (C++ core).";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TubeError>(m, "TubeError", PyExc_ValueError);
  py::register_exception<BlowupError>(m, "BlowupError", PyExc_RuntimeError);
  py::register_exception<GridMismatch>(m, "GridMismatch", PyExc_ValueError);

  py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
      .def(py::init([](int n, double half_length) {
             return std::const_pointer_cast<Grid>(make_grid(n, half_length));
           }),
           py::arg("n") = 1024, py::arg("half_length") = 40.0)
      .def_property_readonly("n", &Grid::n)
      .def_property_readonly("half_length", &Grid::half_length)
      .def_property_readonly("dx", &Grid::dx)
      .def_property_readonly("points", [](const Grid& g) { return to_array(RVec(g.points().begin(), g.points().end())); })
      .def("__repr__", [](const Grid& g) {
        std::ostringstream os;
        os << "Grid(n=" << g.n() << ", half_length=" << g.half_length() << ")";
        return os.str();
      });

  py::enum_<Coupling>(m, "Coupling")
      .value("coherent", Coupling::Coherent)
      .value("incoherent", Coupling::Incoherent);

  py::class_<Params>(m, "Params")
      .def(py::init([](double kappa1, double kappa2, double gamma, double omega, Coupling c) {
             Params p{kappa1, kappa2, gamma, omega, c};
             p.validate();
             return p;
           }),
           py::arg("kappa1") = 1.0, py::arg("kappa2") = 1.0, py::arg("gamma") = 1.0,
           py::arg("omega") = 1.0, py::arg("coupling") = Coupling::Coherent)
      .def_readwrite("kappa1", &Params::kappa1)
      .def_readwrite("kappa2", &Params::kappa2)
      .def_readwrite("gamma", &Params::gamma)
      .def_readwrite("omega", &Params::omega)
      .def_readwrite("coupling", &Params::coupling);

  py::class_<FieldPair>(m, "FieldPair")
      .def(py::init([](std::shared_ptr<Grid> g, const ComplexArray& u1, const ComplexArray& u2) {
             return FieldPair(g, to_cvec(u1), to_cvec(u2));
           }),
           py::arg("grid"), py::arg("u1"), py::arg("u2"))
      .def_property_readonly("u1", [](const FieldPair& f) { return to_array(f.u1); })
      .def_property_readonly("u2", [](const FieldPair& f) { return to_array(f.u2); })
      .def_property_readonly("grid", [](const FieldPair& f) { return std::const_pointer_cast<Grid>(f.grid); })
      .def("__add__", [](const FieldPair& a, const FieldPair& b) { return a + b; })
      .def("__sub__", [](const FieldPair& a, const FieldPair& b) { return a - b; })
      .def("__rmul__", [](const FieldPair& a, cplx s) { return s * a; })
      .def("__mul__", [](const FieldPair& a, cplx s) { return s * a; });

  m.def("inner_h", &inner_h);
  m.def("inner_x", &inner_x);
  m.def("norm_x", &norm_x);

  m.def("soliton", [](double omega, std::shared_ptr<Grid> g) { return to_array(soliton(omega, g).samples); },
        py::arg("omega"), py::arg("grid"));
  m.def("phi_vec", &phi_vec, py::arg("params"), py::arg("grid"));
  m.def("psi_vec", &psi_vec, py::arg("params"), py::arg("grid"));
  m.def("unstable_seed", &unstable_seed, py::arg("lam"), py::arg("params"), py::arg("grid"));
  m.def("generic_perturbation", &generic_perturbation, py::arg("eps"), py::arg("seed"), py::arg("params"),
        py::arg("grid"));

  m.def("energy", &energy, py::arg("u"), py::arg("params"));
  m.def("charge", &charge, py::arg("u"));
  m.def("action", &action, py::arg("u"), py::arg("params"));
  m.def("nu_closed_form", [](const Params& p) {
    const auto nu = nu_closed_form(p);
    return py::make_tuple(nu.nu0, nu.nu1);
  });

  m.def("lowest_eigenvalues", [](double a, double omega, std::shared_ptr<Grid> g, int k) {
    return lowest_eigenpairs(build_La(a, omega, g), k).eigenvalues;
  }, py::arg("a"), py::arg("omega"), py::arg("grid"), py::arg("k") = 4);
  m.def("constrained_min_rayleigh",
        [](const Params& p, const std::vector<FieldPair>& constraints, std::shared_ptr<Grid> g) {
          return constrained_min_rayleigh(p, constraints, g);
        },
        py::arg("params"), py::arg("constraints"), py::arg("grid"));

  m.def("orbital_distance_x", py::overload_cast<const FieldPair&, const Params&>(&orbital_distance_x));
  m.def("a_functional", py::overload_cast<const FieldPair&, const Params&>(&a_functional));
  m.def("p_functional", py::overload_cast<const FieldPair&, const Params&>(&p_functional));

  m.def("evolve",
        [](const FieldPair& u0, const Params& p, double dt, double t_end, int sample_every) {
          EvolveConfig cfg;
          cfg.dt = dt;
          cfg.t_end = t_end;
          cfg.sample_every = sample_every;
          RunRecord rec;
          {
            py::gil_scoped_release release;
            rec = evolve(u0, cfg, p, phi_vec(p, u0.grid));
          }
          return record_dict(rec);
        },
        py::arg("u0"), py::arg("params"), py::arg("dt") = 5e-4, py::arg("t_end") = 1.0,
        py::arg("sample_every") = 200);

  m.def("run_single", [](const std::string& config_json) {
    const RunConfig cfg = parse_run_config(config_json);
    RunRecord rec;
    {
      py::gil_scoped_release release;
      rec = run_single(cfg);
    }
    return record_dict(rec);
  }, py::arg("config_json"));

  m.def("run_sweep", [](const std::string& config_json, int workers) {
    const SweepConfig cfg = parse_sweep_config(config_json);
    std::vector<SweepRow> rows;
    {
      py::gil_scoped_release release;
      rows = run_sweep(cfg, resolve_workers(workers));
    }
    py::list out;
    for (const auto& r : rows) {
      py::dict d;
      d["kappa1"] = r.kappa1;
      d["gamma"] = r.gamma;
      d["kappa2"] = r.kappa2;
      d["verdict"] = std::string(to_string(r.result.verdict));
      d["max_distance"] = r.result.max_distance;
      d["first_crossing_time"] = r.result.first_crossing_time ? py::object(py::float_(*r.result.first_crossing_time))
                                                              : py::object(py::none());
      d["theory"] = r.theory;
      d["status"] = r.status;
      out.append(d);
    }
    return out;
  }, py::arg("config_json"), py::arg("workers") = 0);

  m.def("expansion_check", [](const std::string& config_json) {
    const ExpansionOutcome o = run_expansion_check(parse_expansion_config(config_json));
    py::dict d;
    d["nu0"] = o.closed.nu0;
    d["nu1"] = o.closed.nu1;
    d["quartic_defect"] = o.quartic.max_action_defect();
    d["passed"] = o.passed;
    return d;
  }, py::arg("config_json"));

  m.def("theory_verdict", [](double gamma, double kappa1, double kappa2, Coupling c) {
    return std::string(theory_verdict(gamma, kappa1, kappa2, c));
  }, py::arg("gamma"), py::arg("kappa1"), py::arg("kappa2"), py::arg("coupling") = Coupling::Coherent);
}
