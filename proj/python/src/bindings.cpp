#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biphoton/errors.hpp"
#include "biphoton/interferometers.hpp"
#include "biphoton/oracle.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/transforms.hpp"

namespace py = pybind11;
using namespace biphoton;

namespace {

template <typename Grid>
py::array_t<double> nodes(const Grid& g) {
  py::array_t<double> out(static_cast<py::ssize_t>(g.points()));
  auto v = out.mutable_unchecked<1>();
  for (std::size_t k = 0; k < g.points(); ++k) v(static_cast<py::ssize_t>(k)) = g[k];
  return out;
}

py::array_t<cplx> values(const SpectralAmplitude& f) {
  const auto v = f.values();
  return py::array_t<cplx>(static_cast<py::ssize_t>(v.size()), v.data());
}

template <typename Tag>
void bind_grid(py::module_& m, const char* name) {
  using G = UniformGrid<Tag>;
  py::class_<G>(m, name)
      .def(py::init<double, double, std::size_t>(), py::arg("center"), py::arg("span"), py::arg("points"))
      .def_static("from_range", &G::from_range, py::arg("lo"), py::arg("hi"), py::arg("points"))
      .def_property_readonly("center", &G::center)
      .def_property_readonly("span", &G::span)
      .def_property_readonly("points", &G::points)
      .def_property_readonly("step", &G::step)
      .def("nodes", &nodes<G>)
      .def("__len__", &G::points)
      .def("__repr__", [name](const G& g) { return std::string(name) + "(" + g.describe() + ")"; });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-photon spectral interferometry core";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  bind_grid<FrequencyTag>(m, "FrequencyGrid");
  bind_grid<TimeTag>(m, "TimeGrid");
  m.def("collective_grid", &collective_grid, py::arg("center"), py::arg("span"), py::arg("points"));

  py::class_<AnyonParameter>(m, "AnyonParameter")
      .def(py::init<double>(), py::arg("a"))
      .def_property_readonly("value", &AnyonParameter::value)
      .def_property_readonly("symmetric_weight", &AnyonParameter::symmetric_weight)
      .def_property_readonly("antisymmetric_weight", &AnyonParameter::antisymmetric_weight)
      .def_property_readonly("exchange_phase", &AnyonParameter::exchange_phase);
  py::implicitly_convertible<double, AnyonParameter>();

  py::class_<SpectralAmplitude>(m, "SpectralAmplitude")
      .def(py::init([](const FrequencyGrid& g, const std::vector<cplx>& v) { return SpectralAmplitude(g, v); }),
           py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &SpectralAmplitude::grid)
      .def_property_readonly("values", &values)
      .def("__call__", &SpectralAmplitude::operator(), py::arg("omega"))
      .def("norm_squared", &SpectralAmplitude::norm_squared)
      .def("normalized", &SpectralAmplitude::normalized)
      .def("modulus", &SpectralAmplitude::modulus)
      .def("with_linear_phase", &SpectralAmplitude::with_linear_phase, py::arg("slope"));

  py::class_<JointSpectralAmplitude>(m, "JointSpectralAmplitude")
      .def(py::init<FrequencyGrid, FrequencyGrid, Eigen::MatrixXcd>(), py::arg("grid_s"), py::arg("grid_i"),
           py::arg("values"))
      .def_property_readonly("grid_s", &JointSpectralAmplitude::grid_s)
      .def_property_readonly("grid_i", &JointSpectralAmplitude::grid_i)
      .def_property_readonly("values", &JointSpectralAmplitude::values)
      .def("norm_squared", &JointSpectralAmplitude::norm_squared)
      .def("normalized", &JointSpectralAmplitude::normalized);

  m.def("build_gaussian", &build_gaussian, py::arg("center"), py::arg("sigma"), py::arg("grid"));
  m.def("build_sign_alpha_gaussian", &build_sign_alpha_gaussian, py::arg("a"), py::arg("sigma"), py::arg("grid"));
  m.def("build_power_alpha_gaussian", &build_power_alpha_gaussian, py::arg("a"), py::arg("sigma"), py::arg("grid"));
  m.def("build_split_phase_gaussian", &build_split_phase_gaussian, py::arg("a"), py::arg("sigma"), py::arg("grid"));
  m.def("build_odd_gaussian_pair", &build_odd_gaussian_pair, py::arg("center"), py::arg("sigma"), py::arg("grid"));
  m.def("build_jsa_factored", &build_jsa_factored, py::arg("f_plus"), py::arg("f_minus"), py::arg("grid_s"),
        py::arg("grid_i"));
  m.def("build_jsa_separable", &build_jsa_separable, py::arg("gamma"), py::arg("beta"), py::arg("grid_s"),
        py::arg("grid_i"));
  m.def("exchange", &exchange, py::arg("jsa"));
  m.def("fbs_rotate", [](const JointSpectralAmplitude& j) {
    auto r = fbs_rotate(j);
    return py::make_tuple(r.jsa, r.clipped_fraction);
  }, py::arg("jsa"));
  m.def("schmidt_entropy", &schmidt_entropy, py::arg("jsa"));
  m.def("symmetry_decompose", [](const SpectralAmplitude& f) {
    auto d = symmetry_decompose(f);
    return py::make_tuple(d.symmetric, d.antisymmetric, d.symmetric_weight, d.antisymmetric_weight);
  }, py::arg("f"));

  m.def("cosine_fourier", py::overload_cast<const SpectralAmplitude&, double>(&cosine_fourier), py::arg("f"),
        py::arg("tau"));
  m.def("wigner", &wigner, py::arg("f"), py::arg("tau"), py::arg("mu"));
  m.def("cross_wigner", &cross_wigner, py::arg("f"), py::arg("g"), py::arg("tau"), py::arg("mu"));
  m.def("wigner_map", [](const SpectralAmplitude& f, const TimeGrid& t, const FrequencyGrid& mu, unsigned threads) {
    return wigner_map(f, t, mu, threads).values;
  }, py::arg("f"), py::arg("taus"), py::arg("mus"), py::arg("threads") = 1);
  m.def("stft", &stft, py::arg("f"), py::arg("mu"), py::arg("t"));
  m.def("stft_map", [](const SpectralAmplitude& f, const TimeGrid& t, const FrequencyGrid& mu, unsigned threads) {
    return stft_map(f, t, mu, threads).values;
  }, py::arg("f"), py::arg("ts"), py::arg("mus"), py::arg("threads") = 1);
  m.def("characteristic", &characteristic, py::arg("f"), py::arg("mu"), py::arg("tau"));
  m.def("reconstruct_pump_intensity", [](const TimeGrid& taus, const std::vector<double>& trace,
                                         const FrequencyGrid& omegas) {
    auto e = reconstruct_pump_intensity(taus, trace, omegas);
    return py::make_tuple(e.values, e.window_short);
  }, py::arg("taus"), py::arg("trace"), py::arg("omegas"));
  m.def("reconstruct_amplitude", [](const TimeGrid& ts, const FrequencyGrid& mus, const Eigen::MatrixXcd& F, cplx f0) {
    return reconstruct_amplitude(StftMap{ts, mus, F}, f0);
  }, py::arg("ts"), py::arg("mus"), py::arg("stft_values"), py::arg("f0"));

  m.def("hom", &hom, py::arg("f_minus"), py::arg("tau"), py::arg("mu") = 0.0);
  m.def("hom_decomposed", &hom_decomposed, py::arg("f_minus"), py::arg("a"), py::arg("tau"), py::arg("mu") = 0.0);
  m.def("hom_anyon_sign_phase", &hom_anyon_sign_phase, py::arg("f_envelope"), py::arg("a"), py::arg("tau"));
  m.def("hom_anyon_sign_phase_corrected", &hom_anyon_sign_phase_corrected, py::arg("f_envelope"), py::arg("a"),
        py::arg("tau"));
  m.def("hom_anyon_series", [](double sigma, const AnyonParameter& a, double tau, int n) {
    return hom_anyon_series(sigma, a, tau, n).value;
  }, py::arg("sigma"), py::arg("a"), py::arg("tau"), py::arg("n_terms") = 60);
  m.def("mz_general", &mz_general, py::arg("jsa"), py::arg("tau"));
  m.def("mz_symmetric", &mz_symmetric, py::arg("f_plus"), py::arg("tau"));
  m.def("mz_antisymmetric", &mz_antisymmetric, py::arg("f_minus"), py::arg("tau"));
  m.def("mz_anyonic", &mz_anyonic, py::arg("f_plus"), py::arg("f_minus_envelope"), py::arg("a"), py::arg("tau"));
  m.def("single_count", [](const SpectralAmplitude& s, double tau, const std::string& port) {
    if (port != "a" && port != "b") throw ConfigError("port must be 'a' or 'b'");
    return single_count(s, tau, port == "a" ? Port::A : Port::B);
  }, py::arg("s"), py::arg("tau"), py::arg("port") = "a");
  m.def("nonlinear_mz", &nonlinear_mz, py::arg("jsa"), py::arg("tau"));
  m.def("fermion_mz", &fermion_mz, py::arg("jsa"), py::arg("tau"));
  m.def("gmz_general", &gmz_general, py::arg("jsa"), py::arg("tau"), py::arg("mu"), py::arg("quarter_phase") = false);
  m.def("gmz_symmetric", &gmz_symmetric, py::arg("f_plus"), py::arg("tau"), py::arg("mu"),
        py::arg("quarter_phase") = false);
  m.def("gmz_antisymmetric", &gmz_antisymmetric, py::arg("f_minus"), py::arg("tau"), py::arg("mu"));
  m.def("gmz_separable", &gmz_separable, py::arg("gamma"), py::arg("beta"), py::arg("tau"), py::arg("mu"),
        py::arg("quarter_phase") = false);
  m.def("gmz_anyonic", &gmz_anyonic, py::arg("f_plus"), py::arg("f_minus"), py::arg("tau"), py::arg("mu"));

  m.def("oracle_coincidence", [](const JointSpectralAmplitude& j, const std::string& pipeline, double tau, double mu,
                                 bool quarter) {
    return oracle_coincidence(j, pipeline_from_string(pipeline), tau, mu, quarter);
  }, py::arg("jsa"), py::arg("pipeline"), py::arg("tau"), py::arg("mu") = 0.0, py::arg("quarter_phase") = false);
}
