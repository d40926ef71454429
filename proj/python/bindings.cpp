#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgdavg/bench.hpp"
#include "sgdavg/verify.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sgdavg;

namespace {

// Online averager bound to one scheme; wraps AveragerState for Python.
class Averager {
 public:
  Averager(const std::string &scheme, std::size_t dimension, std::size_t horizon)
      : scheme_(parse_scheme(scheme, horizon)), state_(make_averager_state(dimension)) {}

  void absorb(const WeightVector &w) { sgdavg::absorb(state_, w, state_.iterate_index, scheme_); }
  double next_rho() const { return rho(scheme_, state_.iterate_index, state_); }
  const WeightVector &average() const { return state_.average; }
  double cumulative_weight() const { return state_.cumulative_weight; }
  std::size_t iterate_index() const { return state_.iterate_index; }
  std::string name() const { return scheme_name(scheme_); }

 private:
  AveragingScheme scheme_;
  AveragerState state_;
};

ExperimentConfig make_config(const std::optional<std::string> &data,
                             const std::optional<std::string> &synthetic,
                             const std::optional<double> &lambda,
                             const std::vector<std::string> &schemes,
                             const std::vector<std::string> &steps, std::size_t passes,
                             const std::vector<std::uint64_t> &seeds, std::size_t evals,
                             const std::string &sampling, std::size_t threads,
                             const std::string &out) {
  ExperimentConfig c;
  if (data && synthetic)
    throw Error("pass either data or synthetic, not both");
  if (data)
    c.data = *data;
  else if (synthetic)
    c.data = parse_synthetic_spec(*synthetic);
  else
    throw Error("one of data or synthetic is required");
  c.lambda = lambda;
  c.schemes = schemes;
  c.schedules = steps;
  c.passes = passes;
  c.seeds = seeds;
  c.evaluations_per_pass = evals;
  c.sampling = parse_sampling(sampling);
  c.threads = threads;
  c.output = out;
  return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projected stochastic subgradient method with iterate averaging";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.attr("CSV_HEADER") = kCsvHeader;

  m.def(
      "project",
      [](const WeightVector &v, std::optional<double> radius) {
        return radius ? project(make_ball(*radius), v) : project(WholeSpace{}, v);
      },
      "v"_a, "radius"_a = py::none(), "Euclidean projection onto R^p or the ball of given radius");
  m.def(
      "step_size",
      [](const std::string &schedule, double mu, std::size_t t) {
        return step_size(parse_schedule(schedule, mu), t);
      },
      "schedule"_a, "mu"_a, "t"_a);

  py::class_<Averager>(m, "Averager")
      .def(py::init<const std::string &, std::size_t, std::size_t>(), "scheme"_a, "dimension"_a,
           "horizon"_a = 0)
      .def("absorb", &Averager::absorb, "w"_a)
      .def("next_rho", &Averager::next_rho)
      .def_property_readonly("average", &Averager::average)
      .def_property_readonly("cumulative_weight", &Averager::cumulative_weight)
      .def_property_readonly("iterate_index", &Averager::iterate_index)
      .def_property_readonly("scheme", &Averager::name);

  m.def(
      "closed_form_average",
      [](const std::vector<WeightVector> &iterates, const std::string &scheme,
         std::size_t horizon) {
        if (iterates.empty())
          throw Error("closed-form average of an empty sequence");
        return closed_form_average(iterates, parse_scheme(scheme, horizon));
      },
      "iterates"_a, "scheme"_a, "horizon"_a = 0);

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("n", &Dataset::size)
      .def_readonly("dimension", &Dataset::dimension)
      .def_readonly("standardized", &Dataset::standardized)
      .def_readonly("bias_added", &Dataset::bias_added)
      .def_property_readonly("labels",
                             [](const Dataset &d) {
                               std::vector<int> y;
                               for (const auto &s : d.samples)
                                 y.push_back(s.label);
                               return y;
                             })
      .def("features",
           [](const Dataset &d, std::size_t i) {
             std::vector<std::pair<std::size_t, double>> out;
             for (const auto &f : d.samples.at(i).features)
               out.emplace_back(f.index, f.value);
             return out;
           })
      .def("__len__", &Dataset::size)
      .def("__eq__", [](const Dataset &a, const Dataset &b) { return a == b; });

  m.def("parse_libsvm", &parse_libsvm_string, "text"_a, "min_dimension"_a = 0);
  m.def("load_libsvm", &load_libsvm, "path"_a);
  m.def("to_libsvm", &to_libsvm_string, "dataset"_a);
  m.def("standardize", &standardize, "dataset"_a);
  m.def("add_bias", &add_bias, "dataset"_a);
  m.def("preprocess", &preprocess, "dataset"_a);
  m.def(
      "synthesize",
      [](std::size_t n, std::size_t p, std::uint64_t seed, double noise) {
        SyntheticProblem sp = synthesize(n, p, seed, noise);
        return py::make_tuple(std::move(sp.dataset), sp.reference);
      },
      "n"_a, "p"_a, "seed"_a, "noise"_a);

  m.def(
      "svm_objective",
      [](const WeightVector &w, const Dataset &d, double lam) {
        return svm_objective(w, SvmObjective(d, lam));
      },
      "w"_a, "dataset"_a, "lam"_a);
  m.def(
      "svm_subgradient",
      [](const WeightVector &w, const Dataset &d, std::size_t i, double lam) {
        return svm_stochastic_subgradient(w, d.samples.at(i), lam);
      },
      "w"_a, "dataset"_a, "index"_a, "lam"_a);
  m.def(
      "svm_full_subgradient",
      [](const WeightVector &w, const Dataset &d, double lam) {
        return svm_full_subgradient(w, SvmObjective(d, lam));
      },
      "w"_a, "dataset"_a, "lam"_a);
  m.def("variance_bound", &variance_bound, "dataset"_a, "lam"_a);

  m.def("telescoping_sum", [](const std::vector<double> &a) { return telescoping_sum(a); });
  m.def("telescoping_closed_form",
        [](const std::vector<double> &a) { return telescoping_closed_form(a); });

  m.def(
      "run_experiment",
      [](const std::string &out, std::optional<std::string> data,
         std::optional<std::string> synthetic, std::optional<double> lam,
         std::vector<std::string> schemes, std::vector<std::string> steps, std::size_t passes,
         std::vector<std::uint64_t> seeds, std::size_t evals_per_pass, std::string sampling,
         std::size_t threads) {
        const ExperimentConfig c = make_config(data, synthetic, lam, schemes, steps, passes, seeds,
                                               evals_per_pass, sampling, threads, out);
        py::gil_scoped_release release;
        return run_experiment(c).records.size();
      },
      "out"_a, py::kw_only(), "data"_a = py::none(), "synthetic"_a = py::none(),
      "lam"_a = py::none(),
      "schemes"_a = std::vector<std::string>{"0", "1", "0.5", "D", "W", "W2"},
      "steps"_a = std::vector<std::string>{}, "passes"_a = 50,
      "seeds"_a = std::vector<std::uint64_t>{0}, "evals_per_pass"_a = 1,
      "sampling"_a = "with_replacement", "threads"_a = 1,
      "Run the scheme x schedule grid and write the CSV; returns the row count");

  m.def(
      "estimate_fstar",
      [](const Dataset &d, std::optional<double> lam, std::size_t passes, std::size_t multiplier) {
        const double l = resolve_lambda(lam, d);
        FStarEstimate est;
        {
          py::gil_scoped_release release;
          est = estimate_fstar(d, l, passes, multiplier);
        }
        return py::dict("value"_a = est.value, "method"_a = est.method,
                        "iterations"_a = est.iterations, "point"_a = est.point, "lam"_a = l);
      },
      "dataset"_a, "lam"_a = py::none(), "passes"_a = 50, "multiplier"_a = kMinFStarMultiplier);

  m.def("verify_suite", [] {
    py::list out;
    for (const auto &c : verify_suite(VerifyConfig{}))
      out.append(py::make_tuple(c.name, c.passed, c.detail));
    return out;
  });

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
