#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmimo/metrics.hpp"
#include "dmimo/qos.hpp"

namespace py = pybind11;
using namespace dmimo;

namespace {

using ComplexArray = py::array_t<cxd, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D complex array");
  ComplexMatrix m(arr.shape(0), arr.shape(1));
  auto r = arr.unchecked<2>();
  for (py::ssize_t i = 0; i < arr.shape(0); ++i)
    for (py::ssize_t j = 0; j < arr.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

py::array_t<cxd> from_matrix(const ComplexMatrix& m) {
  py::array_t<cxd> arr({m.rows(), m.cols()});
  auto w = arr.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return arr;
}

py::dict run_result_dict(const ScenarioConfig& cfg, const RunResult& r) {
  py::dict d;
  d["scheme"] = r.scheme;
  d["infeasible"] = r.infeasible;
  d["converged"] = r.converged;
  d["avg_bs_usage"] = r.avg_usage;
  d["avg_interfering_area_m2"] = r.avg_area;
  d["residual"] = r.residual;
  d["effective_capacity"] = r.effcap;
  d["max_effective_capacity"] = r.max_effective_capacity;
  d["lambda"] = r.tracking.lambda;
  d["iterations"] = r.tracking.iterations;
  d["fixed_cardinality"] = r.fixed_cardinality;
  d["frames"] = r.frames_total;
  d["seed"] = r.seed;
  d["csv"] = run_csv(cfg, r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "QoS-aware base-station selection for distributed MIMO downlinks";

  m.def(
      "svd",
      [](const ComplexArray& a) {
        const SvdResult d = svd(to_matrix(a));
        return py::make_tuple(from_matrix(d.u), d.singular_values, from_matrix(d.v));
      },
      py::arg("a"), "Thin SVD (u, singular_values, v) with a = u @ diag(s) @ v.conj().T");

  m.def(
      "water_fill",
      [](const std::vector<double>& gains, double budget, double bt) {
        const WaterFillResult w = water_fill(gains, budget, bt);
        py::dict d;
        d["water_level"] = w.water_level;
        d["powers"] = w.powers;
        d["rate"] = w.rate;
        d["active"] = w.active;
        return d;
      },
      py::arg("gains"), py::arg("budget"), py::arg("bt") = 1.0);

  m.def(
      "mimo_capacity",
      [](const ComplexArray& h, double power, double bt) {
        return mimo_capacity(to_matrix(h), power, bt);
      },
      py::arg("h"), py::arg("power"), py::arg("bt") = 1.0);

  m.def(
      "rate_derivative",
      [](const ComplexArray& h, double power, double bt) {
        return rate_derivative(to_matrix(h), power, bt);
      },
      py::arg("h"), py::arg("power"), py::arg("bt") = 1.0);

  m.def("qos_exponent", &qos_exponent, py::arg("arrival_rate"), py::arg("delay_bound"),
        py::arg("violation_prob"));
  m.def(
      "effective_capacity",
      [](const std::vector<double>& rates, double theta) {
        return effective_capacity(rates, theta);
      },
      py::arg("rates"), py::arg("theta"));
  m.def(
      "constraint_residual",
      [](const std::vector<double>& rates, double theta, double arrival) {
        return constraint_residual(rates, theta, arrival);
      },
      py::arg("rates"), py::arg("theta"), py::arg("arrival_rate"));

  m.def(
      "simulate_queue",
      [](double arrival, const std::vector<double>& service, double delay_bound) {
        const QueueStats st = simulate_queue(arrival, service, delay_bound);
        py::dict d;
        d["violation_prob"] = st.violation_prob;
        d["tail_slope"] = st.tail_slope;
        d["stable"] = st.stable;
        d["mean_service"] = st.mean_service;
        d["mean_queue"] = st.mean_queue;
        return d;
      },
      py::arg("arrival_rate"), py::arg("service"), py::arg("delay_bound_frames"));

  m.def(
      "rate_envelope",
      [](const std::vector<double>& rates) {
        const RateEnvelope env = rate_envelope(rates);
        py::dict d;
        d["usage"] = env.usage;
        d["rate"] = env.rate;
        d["slope"] = env.slope;
        return d;
      },
      py::arg("rates"));
  m.def(
      "usage_to_alpha",
      [](const std::vector<double>& rates, double usage) {
        const RateEnvelope env = rate_envelope(rates);
        return usage_to_alpha(env, usage, int(rates.size()) - 1);
      },
      py::arg("rates"), py::arg("usage"));
  m.def(
      "theorem1_usage",
      [](const std::vector<double>& rates, double theta, double lambda) {
        return theorem1_usage(rate_envelope(rates), theta, lambda);
      },
      py::arg("rates"), py::arg("theta"), py::arg("lambda_"));

  m.def(
      "bd_precoders",
      [](const std::vector<ComplexArray>& hs) {
        std::vector<ComplexMatrix> channels;
        channels.reserve(hs.size());
        for (const auto& h : hs) channels.push_back(to_matrix(h));
        py::list out;
        for (const BdUser& u : bd_precoders(channels)) {
          py::dict d;
          d["skipped"] = u.skipped;
          if (!u.skipped) {
            d["precoder"] = from_matrix(u.precoder);
            d["gains"] = u.gains;
          }
          out.append(d);
        }
        return out;
      },
      py::arg("user_channels"));

  m.def(
      "tdma_time_alloc",
      [](const std::vector<double>& rates, const std::vector<double>& theta,
         const std::vector<double>& lam) {
        const double delta = solve_delta(rates, theta, lam);
        return py::make_tuple(tdma_time_alloc(rates, theta, lam, delta), delta);
      },
      py::arg("rates"), py::arg("theta"), py::arg("lambda_"),
      "Slot shares plus the normalizing multiplier");

  m.def("semi_random_select", &semi_random_select, py::arg("num_bs"), py::arg("cardinality"),
        py::arg("seed"), py::arg("frame"));

  m.def("scenario_listing", &scenario_listing);
  m.def("scheme_names", &scheme_names);

  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        const ScenarioConfig cfg = parse_scenario(config_text);
        return run_result_dict(cfg, run_experiment(cfg));
      },
      py::arg("config_text"), "Run one scheme end to end from scenario text");

  m.def(
      "sweep",
      [](const std::string& config_text, const std::string& axis,
         const std::vector<double>& values) {
        const ScenarioConfig cfg = parse_scenario(config_text);
        const SweepResult sr = sweep(cfg, axis, values);
        py::list rows;
        for (const SweepRow& row : sr.rows) {
          py::dict d = run_result_dict(cfg, row.result);
          d["axis"] = axis;
          d["axis_value"] = row.axis_value;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["csv"] = sweep_csv(cfg, sr);
        return out;
      },
      py::arg("config_text"), py::arg("axis"), py::arg("values"));
}
