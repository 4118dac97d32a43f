#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mwadv/exact_eval.hpp"
#include "mwadv/experiments.hpp"
#include "mwadv/online_dp.hpp"
#include "mwadv/policies.hpp"

namespace py = pybind11;
using namespace mwadv;

namespace {

ModelParams make_params(double epsilon, double mu, int horizon, double rho0) {
  return ModelParams(epsilon, mu, horizon, rho0, LossFunction::absolute());
}

OfflinePolicy as_policy(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return OfflinePolicy::parse(obj.cast<std::string>());
  return obj.cast<OfflinePolicy>();
}

py::dict mc_dict(const MCResult& r) {
  py::dict d;
  d["trials"] = r.trials;
  d["mean"] = r.mean;
  d["stderr"] = r.stderr_;
  d["seed"] = r.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adversarial multiplicative-weights model: exact evaluation and optimal adversaries";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<GuardViolation>(m, "GuardViolation", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&make_params), py::arg("epsilon"), py::arg("mu"), py::arg("horizon"), py::arg("rho0"))
      .def_readonly("epsilon", &ModelParams::epsilon)
      .def_readonly("mu", &ModelParams::mu)
      .def_readonly("horizon", &ModelParams::horizon)
      .def_readonly("rho0", &ModelParams::rho0)
      .def("with_horizon", &ModelParams::with_horizon)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(epsilon=" + format_number(p.epsilon) + ", mu=" + format_number(p.mu) +
               ", horizon=" + std::to_string(p.horizon) + ", rho0=" + format_number(p.rho0) + ")";
      });

  m.def("weight_update_g", py::overload_cast<double, double>(&weight_update_g), py::arg("rho"), py::arg("epsilon"));
  m.def("weight_update_g_inv", py::overload_cast<double, double>(&weight_update_g_inv), py::arg("rho"),
        py::arg("epsilon"));
  m.def("weight_power", py::overload_cast<int, double, double>(&weight_power), py::arg("j"), py::arg("rho"),
        py::arg("epsilon"));

  py::class_<OfflinePolicy>(m, "OfflinePolicy")
      .def(py::init(&OfflinePolicy::parse), py::arg("text"))
      .def("__str__", &OfflinePolicy::to_string)
      .def("__repr__", [](const OfflinePolicy& p) { return "OfflinePolicy('" + p.to_string() + "')"; })
      .def("__len__", &OfflinePolicy::horizon)
      .def("__eq__", [](const OfflinePolicy& a, const OfflinePolicy& b) { return a == b; })
      .def_property_readonly("lie_count", &OfflinePolicy::lie_count)
      .def_property_readonly("truth_count", &OfflinePolicy::truth_count)
      .def("blocks", [](const OfflinePolicy& p) {
        std::vector<std::pair<int, int>> out;
        for (const auto& b : block_form(p).blocks) out.emplace_back(b.lies, b.truths);
        return out;
      });

  m.def("false_policy", &false_policy, py::arg("horizon"));
  m.def("true_policy", &true_policy, py::arg("horizon"));
  m.def("ratio_policy", [](const ModelParams& p) { return ratio_policy(p).policy; }, py::arg("params"));
  m.def("random_policy", &random_policy, py::arg("horizon"), py::arg("q"), py::arg("seed"));

  m.def("value_false", &value_false, py::arg("n"), py::arg("rho"), py::arg("params"));
  m.def("value_true", &value_true, py::arg("n"), py::arg("rho"), py::arg("params"));
  m.def(
      "value_policy", [](const py::object& policy, const ModelParams& p) { return value_policy(as_policy(policy), p); },
      py::arg("policy"), py::arg("params"));
  m.def(
      "brute_force_value",
      [](const py::object& policy, const ModelParams& p) { return brute_force_value(as_policy(policy), p); },
      py::arg("policy"), py::arg("params"));
  m.def(
      "offline_optimum",
      [](const ModelParams& p) {
        auto o = exhaustive_offline_optimum(p);
        return py::make_tuple(o.policy, o.value);
      },
      py::arg("params"));
  m.def(
      "bonus_term",
      [](const py::object& policy, const ModelParams& p) {
        auto b = bonus_term(block_form(as_policy(policy)), p);
        py::dict d;
        d["exact"] = b.exact;
        d["normal_approx"] = b.normal_approx;
        d["exact_terms"] = b.exact_terms;
        d["approx_terms"] = b.approx_terms;
        return d;
      },
      py::arg("policy"), py::arg("params"));
  m.def(
      "offset_distribution",
      [](int n, int m_truths, double mu) {
        auto d = offset_distribution(n, m_truths, mu);
        py::dict out;
        for (int j = d.support_min(); j <= d.support_max(); ++j) out[py::int_(j)] = d.mass(j);
        return out;
      },
      py::arg("n_lies"), py::arg("m_truths"), py::arg("mu"));
  m.def("no_adversary_value", &no_adversary_value, py::arg("params"));

  py::class_<ValueTable>(m, "ValueTable")
      .def_property_readonly("horizon", &ValueTable::horizon)
      .def_property_readonly("root_value", &ValueTable::root_value)
      .def_property_readonly("bellman_updates", &ValueTable::bellman_updates)
      .def("value", &ValueTable::value, py::arg("stage"), py::arg("offset"))
      .def(
          "action",
          [](const ValueTable& t, int k, int j) { return t.action(k, j) == Decision::Lie ? "lie" : "truth"; },
          py::arg("stage"), py::arg("offset"))
      .def("tie", &ValueTable::tie, py::arg("stage"), py::arg("offset"));

  m.def("solve_two_expert", &solve_two_expert, py::arg("params"));
  m.def("optimal_value", &optimal_value, py::arg("params"));
  m.def("no_information_baseline", &no_information_baseline, py::arg("params"));
  m.def(
      "simulate_online",
      [](const ModelParams& p, std::int64_t trials, std::uint64_t seed) {
        return mc_dict(simulate_online(p, solve_two_expert(p), trials, seed));
      },
      py::arg("params"), py::arg("trials"), py::arg("seed"));

  m.def(
      "solve_k_expert",
      [](double epsilon, int horizon, std::vector<double> accuracies, std::vector<double> initial_weights) {
        KExpertParams k{epsilon, horizon, std::move(accuracies), std::move(initial_weights)};
        return solve_k_expert(k).value;
      },
      py::arg("epsilon"), py::arg("horizon"), py::arg("accuracies"), py::arg("initial_weights"));
  m.def(
      "monte_carlo_k_expert",
      [](double epsilon, int horizon, std::vector<double> accuracies, std::vector<double> initial_weights,
         std::int64_t trials, std::uint64_t seed, const std::string& mode) {
        KExpertParams k{epsilon, horizon, std::move(accuracies), std::move(initial_weights)};
        KExpertMode md;
        if (mode == "clairvoyant") {
          md = KExpertMode::Clairvoyant;
        } else if (mode == "exact_dp") {
          md = KExpertMode::ExactDp;
        } else {
          throw DomainError("mode must be 'clairvoyant' or 'exact_dp'");
        }
        return mc_dict(monte_carlo_k_expert(k, trials, seed, md));
      },
      py::arg("epsilon"), py::arg("horizon"), py::arg("accuracies"), py::arg("initial_weights"), py::arg("trials"),
      py::arg("seed"), py::arg("mode") = "clairvoyant");

  m.def(
      "compare",
      [](std::vector<int> horizons, double mu, double rho0, double epsilon, int offline_max_n) {
        ExperimentConfig c;
        c.horizons = std::move(horizons);
        c.mu = {mu};
        c.rho0 = {rho0};
        c.epsilon = epsilon;
        c.offline_max_n = offline_max_n;
        py::list rows;
        for (const auto& r : compare_rows(c)) {
          py::dict d;
          d["N"] = r.N;
          d["v_false"] = r.v_false;
          d["v_true"] = r.v_true;
          d["v_ratio"] = r.v_ratio;
          d["v_offline_opt"] = r.v_offline_opt ? py::object(py::float_(*r.v_offline_opt)) : py::object(py::none());
          d["v_online"] = r.v_online;
          d["v_no_adversary"] = r.v_no_adversary;
          d["v_no_info"] = r.v_no_info;
          rows.append(d);
        }
        return rows;
      },
      py::arg("horizons"), py::arg("mu") = 0.5, py::arg("rho0") = 0.5, py::arg("epsilon") = 0.36787944117144233,
      py::arg("offline_max_n") = 14);
}
