#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "crowdbelief/aggregation.hpp"
#include "crowdbelief/belief.hpp"
#include "crowdbelief/campaign_io.hpp"
#include "crowdbelief/cli.hpp"
#include "crowdbelief/crowd_sim.hpp"
#include "crowdbelief/error.hpp"
#include "crowdbelief/monitor.hpp"

namespace py = pybind11;
using namespace crowdbelief;

namespace {

FocalSet to_focal(const Frame& frame, const std::vector<std::string>& labels) {
  FocalSet s;
  for (const auto& l : labels) {
    auto i = frame.index_of(l);
    if (!i) throw py::key_error("unknown label '" + l + "'");
    s = s | FocalSet::singleton(*i);
  }
  return s;
}

py::frozenset from_focal(const Frame& frame, FocalSet s) {
  py::set out;
  for (auto i : s.indices()) out.add(py::str(frame.label(i)));
  return py::frozenset(out);
}

MassFunction make_mass(const std::vector<std::string>& labels, const py::dict& masses) {
  Frame frame(labels);
  MassFunction::Map map;
  for (auto item : masses) {
    auto members = item.first.cast<std::vector<std::string>>();
    map[to_focal(frame, members)] += item.second.cast<double>();
  }
  return MassFunction(frame, std::move(map));
}

py::dict mass_dict(const MassFunction& m) {
  py::dict out;
  for (const auto& [set, mass] : m.masses()) out[from_focal(m.frame(), set)] = mass;
  return out;
}

py::dict distribution_dict(const PignisticDistribution& p) {
  py::dict out;
  for (std::size_t i = 0; i < p.probs.size(); ++i) out[py::str(p.frame.label(i))] = p.probs[i];
  return out;
}

std::vector<std::string> decision_names(FocalSet decision) {
  std::vector<std::string> out;
  for (auto i : decision.indices())
    out.emplace_back(profile_name(static_cast<Profile>(i)));
  return out;
}

py::dict profile_dict(const ContributorProfile& p) {
  py::dict d;
  d["contributor_id"] = p.contributor_id;
  d["ip_c"] = p.qualification.ip_c;
  d["m_omega2"] = mass_dict(p.qualification.mass_omega2);
  d["m_omega3"] = mass_dict(p.reflection.mass_omega3);
  d["m_omega4"] = mass_dict(p.mass_omega4);
  d["betp_omega4"] = distribution_dict(p.pignistic4);
  d["decision"] = decision_names(p.decision);
  return d;
}

}  // namespace

PYBIND11_MODULE(_crowdbelief, m) {
  m.doc() = "Belief-function profiling and aggregation of crowdsourced answers";

  static py::exception<Error> error_type(m, "CrowdBeliefError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.ptr(), e.what());
    }
  });

  py::class_<MassFunction>(m, "MassFunction")
      .def(py::init(&make_mass), py::arg("labels"), py::arg("masses"),
           "Build from frame labels and {iterable of labels: mass}.")
      .def_property_readonly("labels",
                             [](const MassFunction& self) { return self.frame().labels(); })
      .def_property_readonly("masses", &mass_dict)
      .def_property_readonly("conflict", &MassFunction::conflict)
      .def("__getitem__",
           [](const MassFunction& self, const std::vector<std::string>& members) {
             return self.at(to_focal(self.frame(), members));
           })
      .def("__eq__", [](const MassFunction& a, const MassFunction& b) { return a == b; })
      .def("__repr__", [](const MassFunction& self) {
        return "MassFunction(" + self.to_string() + ")";
      });

  m.def("vacuous", [](const std::vector<std::string>& labels) {
    return MassFunction::vacuous(Frame(labels));
  });
  m.def(
      "make_simple_support",
      [](const std::vector<std::string>& labels, const std::vector<std::string>& focal,
         double w) {
        Frame frame(labels);
        return make_simple_support(frame, to_focal(frame, focal), w);
      },
      py::arg("labels"), py::arg("focal"), py::arg("w"));
  m.def("discount", &discount, py::arg("m"), py::arg("alpha"));
  m.def("combine_conjunctive", [](const std::vector<MassFunction>& ms) {
    return combine_conjunctive(ms);
  });
  m.def("combine_yager",
        [](const std::vector<MassFunction>& ms) { return combine_yager(ms); });
  m.def(
      "vacuous_extend",
      [](const MassFunction& mass, const std::vector<std::string>& aux,
         const std::string& side) {
        if (side != "left" && side != "right")
          throw py::value_error("side must be 'left' or 'right'");
        return vacuous_extend(mass, Frame(aux),
                              side == "left" ? ExtensionSide::kLeft : ExtensionSide::kRight);
      },
      py::arg("m"), py::arg("aux"), py::arg("side") = "left");
  m.def("pignistic", [](const MassFunction& mass) { return distribution_dict(pignistic(mass)); });
  m.def(
      "decide",
      [](const MassFunction& mass, double tol) {
        return from_focal(mass.frame(), decide_answer(mass, tol));
      },
      py::arg("m"), py::arg("tol") = kDefaultArgmaxTolerance,
      "Pignistic argmax set of a mass function.");
  m.def("mean_mass", [](const std::vector<MassFunction>& ms) { return mean_mass(ms); });

  m.def("qualification_mass", &qualification_mass, py::arg("ip_c"), py::arg("beta") = 0.8);
  m.def("reflection_mass", &reflection_mass, py::arg("t_cq"), py::arg("t_0q"),
        py::arg("eta") = 0.8);
  m.def("profile_mass",
        py::overload_cast<const MassFunction&, const MassFunction&>(&profile_mass),
        py::arg("m_omega2"), py::arg("m_omega3"));
  m.def(
      "classify_profile",
      [](const MassFunction& m4, double tol) { return decision_names(classify_profile(m4, tol)); },
      py::arg("m4"), py::arg("tol") = kDefaultArgmaxTolerance);

  m.def(
      "profile_campaign",
      [](const std::filesystem::path& contributions, const std::filesystem::path& gold,
         std::optional<std::filesystem::path> config_path) {
        const CampaignConfig config = config_path ? load_config(*config_path) : CampaignConfig{};
        const auto contribs = load_contributions(contributions, config);
        const auto records = load_gold(gold, config);
        py::list out;
        for (const auto& p : profile_all(contribs, config.answers, reference_times(records),
                                         config.profiling()))
          out.append(profile_dict(p));
        return out;
      },
      py::arg("contributions"), py::arg("gold"), py::arg("config") = py::none(),
      "Profile every contributor of a campaign given as CSV files.");

  m.def(
      "simulate",
      [](std::uint64_t seed, std::size_t per_archetype,
         std::optional<std::filesystem::path> out_dir) {
        SimulationSpec spec = default_simulation_spec();
        spec.archetypes = default_archetypes(spec.config, per_archetype);
        const auto campaign = generate(spec.archetypes, spec.shape, spec.config, seed);
        if (out_dir) write_campaign(campaign, *out_dir);
        py::dict intended;
        for (const auto& [id, p] : campaign.intended)
          intended[py::str(id)] = std::string(profile_name(p));
        py::dict result;
        result["n_contributions"] = campaign.data.contributions.size();
        result["intended"] = intended;
        return result;
      },
      py::arg("seed"), py::arg("per_archetype") = 10, py::arg("out_dir") = py::none(),
      "Generate the default synthetic campaign; optionally write its CSV files.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a command line; returns (exit_code, stdout, stderr).");
}
