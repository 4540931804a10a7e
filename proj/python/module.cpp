#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "zenosim/counter.hpp"
#include "zenosim/dovetail.hpp"
#include "zenosim/format.hpp"
#include "zenosim/machine.hpp"
#include "zenosim/universal.hpp"
#include "zenosim/zeno_clock.hpp"
#include "zenosim/zeno_halt.hpp"

namespace py = pybind11;
using namespace zenosim;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

py::dict run_result_to_dict(const RunResult& r, const MachineSpec& m) {
  py::dict d;
  d["halted"] = r.halted;
  d["outcome"] = r.halted ? step_kind_name(r.outcome) : "exhausted";
  d["steps"] = r.steps_used.finite_part;
  d["state"] = m.state_name(r.final_config.state);
  d["head1"] = r.final_config.tape1.head;
  d["head2"] = r.final_config.tape2.head;
  d["blocked_on_oracle"] = r.blocked_on_oracle;
  return d;
}

MachineRegistry registry_of(const std::vector<MachineSpec>& extra, const MachineSpec* self) {
  MachineRegistry registry;
  if (self) registry.add(*self);
  for (const MachineSpec& m : extra) registry.add(m);
  if (self)
    for (const OracleIf& o : self->oracles())
      if (!registry.contains(o.oracle_machine) && o.oracle_machine == "u")
        registry.add(build_placeholder_u());
  return registry;
}

LangAcceptor as_acceptor(const py::object& obj) {
  if (py::isinstance<MachineSpec>(obj)) return LangAcceptor(obj.cast<const MachineSpec&>());
  if (py::isinstance<Dfa>(obj)) return LangAcceptor(obj.cast<const Dfa&>());
  throw py::type_error("expected a Machine or a Dfa");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zeno-machine simulation toolkit: two-tape Turing machines, the "
            "halving counter with its symbolic w-limit, ordinal time, the Zeno "
            "halting procedure, and the dovetailing diagonalization machinery.";

  py::register_exception<Error>(m, "ZenosimError");

  py::class_<MachineSpec>(m, "Machine")
      .def_property_readonly("name", &MachineSpec::name)
      .def_property_readonly("states", &MachineSpec::state_names)
      .def_property_readonly("symbols", &MachineSpec::symbol_names)
      .def_property_readonly("rule_count", [](const MachineSpec& s) { return s.rules().size(); })
      .def_property_readonly("oracle_count",
                             [](const MachineSpec& s) { return s.oracles().size(); })
      .def("__eq__", [](const MachineSpec& a, const MachineSpec& b) { return a == b; })
      .def("__repr__", [](const MachineSpec& s) {
        return "<Machine '" + s.name() + "', " + std::to_string(s.state_count()) + " states, " +
               std::to_string(s.rules().size()) + " rules>";
      });

  m.def("parse", [](const std::string& text) {
    ParsedProgram p = parse_program(text);
    return py::make_tuple(p.machine, p.input ? py::cast(*p.input) : py::none());
  }, py::arg("text"), "Parse a .tm document into (machine, input-or-None).");

  m.def("serialize", [](const MachineSpec& machine, std::optional<std::vector<std::string>> input) {
    return serialize_program(machine, input);
  }, py::arg("machine"), py::arg("input") = py::none(),
     "Canonical .tm text; parse(serialize(m)) reproduces m exactly.");

  m.def("encode", [](const MachineSpec& machine, std::optional<std::vector<std::string>> input) {
    return encode_for_universal(machine, input).symbols;
  }, py::arg("machine"), py::arg("input") = py::none(),
     "Flatten machine+input to symbols over {0,1,#}.");

  m.def("decode", [](const std::string& symbols) {
    ParsedProgram p = decode_universal(EncodedMachine{symbols});
    return py::make_tuple(p.machine, p.input ? py::cast(*p.input) : py::none());
  }, py::arg("symbols"));

  m.def("run", [](const MachineSpec& machine, const std::vector<std::string>& input,
                  std::uint64_t fuel, const std::vector<MachineSpec>& with_machines) {
    MachineRegistry registry = registry_of(with_machines, &machine);
    RegistryResolver resolver(registry, fuel);
    RunResult r = run(machine, input, fuel, machine.has_oracles() ? &resolver : nullptr);
    return run_result_to_dict(r, machine);
  }, py::arg("machine"), py::arg("input") = std::vector<std::string>{},
     py::arg("fuel") = 10000, py::arg("with_machines") = std::vector<MachineSpec>{},
     "Fuel-bounded direct run; oracles resolve against the named machines.");

  m.def("simulate", [](const std::string& symbols, std::uint64_t fuel) {
    ParsedProgram p = decode_universal(EncodedMachine{symbols});
    RunResult r = simulate(EncodedMachine{symbols}, fuel);
    return run_result_to_dict(r, p.machine);
  }, py::arg("symbols"), py::arg("fuel") = 10000,
     "Decode-and-interpret an encoded machine.");

  // counter
  py::class_<HalvingCounter>(m, "Counter")
      .def(py::init([] { return HalvingCounter::init(); }))
      .def("halve", &HalvingCounter::halve)
      .def("take_limit", &HalvingCounter::take_limit)
      .def("halve_past_limit", &HalvingCounter::halve_past_limit)
      .def_property_readonly("current", &HalvingCounter::current)
      .def_property_readonly("last_digit", &HalvingCounter::last_digit)
      .def_property_readonly("at_limit", &HalvingCounter::at_limit)
      .def_property_readonly("value",
                             [](const HalvingCounter& c) { return to_fraction_string(c.value()); })
      .def_property_readonly("divisions",
                             [](const HalvingCounter& c) { return to_string(c.divisions()); })
      .def("render", &HalvingCounter::render)
      .def("__eq__", [](const HalvingCounter& a, const HalvingCounter& b) {
        return compare_counters(a, b) == CounterCompare::Equal;
      })
      .def("__repr__", [](const HalvingCounter& c) { return "<Counter " + c.render() + ">"; });

  m.def("compare_counters", [](const HalvingCounter& a, const HalvingCounter& b) {
    return compare_counters(a, b) == CounterCompare::Equal ? "equal" : "unequal";
  });

  // ordinal time
  py::class_<OrdinalTime>(m, "Ordinal")
      .def(py::init([](std::uint64_t omega, std::uint64_t finite) {
        return OrdinalTime{omega, finite};
      }), py::arg("omega") = 0, py::arg("finite") = 0)
      .def_readonly("omega", &OrdinalTime::omega_coeff)
      .def_readonly("finite", &OrdinalTime::finite_part)
      .def("__eq__", [](const OrdinalTime& a, const OrdinalTime& b) { return a == b; })
      .def("__lt__", [](const OrdinalTime& a, const OrdinalTime& b) { return a < b; })
      .def("__add__", &ord_add)
      .def("__str__", [](const OrdinalTime& t) { return to_string(t); })
      .def("__repr__", [](const OrdinalTime& t) { return "<Ordinal " + to_string(t) + ">"; });

  // zeno clock, rendered as exact fractions
  m.def("step_duration", [](std::uint64_t k, const std::string& mu0) {
    return to_fraction_string(step_duration(k, ZenoSchedule{parse_fraction(mu0)}));
  }, py::arg("k"), py::arg("mu0") = "1");
  m.def("wall_time", [](std::uint64_t n, const std::string& mu0) {
    return to_fraction_string(wall_time(n, ZenoSchedule{parse_fraction(mu0)}));
  }, py::arg("n"), py::arg("mu0") = "1");
  m.def("wall_time_limit", [](const std::string& mu0) {
    return to_fraction_string(wall_time_limit(ZenoSchedule{parse_fraction(mu0)}));
  }, py::arg("mu0") = "1");

  m.def("zeno_halt_check", [](const MachineSpec& machine, const std::vector<std::string>& input,
                              std::uint64_t fuel, bool limit_stage, const std::string& mu0,
                              const std::vector<MachineSpec>& with_machines) {
    MachineRegistry registry = registry_of(with_machines, &machine);
    RegistryResolver resolver(registry, fuel);
    ZenoOutcome out =
        zeno_halt_check(machine, input, fuel, limit_stage, ZenoSchedule{parse_fraction(mu0)},
                        machine.has_oracles() ? &resolver : nullptr);
    if (const auto* v = std::get_if<HaltVerdict>(&out))
      return json_to_py(nlohmann::json::parse(verdict_to_json(*v)));
    const auto& ex = std::get<ZenoExhausted>(out);
    py::dict d;
    d["result"] = "exhausted";
    d["steps"] = ex.config.steps.finite_part;
    d["counter"] = ex.counter.render();
    return py::object(d);
  }, py::arg("machine"), py::arg("input") = std::vector<std::string>{},
     py::arg("fuel") = 10000, py::arg("limit_stage") = true, py::arg("mu0") = "1",
     py::arg("with_machines") = std::vector<MachineSpec>{},
     "The Zeno halting procedure: bit 1 at a concrete halt, bit 0 at the "
     "symbolic limit stage, or an exhausted report when the limit is off.");

  // dovetail
  m.def("run_dovetail", [](const MachineSpec& machine, const std::vector<std::string>& input,
                           std::uint64_t fuel, std::uint64_t w,
                           const std::vector<MachineSpec>& with_machines) {
    MachineRegistry registry = registry_of(with_machines, &machine);
    DovetailState s = run_dovetail(machine, input, registry, fuel, w);
    UDecision d = u_decide(s);
    py::dict out;
    out["rounds"] = s.rounds_done;
    out["instructions"] = s.instructions_used;
    out["sub_areas"] = s.areas.size();
    out["t"] = s.t_flag;
    out["q"] = s.q_flag;
    out["decision"] = d.bit;
    out["decision_path"] = d.path;
    out["survivors"] = surviving_leaves(s);
    out["m_saturated"] = s.m_saturated;
    return out;
  }, py::arg("machine"), py::arg("input") = std::vector<std::string>{},
     py::arg("fuel") = 10000, py::arg("w") = 16,
     py::arg("with_machines") = std::vector<MachineSpec>{});

  m.def("classify_halting_profile",
        [](const MachineSpec& machine, const std::vector<std::string>& input, std::uint64_t fuel,
           std::uint64_t w, const std::vector<MachineSpec>& with_machines) {
          MachineRegistry registry = registry_of(with_machines, &machine);
          ProfileReport r = classify_halting_profile(machine, input, registry, fuel, w);
          return json_to_py(nlohmann::json::parse(profile_report_to_json(r)));
        },
        py::arg("machine"), py::arg("input") = std::vector<std::string>{},
        py::arg("fuel") = 10000, py::arg("w") = 16,
        py::arg("with_machines") = std::vector<MachineSpec>{});

  m.def("paradox_report", [](std::uint64_t fuel, std::uint64_t w) {
    return json_to_py(nlohmann::json::parse(paradox_report_to_json(paradox_report(fuel, w))));
  }, py::arg("fuel") = 10000, py::arg("w") = 16,
     "Run y(y) under both stubbed answers for u(y,y); both rows refute themselves.");

  m.def("build_program_y", [] {
    MachineRegistry registry;
    registry.add(build_placeholder_u());
    return build_program_y("u", registry);
  }, "The diagonal program y against the reserved limit decider u.");

  m.def("build_placeholder_u", &build_placeholder_u);

  // right movers and DFAs
  py::class_<Dfa>(m, "Dfa")
      .def_property_readonly("alphabet", [](const Dfa& d) { return d.alphabet; })
      .def_property_readonly("state_count", &Dfa::state_count)
      .def("accepts", [](const Dfa& d, const std::vector<std::string>& word) {
        return d.accepts(word);
      })
      .def("__repr__", [](const Dfa& d) {
        return "<Dfa with " + std::to_string(d.state_count()) + " states>";
      });

  m.def("is_right_mover", &is_right_mover);
  m.def("right_mover_to_dfa", &right_mover_to_dfa);
  m.def("language_equiv_bounded",
        [](const py::object& a, const py::object& b, std::size_t max_len, std::uint64_t fuel) {
          EquivResult r = language_equiv_bounded(as_acceptor(a), as_acceptor(b), max_len, fuel);
          py::dict d;
          d["equivalent"] = r.equivalent;
          if (!r.equivalent) d["counterexample"] = r.counterexample;
          return d;
        },
        py::arg("a"), py::arg("b"), py::arg("max_len") = 10, py::arg("fuel") = 1000);

  m.attr("__version__") = "0.1.0";
}
