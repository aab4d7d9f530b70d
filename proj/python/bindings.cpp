#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ocds/core.hpp"
#include "ocds/fsm.hpp"
#include "ocds/lens.hpp"
#include "ocds/report.hpp"
#include "ocds/scenario.hpp"
#include "ocds/set_store.hpp"
#include "ocds/simulator.hpp"

namespace py = pybind11;
using namespace ocds;

namespace {

py::object tick_value(const Tick& t) {
  if (!t) return py::str("END");
  return py::int_(*t);
}

std::map<std::string, ElementSet> by_name(const std::map<PeerId, ElementSet>& m) {
  std::map<std::string, ElementSet> out;
  for (const auto& [k, v] : m) out.emplace(k.name(), v);
  return out;
}

RunReport run_text(const std::string& text, std::optional<std::uint64_t> seed,
                   bool trace, bool strict, bool effectful_filter) {
  auto scenario = parse_scenario(text);
  RunOptions opts;
  opts.seed = seed;
  opts.trace = trace;
  opts.strict = strict;
  opts.effectful_filter = effectful_filter;
  return run(scenario, opts);
}

py::dict report_dict(const RunReport& r) {
  py::list assertions;
  for (const auto& a : r.assertions) {
    py::dict d;
    d["at"] = tick_value(a.at);
    d["kind"] = a.kind;
    d["pass"] = a.pass;
    d["detail"] = a.detail;
    d["line"] = a.line;
    assertions.append(d);
  }
  py::list trace;
  for (const auto& t : r.trace) trace.append(py::make_tuple(tick_value(t.at), t.text));
  py::dict out;
  out["assertions"] = assertions;
  out["final_states"] = by_name(r.final_states);
  out["messages"] = r.messages;
  out["quiescence_tick"] = r.quiescence_tick;
  out["warnings"] = r.warnings;
  out["trace"] = trace;
  out["passed"] = r.all_passed();
  return out;
}

py::dict law_report_dict(const LawReport& r) {
  py::dict d;
  d["ok"] = r.ok;
  d["samples"] = r.samples;
  d["counterexamples"] = r.counterexamples;
  return d;
}

py::dict hom_report_dict(const fsm::HomReport& r) {
  py::list violations;
  for (const auto& sq : r.violations) violations.append(py::make_tuple(sq.state, sq.op));
  py::dict d;
  d["ok"] = r.ok;
  d["violations"] = violations;
  d["squares_checked"] = r.squares_checked;
  return d;
}

template <class Store>
void bind_store(py::module_& m, const char* name) {
  py::class_<Store>(m, name)
      .def(py::init([](const std::vector<Element>& init) {
             Store s;
             for (auto e : normalize(init)) {
               s.apply_effectful(make_operation(OpKind::Insert, e, PeerId("init"), 0, 0));
             }
             return s;
           }),
           py::arg("initial") = std::vector<Element>{})
      .def("apply", &Store::apply_effectful, py::arg("op"),
           "Apply an operation; returns whether the store changed.")
      .def("__contains__", &Store::contains)
      .def("__len__", &Store::size)
      .def("snapshot", &Store::snapshot);
}

}  // namespace

PYBIND11_MODULE(_ocds, m) {
  m.doc() = "Replicated integer sets with predicate lenses.";

  auto base = py::handle(PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", base);
  py::register_exception<PredicateParseError>(m, "PredicateParseError", base);
  py::register_exception<fsm::FsmParseError>(m, "FsmParseError", base);
  py::register_exception<fsm::HomError>(m, "HomError", base);

  py::enum_<OpKind>(m, "OpKind")
      .value("INSERT", OpKind::Insert)
      .value("DELETE", OpKind::Delete)
      .value("IDENTITY", OpKind::Identity);

  py::class_<Operation>(m, "Operation")
      .def_property_readonly("kind", &Operation::kind)
      .def_property_readonly("element", &Operation::element)
      .def_property_readonly("origin", [](const Operation& op) { return op.origin().name(); })
      .def_property_readonly("lamport", &Operation::lamport)
      .def_property_readonly("seq", &Operation::seq)
      .def("__repr__", [](const Operation& op) { return "<Operation " + describe(op) + ">"; });

  m.def(
      "make_operation",
      [](OpKind kind, Element e, const std::string& origin, std::uint64_t lamport,
         std::uint64_t seq) { return make_operation(kind, e, PeerId(origin), lamport, seq); },
      py::arg("kind"), py::arg("element") = 0, py::arg("origin") = "local",
      py::arg("lamport") = 0, py::arg("seq") = 0);

  bind_store<SortedSetStore>(m, "SortedSetStore");
  bind_store<BstSetStore>(m, "BstSetStore");

  py::class_<Predicate>(m, "Predicate")
      .def(py::init<>())
      .def_static("residue", &Predicate::residue)
      .def_static("conj", &Predicate::conj)
      .def_static("disj", &Predicate::disj)
      .def("__call__", &Predicate::operator())
      .def("__str__", &Predicate::to_string)
      .def("__repr__", [](const Predicate& p) { return "<Predicate " + p.to_string() + ">"; })
      .def("__eq__", [](const Predicate& a, const Predicate& b) { return a == b; });
  m.def("parse_predicate", [](const std::string& s) { return parse_predicate(s); });

  py::class_<PredicateLens>(m, "PredicateLens")
      .def(py::init([](const Predicate& offer, const Predicate& accept) {
             return PredicateLens{offer, accept};
           }),
           py::arg("offer"), py::arg("accept"))
      .def(py::init([](const std::string& offer, const std::string& accept) {
             return PredicateLens{parse_predicate(offer), parse_predicate(accept)};
           }),
           py::arg("offer"), py::arg("accept"))
      .def_readonly("offer", &PredicateLens::offer)
      .def_readonly("accept", &PredicateLens::accept);

  m.def("get_view", [](const PredicateLens& l, const std::vector<Element>& d) {
    return get_view(l, normalize(d));
  });
  m.def("put_view", [](const PredicateLens& l, const std::vector<Element>& d,
                       const std::vector<Element>& v) {
    return put_view(l, normalize(d), normalize(v));
  });

  py::class_<LawViolation>(m, "LawViolation")
      .def_property_readonly("law",
                             [](const LawViolation& v) {
                               return v.law == LawViolation::Law::GetPut ? "GetPut" : "PutGet";
                             })
      .def_readonly("source", &LawViolation::source)
      .def_readonly("view", &LawViolation::view)
      .def_readonly("expected", &LawViolation::expected)
      .def_readonly("actual", &LawViolation::actual);

  m.def(
      "check_well_behaved",
      [](const PredicateLens& l,
         const std::vector<std::pair<std::vector<Element>, std::vector<Element>>>& samples) {
        std::vector<LawSample> s;
        for (const auto& [d, v] : samples) s.push_back({normalize(d), normalize(v)});
        return law_report_dict(check_well_behaved(l, s));
      },
      py::arg("lens"), py::arg("samples"),
      "Check GetPut and PutGet on (source, view) pairs.");

  m.def(
      "run_scenario",
      [](const std::string& text, std::optional<std::uint64_t> seed, bool trace, bool strict,
         bool effectful_filter) {
        return report_dict(run_text(text, seed, trace, strict, effectful_filter));
      },
      py::arg("text"), py::arg("seed") = py::none(), py::arg("trace") = false,
      py::arg("strict") = false, py::arg("effectful_filter") = true,
      "Parse and run a scenario; returns assertions, final states and counters.");

  m.def(
      "render_run",
      [](const std::string& text, std::optional<std::uint64_t> seed, bool trace,
         bool effectful_filter, const std::string& format) {
        auto f = format == "tsv" ? ReportFormat::Tsv : ReportFormat::Text;
        return render_report(run_text(text, seed, trace, false, effectful_filter), f);
      },
      py::arg("text"), py::arg("seed") = py::none(), py::arg("trace") = false,
      py::arg("effectful_filter") = true, py::arg("format") = "text");

  m.def(
      "check_lenses",
      [](const std::string& text, std::uint64_t seed, std::size_t samples) {
        auto summary = check_scenario_lenses(parse_scenario(text), seed, samples);
        py::dict lenses;
        for (const auto& l : summary.lenses) lenses[py::str(l.peer.name())] = law_report_dict(l.laws);
        py::dict d;
        d["ok"] = summary.ok();
        d["lenses"] = lenses;
        d["asymmetric_links"] = summary.asymmetric_links;
        return d;
      },
      py::arg("text"), py::arg("seed") = 0, py::arg("samples") = 1000);

  m.def(
      "check_fsm_document",
      [](const std::string& text) {
        auto doc = fsm::parse_fsm_document(text);
        py::dict out;
        for (const auto& h : doc.homs) {
          out[py::str(h.name)] = hom_report_dict(fsm::check_homomorphism(
              doc.machines.at(h.source), doc.machines.at(h.target), h.map));
        }
        return out;
      },
      py::arg("text"), "Check every homomorphism declared in an FSM document.");

  m.def(
      "door_light_example",
      [](std::optional<std::map<std::string, std::string>> op_overrides) {
        auto ex = fsm::door_light_example();
        auto h = ex.door_to_light;
        if (op_overrides) {
          for (const auto& [k, v] : *op_overrides) h.op_map[k] = v;
        }
        return hom_report_dict(fsm::check_homomorphism(ex.door, ex.light, h));
      },
      py::arg("op_overrides") = py::none(),
      "Check the door-to-light map, optionally with some op images replaced.");
}
