#include "ocds/report.hpp"

#include <random>
#include <sstream>

namespace ocds {

namespace {

std::string tick_text(const Tick& t) {
  return t ? std::to_string(*t) : std::string("END");
}

std::string csv(const ElementSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

const char* law_name(LawViolation::Law law) {
  return law == LawViolation::Law::GetPut ? "GetPut" : "PutGet";
}

}  // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& a : report.assertions) passed += a.pass ? 1 : 0;

  if (format == ReportFormat::Tsv) {
    for (const auto& w : report.warnings) os << "warning\t" << w << '\n';
    for (const auto& t : report.trace) {
      os << "trace\t" << tick_text(t.at) << '\t' << t.text << '\n';
    }
    for (const auto& a : report.assertions) {
      os << "assert\t" << tick_text(a.at) << '\t' << a.kind << '\t'
         << (a.pass ? "PASS" : "FAIL") << '\t' << a.detail << '\n';
    }
    for (const auto& [peer, elems] : report.final_states) {
      os << "final\t" << peer << '\t' << csv(elems) << '\n';
    }
    os << "messages\t" << report.messages << '\n';
    os << "quiescent\t" << report.quiescence_tick << '\n';
    return os.str();
  }

  for (const auto& w : report.warnings) os << "warning: " << w << '\n';
  if (!report.trace.empty()) {
    os << "trace:\n";
    for (const auto& t : report.trace) {
      os << "  [" << tick_text(t.at) << "] " << t.text << '\n';
    }
  }
  os << "assertions:\n";
  for (const auto& a : report.assertions) {
    os << "  " << (a.pass ? "PASS" : "FAIL") << "  at " << tick_text(a.at)
       << "  " << a.kind << "  " << a.detail;
    if (a.line) os << "  (line " << a.line << ")";
    os << '\n';
  }
  os << "final states:\n";
  for (const auto& [peer, elems] : report.final_states) {
    os << "  " << peer << " = " << format_set(elems) << '\n';
  }
  os << "messages: " << report.messages << '\n';
  os << "quiescent at tick: " << report.quiescence_tick << '\n';
  os << "result: " << (passed == report.assertions.size() ? "PASS" : "FAIL")
     << " (" << passed << "/" << report.assertions.size()
     << " assertions)\n";
  return os.str();
}

bool LensCheckSummary::ok() const {
  for (const auto& l : lenses) {
    if (!l.laws.ok) return false;
  }
  return true;
}

std::vector<LawSample> random_law_samples(const PredicateLens& lens,
                                          std::uint64_t seed,
                                          std::size_t count, Element lo,
                                          Element hi) {
  std::mt19937_64 rng(seed);
  auto draw_elem = [&] {
    return lo + static_cast<Element>(rng() %
                                     static_cast<std::uint64_t>(hi - lo + 1));
  };
  std::vector<LawSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    LawSample s;
    std::size_t n = rng() % 32;
    for (std::size_t k = 0; k < n; ++k) s.source.push_back(draw_elem());
    std::size_t m = rng() % 32;
    for (std::size_t k = 0; k < m; ++k) {
      Element x = draw_elem();
      if (lens.offer(x)) s.view.push_back(x);
    }
    s.source = normalize(std::move(s.source));
    s.view = normalize(std::move(s.view));
    out.push_back(std::move(s));
  }
  return out;
}

LensCheckSummary check_scenario_lenses(const Scenario& scenario,
                                       std::uint64_t seed,
                                       std::size_t samples, Element lo,
                                       Element hi) {
  LensCheckSummary summary;
  std::uint64_t peer_seed = seed;
  for (const auto& p : scenario.peers) {
    auto batch = random_law_samples(p.lens, peer_seed++, samples, lo, hi);
    summary.lenses.push_back({p.id, p.lens, check_well_behaved(p.lens, batch)});
  }
  for (const auto& l : scenario.links) {
    if (!link_symmetric(scenario.find_peer(l.a)->lens,
                        scenario.find_peer(l.b)->lens, kSymmetryUniverseLo,
                        kSymmetryUniverseHi)) {
      summary.asymmetric_links.push_back(l.a.name() + " " + l.b.name());
    }
  }
  return summary;
}

std::string render_lens_check(const LensCheckSummary& summary,
                              ReportFormat format) {
  std::ostringstream os;
  const char* sep = format == ReportFormat::Tsv ? "\t" : " ";
  for (const auto& r : summary.lenses) {
    std::size_t getput = 0, putget = 0;
    for (const auto& v : r.laws.counterexamples) {
      (v.law == LawViolation::Law::GetPut ? getput : putget) += 1;
    }
    os << "lens" << sep << r.peer << sep << (r.laws.ok ? "PASS" : "FAIL")
       << sep << "samples=" << r.laws.samples << sep << "getput_failures="
       << getput << sep << "putget_failures=" << putget << sep << "offer=\""
       << r.lens.offer.to_string() << "\"" << sep << "accept=\""
       << r.lens.accept.to_string() << "\"\n";
    std::size_t shown = 0;
    for (const auto& v : r.laws.counterexamples) {
      if (shown++ == 10) {
        os << "counterexample" << sep << r.peer << sep << "... "
           << r.laws.counterexamples.size() - 10 << " more\n";
        break;
      }
      os << "counterexample" << sep << r.peer << sep << law_name(v.law) << sep
         << "d=" << format_set(v.source) << sep << "v=" << format_set(v.view)
         << sep << "expected=" << format_set(v.expected) << sep
         << "got=" << format_set(v.actual) << '\n';
    }
  }
  for (const auto& l : summary.asymmetric_links) {
    os << "warning" << sep << "asymmetric link " << l << '\n';
  }
  os << "result" << sep << (summary.ok() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace ocds
