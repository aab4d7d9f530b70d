#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocds/lens.hpp"
#include "ocds/scenario.hpp"
#include "ocds/simulator.hpp"

namespace ocds {

enum class ReportFormat { Text, Tsv };

/// tsv rows: `assert <tick> <kind> <PASS|FAIL> <detail>`, then
/// `final <peer> <e1,e2,...>`, then summary rows. Fields are tab-separated.
std::string render_report(const RunReport& report, ReportFormat format);

struct LensCheckResult {
  PeerId peer;
  PredicateLens lens;
  LawReport laws;
};

struct LensCheckSummary {
  std::vector<LensCheckResult> lenses;
  std::vector<std::string> asymmetric_links;
  bool ok() const;
};

/// Samples (source, view) pairs over [lo, hi] and checks every peer lens
/// in `scenario`. Views are drawn from the offer range.
LensCheckSummary check_scenario_lenses(const Scenario& scenario,
                                       std::uint64_t seed,
                                       std::size_t samples = 1000,
                                       Element lo = 0, Element hi = 999);

std::vector<LawSample> random_law_samples(const PredicateLens& lens,
                                          std::uint64_t seed,
                                          std::size_t count, Element lo,
                                          Element hi);

std::string render_lens_check(const LensCheckSummary& summary,
                              ReportFormat format);

}  // namespace ocds
