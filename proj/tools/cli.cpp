#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "ocds/fsm.hpp"
#include "ocds/report.hpp"
#include "ocds/scenario.hpp"
#include "ocds/simulator.hpp"

namespace ocds::cli {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const ScenarioError& e) {
    throw InputError(path + ": " + e.what());
  }
}

ReportFormat parse_format(const std::string& f) {
  return f == "tsv" ? ReportFormat::Tsv : ReportFormat::Text;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

int cmd_run(const std::string& path, const RunOptions& opts,
            ReportFormat format, std::ostream& out, std::ostream& err) {
  Scenario s = load_scenario(path);
  RunReport report;
  try {
    report = run(s, opts);
  } catch (const ScenarioError& e) {
    throw InputError(path + ": " + e.what());
  }
  for (const auto& w : report.warnings) err << path << ": warning: " << w << '\n';
  out << render_report(report, format);
  for (const auto& a : report.assertions) {
    if (!a.pass) {
      err << path << ":" << a.line << ": assertion failed: " << a.kind << ' '
          << a.detail << '\n';
    }
  }
  return report.all_passed() ? kExitOk : kExitFailed;
}

int cmd_check_lens(const std::string& path, std::uint64_t seed,
                   std::size_t samples, ReportFormat format,
                   std::ostream& out) {
  Scenario s = load_scenario(path);
  LensCheckSummary summary = check_scenario_lenses(s, seed, samples);
  out << render_lens_check(summary, format);
  return summary.ok() ? kExitOk : kExitFailed;
}

int cmd_check_hom(const std::string& path, ReportFormat format,
                  std::ostream& out, std::ostream& err) {
  fsm::FsmDocument doc;
  try {
    doc = fsm::parse_fsm_document(read_file(path));
  } catch (const fsm::FsmParseError& e) {
    throw InputError(path + ": " + e.what());
  }
  if (doc.homs.empty()) throw InputError(path + ": no hom declared");
  const char* sep = format == ReportFormat::Tsv ? "\t" : " ";
  bool all_ok = true;
  for (const auto& h : doc.homs) {
    fsm::HomReport r;
    try {
      r = fsm::check_homomorphism(doc.machines.at(h.source),
                                  doc.machines.at(h.target), h.map);
    } catch (const fsm::HomError& e) {
      throw InputError(path + ": hom " + h.name + ": " + e.what());
    }
    all_ok = all_ok && r.ok;
    out << "hom" << sep << h.name << sep << h.source << "->" << h.target << sep
        << (r.ok ? "PASS" : "FAIL") << sep << "squares=" << r.squares_checked
        << sep << "violations=" << r.violations.size() << '\n';
    for (const auto& v : r.violations) {
      out << "violation" << sep << h.name << sep << "({" << v.state << "}, "
          << v.op << ")\n";
      err << path << ": hom " << h.name << " fails at ({" << v.state << "}, "
          << v.op << ")\n";
    }
  }
  out << "result" << sep << (all_ok ? "PASS" : "FAIL") << '\n';
  return all_ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Operation-based collaborative data sharing: simulator and "
               "law checkers",
               "ocds"};
  app.require_subcommand(1);

  std::string file;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool trace = false;
  bool strict = false;
  bool no_filter = false;
  std::string format = "text";
  std::size_t samples = 1000;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("file", file, "Scenario file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Delivery-order seed");
  run_cmd->add_flag("--trace", trace, "Include an event trace");
  run_cmd->add_flag("--strict", strict, "Treat asymmetric links as errors");
  run_cmd->add_flag("--disable-effectful-filter", no_filter,
                    "Apply and propagate every local op (divergence demo)");
  run_cmd->add_option("--format", format)->check(
      CLI::IsMember({"text", "tsv"}));

  auto* lens_cmd =
      app.add_subcommand("check-lens", "Fuzz the round-tripping laws of every "
                                       "peer lens in a scenario file");
  lens_cmd->add_option("file", file, "Scenario file")->required();
  lens_cmd->add_option("--seed", seed, "Sampling seed");
  lens_cmd->add_option("--samples", samples, "Samples per lens")
      ->check(CLI::PositiveNumber);
  lens_cmd->add_option("--format", format)->check(
      CLI::IsMember({"text", "tsv"}));

  auto* hom_cmd =
      app.add_subcommand("check-hom", "Check FSM homomorphisms in a file");
  hom_cmd->add_option("file", file, "FSM description")->required();
  hom_cmd->add_option("--format", format)->check(
      CLI::IsMember({"text", "tsv"}));

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ocds: " << e.what() << '\n';
    return kExitUsage;
  }
  seed_given = seed_opt->count() > 0;

  try {
    if (run_cmd->parsed()) {
      RunOptions opts;
      if (seed_given) opts.seed = seed;
      opts.trace = trace;
      opts.strict = strict;
      opts.effectful_filter = !no_filter;
      return cmd_run(file, opts, parse_format(format), out, err);
    }
    if (lens_cmd->parsed()) {
      return cmd_check_lens(file, seed, samples, parse_format(format), out);
    }
    return cmd_check_hom(file, parse_format(format), out, err);
  } catch (const InputError& e) {
    err << "ocds: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace ocds::cli
