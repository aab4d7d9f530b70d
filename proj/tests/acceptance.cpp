// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "campaign.hpp"
#include "cli.hpp"
#include "ocds/agent.hpp"
#include "ocds/fsm.hpp"
#include "ocds/report.hpp"
#include "ocds/simulator.hpp"
#include "test_util.hpp"

namespace {

using namespace ocds;
using ocds::testing::read_scenario_file;
using ocds::testing::scenario_path;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
  }
  Outcome done(std::string summary) {
    if (out_.pass) out_.detail = std::move(summary);
    return out_;
  }

 private:
  Outcome out_;
};

struct CliRun {
  int code;
  std::string out;
};

CliRun cli_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::main(args, out, err);
  return {code, out.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

// 1. Story 1 reaches the expected end state exactly.
Outcome story_one() {
  Check c;
  auto r = cli_run({"run", scenario_path("story1.ocds"), "--format", "tsv"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  c.expect(has_line(r.out, "final\tP\t1,2,3,4,6"), "P final state");
  c.expect(has_line(r.out, "final\tQ\t2,3,6,9"), "Q final state");
  c.expect(has_line(r.out, "assert\tEND\tshared\tPASS\tP={6} Q={6} expected {6}"),
           "shared view {6}");
  c.expect(has_line(r.out, "assert\tEND\tconsistent\tPASS\tP={6} Q={6}"),
           "consistent");
  return c.done("P={1,2,3,4,6} Q={2,3,6,9} D={6} consistent");
}

// 2. Story 2 with the effectful filter: Q's delete 6 is dropped.
Outcome story_two_filtered() {
  Check c;
  auto r = cli_run({"run", scenario_path("story2.ocds"), "--format", "tsv", "--trace"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  c.expect(has_line(r.out, "final\tP\t1,2,3,4,6"), "P final state");
  c.expect(has_line(r.out, "final\tQ\t2,3,4,6,9"), "Q final state");
  c.expect(has_line(r.out, "assert\tEND\tconsistent\tPASS\tP={6} Q={6}"),
           "consistent");
  c.expect(has_line(r.out, "trace\t2\tQ local delete 6 discarded (non-effectful)"),
           "trace lacks the non-effectful discard");
  return c.done("P={1,2,3,4,6} Q={2,3,4,6,9} consistent; delete discarded");
}

// 3. Story 2 without the filter diverges.
Outcome story_two_divergence() {
  Check c;
  auto r = cli_run({"run", scenario_path("story2.ocds"), "--format", "tsv",
                    "--disable-effectful-filter"});
  c.expect(r.code == 1, "exit code " + std::to_string(r.code));
  c.expect(has_line(r.out, "final\tP\t1,2,3,4"), "P final state");
  c.expect(r.out.find("final\tQ\t2,3,4,6,9\n") != std::string::npos,
           "Q should contain 6");
  c.expect(has_line(r.out, "assert\tEND\tconsistent\tFAIL\tP={} Q={6}"),
           "consistency assertion should fail");
  return c.done("P={1,2,3,4} Q={2,3,4,6,9} consistency FAIL as expected");
}

// 4. Round-tripping laws on the doubles/triples lenses.
Outcome lens_laws() {
  Check c;
  auto r = cli_run({"check-lens", scenario_path("story1.ocds"), "--samples", "1000",
                    "--format", "tsv"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  auto s = parse_scenario(read_scenario_file("story1.ocds"));
  std::size_t total = 0;
  for (const auto& p : s.peers) {
    auto samples = random_law_samples(p.lens, 1234, 1000, 0, 999);
    auto rep = check_well_behaved(p.lens, samples);
    total += rep.samples;
    c.expect(rep.ok && rep.samples >= 1000,
             p.id.name() + ": " + std::to_string(rep.counterexamples.size()) +
                 " counterexamples");
  }
  c.expect(r.out.find("counterexample") == std::string::npos,
           "cli reported counterexamples");
  return c.done(std::to_string(total) + " samples, 0 counterexamples");
}

// 5. Randomized convergence campaign.
Outcome convergence_campaign() {
  using ocds::testing::Topology;
  Check c;
  std::size_t n = 0;
  std::map<std::size_t, std::size_t> by_peers;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    auto topo = static_cast<Topology>(seed % 3);
    auto s = ocds::testing::random_scenario(seed, topo);
    auto chk = ocds::testing::check_random_scenario(s, topo);
    c.expect(chk.ok, std::string(ocds::testing::to_string(topo)) + " seed " +
                         std::to_string(seed) + ": " + chk.failure);
    ++n;
    ++by_peers[s.peers.size()];
  }
  std::ostringstream os;
  os << n << " scenarios (";
  for (auto [k, v] : by_peers) os << v << "x" << k << "p ";
  os << ") consistent and oracle-equal";
  return c.done(os.str());
}

// 6. Delivery-order invariance at one agent.
Outcome delivery_order() {
  Check c;
  std::mt19937_64 rng(606);
  const PeerId a("A"), b("B"), me("R");
  std::size_t sets = 0;
  for (int trial = 0; trial < 200; ++trial) {
    ElementSet init;
    for (Element e = 0; e < 8; ++e) {
      if (rng() % 2) init.push_back(e);
    }
    struct Stamped {
      PeerId from;
      Operation op;
    };
    std::vector<Stamped> ops;
    std::map<PeerId, std::uint64_t> lamport, seq;
    std::size_t n = 1 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) {
      const PeerId& from = rng() % 2 ? a : b;
      lamport[from] += 1 + rng() % 4;
      ops.push_back({from, make_operation(rng() % 2 ? OpKind::Insert : OpKind::Delete,
                                          static_cast<Element>(rng() % 8), from,
                                          lamport[from], seq[from]++)});
    }
    std::optional<ElementSet> first;
    for (int perm = 0; perm < 20; ++perm) {
      std::vector<std::size_t> order(ops.size());
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng() % i]);
      }
      Agent r(me, make_store(trial % 2 ? StoreKind::Bst : StoreKind::Sorted, init));
      r.add_partner(a, {});
      r.add_partner(b, {});
      for (auto i : order) r.receive_remote(Message{ops[i].from, me, ops[i].op});
      auto snap = r.store().snapshot();
      if (!first) first = snap;
      c.expect(snap == *first, "trial " + std::to_string(trial) + " permutation " +
                                   std::to_string(perm) + " differs");
    }
    ++sets;
  }
  return c.done(std::to_string(sets) + " op sets x 20 permutations identical");
}

// 7. Sorted and BST stores agree on every replayed sequence.
Outcome store_homomorphism() {
  Check c;
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 1000; ++trial) {
    SortedSetStore sorted;
    BstSetStore bst;
    std::size_t len = rng() % 101;
    for (std::size_t i = 0; i < len; ++i) {
      auto op = make_operation(rng() % 2 ? OpKind::Insert : OpKind::Delete,
                               static_cast<Element>(rng() % 64) - 32, PeerId("T"), i, i);
      bool e1 = sorted.apply_effectful(op);
      bool e2 = bst.apply_effectful(op);
      c.expect(e1 == e2, "effectfulness differs");
    }
    c.expect(stores_equivalent(sorted, bst) && bst.valid_bst(),
             "trial " + std::to_string(trial) + " snapshots differ");
  }
  return c.done("1000 sequences (len <= 100) equal");
}

// 8. Door/light homomorphism and the corrupted map.
Outcome door_light() {
  Check c;
  auto ok = cli_run({"check-hom", scenario_path("doorlight.fsm"), "--format", "tsv"});
  c.expect(ok.code == 0, "doorlight.fsm exit " + std::to_string(ok.code));
  c.expect(ok.out.find("hom\th\tdoor->light\tPASS\tsquares=5\tviolations=0") !=
               std::string::npos,
           "forward map not validated");
  auto bad = cli_run({"check-hom", scenario_path("doorlight_corrupt.fsm"), "--format", "tsv"});
  c.expect(bad.code == 1, "corrupt exit " + std::to_string(bad.code));
  c.expect(bad.out.find("violations=1") != std::string::npos, "expected one violation");
  c.expect(has_line(bad.out, "violation\th\t({DoorClosed}, RingBell)"),
           "violation square");

  // Exhaustive 2 states x 3 ops in-process as well.
  auto ex = fsm::door_light_example();
  auto h = ex.door_to_light;
  c.expect(fsm::check_homomorphism(ex.door, ex.light, h).ok, "library check");
  h.op_map["RingBell"] = "On";
  auto r = fsm::check_homomorphism(ex.door, ex.light, h);
  c.expect(r.violations == std::vector<fsm::Square>{{"DoorClosed", "RingBell"}},
           "library violation list");
  return c.done("printed map valid; RingBell->On rejected at ({DoorClosed}, RingBell)");
}

// 9. Payload is operations: 1000-element stores, 5 ops.
Outcome message_size() {
  Check c;
  std::ostringstream text;
  text << "peer P store=sorted offer=\"x % 2 == 0\" accept=\"x % 2 == 0\"\n"
       << "peer Q store=bst offer=\"x % 2 == 0\" accept=\"x % 2 == 0\"\n"
       << "peer R store=sorted offer=\"true\" accept=\"true\"\n"
       << "link P Q\nlink Q R latency=2\n";
  std::mt19937_64 rng(909);
  std::vector<Element> base(1000);
  std::iota(base.begin(), base.end(), 0);
  for (std::size_t i = base.size(); i > 1; --i) std::swap(base[i - 1], base[rng() % i]);
  for (const char* peer : {"P", "Q", "R"}) {
    text << "init " << peer << " " << format_set(normalize(base)) << "\n";
  }
  text << "at 1 op P insert 2000\n"
       << "at 1 op Q delete 10\n"
       << "at 2 op R insert 3001\n"
       << "at 3 op P delete 500\n"
       << "at 4 op R delete 998\n"
       << "at END assert-consistent P Q\nat END assert-consistent Q R\n";
  auto s = parse_scenario(text.str());
  auto rep = run(s);
  const std::uint64_t bound = 5 * s.links.size();
  c.expect(rep.all_passed(), "assertions failed");
  c.expect(rep.messages <= bound, std::to_string(rep.messages) + " messages > " +
                                      std::to_string(bound));
  return c.done(std::to_string(rep.messages) + " messages <= " + std::to_string(bound) +
                " (5 ops x 2 links, 1000-element stores)");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 story-1 exact reproduction", story_one},
      {"2 story-2 effectful filtering", story_two_filtered},
      {"3 story-2 divergence without filter", story_two_divergence},
      {"4 lens round-tripping laws", lens_laws},
      {"5 randomized convergence campaign", convergence_campaign},
      {"6 delivery-order invariance", delivery_order},
      {"7 store homomorphism", store_homomorphism},
      {"8 door/light homomorphism", door_light},
      {"9 operation-sized messages", message_size},
  };
  auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": "
              << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << "(" << std::size(criteria) - failed
            << "/" << std::size(criteria) << ", " << secs << " s)" << std::endl;
  return failed ? 1 : 0;
}
