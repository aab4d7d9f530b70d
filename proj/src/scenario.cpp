#include "ocds/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace ocds {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
  bool quoted = false;
};

std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    std::size_t start = i;
    std::string text;
    bool quoted = false;
    if (c == '{') {
      auto close = line.find('}', i);
      if (close == std::string_view::npos) {
        throw ScenarioError("unterminated '{'", lineno);
      }
      for (std::size_t j = i; j <= close; ++j) {
        if (!std::isspace(static_cast<unsigned char>(line[j]))) text += line[j];
      }
      i = close + 1;
    } else {
      // A word, possibly key="quoted value".
      while (i < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[i]))) {
        if (line[i] == '"') {
          quoted = true;
          auto close = line.find('"', i + 1);
          if (close == std::string_view::npos) {
            throw ScenarioError("unterminated string", lineno);
          }
          text.append(line.substr(i + 1, close - i - 1));
          i = close + 1;
        } else {
          text += line[i++];
        }
      }
    }
    out.push_back({std::move(text), start + 1, quoted});
  }
  return out;
}

std::int64_t parse_int(std::string_view s, std::size_t lineno,
                       const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ScenarioError(std::string("expected ") + what + ", got '" +
                            std::string(s) + "'",
                        lineno);
  }
  return v;
}

ElementSet parse_set(const Token& t, std::size_t lineno) {
  if (t.text.size() < 2 || t.text.front() != '{' || t.text.back() != '}') {
    throw ScenarioError("expected element set '{e1,e2,...}', got '" + t.text +
                            "'",
                        lineno);
  }
  ElementSet out;
  std::string_view body(t.text);
  body = body.substr(1, body.size() - 2);
  while (!body.empty()) {
    auto comma = body.find(',');
    auto item = body.substr(0, comma);
    out.push_back(parse_int(item, lineno, "integer element"));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
    if (body.empty()) throw ScenarioError("trailing ',' in set", lineno);
  }
  return normalize(std::move(out));
}

PeerId parse_peer_id(const Token& t, std::size_t lineno) {
  try {
    return PeerId(t.text);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what(), lineno);
  }
}

Predicate parse_pred_attr(const std::string& text, std::size_t lineno) {
  try {
    return parse_predicate(text);
  } catch (const PredicateParseError& e) {
    throw ScenarioError(e.what(), lineno);
  }
}

void expect_arity(const std::vector<Token>& toks, std::size_t n,
                  std::size_t lineno, const char* form) {
  if (toks.size() != n) {
    throw ScenarioError(std::string("expected: ") + form, lineno);
  }
}

PeerDecl parse_peer(const std::vector<Token>& toks, std::size_t lineno) {
  if (toks.size() < 2) {
    throw ScenarioError(
        "expected: peer <id> store=(sorted|bst) offer=\"<pred>\" "
        "accept=\"<pred>\"",
        lineno);
  }
  PeerDecl p{parse_peer_id(toks[1], lineno), StoreKind::Sorted, {}, {}};
  std::set<std::string> seen;
  for (std::size_t i = 2; i < toks.size(); ++i) {
    const auto& text = toks[i].text;
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ScenarioError("expected key=value, got '" + text + "'", lineno);
    }
    std::string key = text.substr(0, eq);
    std::string value = text.substr(eq + 1);
    if (!seen.insert(key).second) {
      throw ScenarioError("duplicate attribute '" + key + "'", lineno);
    }
    if (key == "store") {
      if (value == "sorted") {
        p.store = StoreKind::Sorted;
      } else if (value == "bst") {
        p.store = StoreKind::Bst;
      } else {
        throw ScenarioError("store must be 'sorted' or 'bst'", lineno);
      }
    } else if (key == "offer") {
      p.lens.offer = parse_pred_attr(value, lineno);
    } else if (key == "accept") {
      p.lens.accept = parse_pred_attr(value, lineno);
    } else {
      throw ScenarioError("unknown peer attribute '" + key + "'", lineno);
    }
  }
  return p;
}

SimEvent parse_at(const std::vector<Token>& toks, std::size_t lineno) {
  if (toks.size() < 3) {
    throw ScenarioError("expected: at <tick|END> <action> ...", lineno);
  }
  SimEvent ev;
  ev.line = lineno;
  if (toks[1].text != "END") {
    auto t = parse_int(toks[1].text, lineno, "tick or END");
    if (t < 0) throw ScenarioError("tick must be nonnegative", lineno);
    ev.at = static_cast<std::uint64_t>(t);
  }
  const std::string& verb = toks[2].text;
  if (verb == "op") {
    expect_arity(toks, 6, lineno, "at <tick> op <id> (insert|delete) <int>");
    OpKind kind;
    if (toks[4].text == "insert") {
      kind = OpKind::Insert;
    } else if (toks[4].text == "delete") {
      kind = OpKind::Delete;
    } else {
      throw ScenarioError("op kind must be insert or delete", lineno);
    }
    ev.action = OpEvent{parse_peer_id(toks[3], lineno), kind,
                        parse_int(toks[5].text, lineno, "integer element")};
  } else if (verb == "partition") {
    expect_arity(toks, 5, lineno, "at <tick> partition <id> <id>");
    ev.action = PartitionEvent{parse_peer_id(toks[3], lineno),
                               parse_peer_id(toks[4], lineno)};
  } else if (verb == "heal") {
    expect_arity(toks, 5, lineno, "at <tick> heal <id> <id>");
    ev.action = HealEvent{parse_peer_id(toks[3], lineno),
                          parse_peer_id(toks[4], lineno)};
  } else if (verb == "assert-consistent") {
    expect_arity(toks, 5, lineno, "at <tick> assert-consistent <id> <id>");
    ev.action = AssertConsistent{parse_peer_id(toks[3], lineno),
                                 parse_peer_id(toks[4], lineno)};
  } else if (verb == "assert-state") {
    expect_arity(toks, 5, lineno, "at <tick> assert-state <id> {e1,...}");
    ev.action = AssertState{parse_peer_id(toks[3], lineno),
                            parse_set(toks[4], lineno)};
  } else if (verb == "assert-shared") {
    expect_arity(toks, 6, lineno,
                 "at <tick> assert-shared <id> <id> {e1,...}");
    ev.action = AssertShared{parse_peer_id(toks[3], lineno),
                             parse_peer_id(toks[4], lineno),
                             parse_set(toks[5], lineno)};
  } else {
    throw ScenarioError("unknown action '" + verb + "'", lineno);
  }
  return ev;
}

std::string tick_text(const Tick& t) {
  return t ? std::to_string(*t) : std::string("END");
}

}  // namespace

bool is_assertion(const SimAction& a) {
  return std::holds_alternative<AssertConsistent>(a) ||
         std::holds_alternative<AssertState>(a) ||
         std::holds_alternative<AssertShared>(a);
}

const PeerDecl* Scenario::find_peer(const PeerId& id) const {
  auto it = std::find_if(peers.begin(), peers.end(),
                         [&](const PeerDecl& p) { return p.id == id; });
  return it == peers.end() ? nullptr : &*it;
}

std::optional<std::size_t> Scenario::find_link(const PeerId& a,
                                               const PeerId& b) const {
  for (std::size_t i = 0; i < links.size(); ++i) {
    if ((links[i].a == a && links[i].b == b) ||
        (links[i].a == b && links[i].b == a)) {
      return i;
    }
  }
  return std::nullopt;
}

std::string format_set(std::span<const Element> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::map<PeerId, std::size_t> init_lines;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto toks = tokenize(line, lineno);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    if (kw == "peer") {
      PeerDecl p = parse_peer(toks, lineno);
      if (s.find_peer(p.id)) {
        throw ScenarioError("duplicate peer '" + p.id.name() + "'", lineno);
      }
      s.peers.push_back(std::move(p));
    } else if (kw == "link") {
      if (toks.size() != 3 && toks.size() != 4) {
        throw ScenarioError("expected: link <id> <id> [latency=<int>]",
                            lineno);
      }
      LinkDecl l{parse_peer_id(toks[1], lineno), parse_peer_id(toks[2], lineno),
                 1};
      if (toks.size() == 4) {
        const auto& attr = toks[3].text;
        if (attr.rfind("latency=", 0) != 0) {
          throw ScenarioError("expected latency=<int>", lineno);
        }
        auto lat = parse_int(std::string_view(attr).substr(8), lineno,
                             "latency");
        if (lat <= 0) throw ScenarioError("latency must be positive", lineno);
        l.latency = static_cast<std::uint64_t>(lat);
      }
      for (const PeerId* end : {&l.a, &l.b}) {
        if (!s.find_peer(*end)) {
          throw ScenarioError("link references undeclared peer '" +
                                  end->name() + "'",
                              lineno);
        }
      }
      if (l.a == l.b) throw ScenarioError("self-link", lineno);
      if (s.find_link(l.a, l.b)) {
        throw ScenarioError("duplicate link " + l.a.name() + " " + l.b.name(),
                            lineno);
      }
      s.links.push_back(std::move(l));
    } else if (kw == "init") {
      expect_arity(toks, 3, lineno, "init <id> {e1,e2,...}");
      PeerId id = parse_peer_id(toks[1], lineno);
      if (!s.find_peer(id)) {
        throw ScenarioError("init of undeclared peer '" + id.name() + "'",
                            lineno);
      }
      if (!init_lines.emplace(id, lineno).second) {
        throw ScenarioError("duplicate init for '" + id.name() + "'", lineno);
      }
      for (auto& p : s.peers) {
        if (p.id == id) p.initial = parse_set(toks[2], lineno);
      }
    } else if (kw == "seed") {
      expect_arity(toks, 2, lineno, "seed <int>");
      auto v = parse_int(toks[1].text, lineno, "seed");
      if (v < 0) throw ScenarioError("seed must be nonnegative", lineno);
      s.seed = static_cast<std::uint64_t>(v);
    } else if (kw == "at") {
      s.events.push_back(parse_at(toks, lineno));
    } else {
      throw ScenarioError("unknown statement '" + kw + "'", lineno);
    }
  }
  validate_scenario(s, false);
  return s;
}

std::vector<std::string> validate_scenario(const Scenario& s, bool strict) {
  std::set<PeerId> ids;
  for (const auto& p : s.peers) {
    if (!ids.insert(p.id).second) {
      throw ScenarioError("duplicate peer '" + p.id.name() + "'", 0);
    }
  }
  for (const auto& l : s.links) {
    if (!ids.contains(l.a) || !ids.contains(l.b)) {
      throw ScenarioError("link references undeclared peer", 0);
    }
    if (l.latency == 0) throw ScenarioError("latency must be positive", 0);
  }
  auto need_peer = [&](const PeerId& p, std::size_t line) {
    if (!ids.contains(p)) {
      throw ScenarioError("undeclared peer '" + p.name() + "'", line);
    }
  };
  auto need_link = [&](const PeerId& a, const PeerId& b, std::size_t line) {
    need_peer(a, line);
    need_peer(b, line);
    if (!s.find_link(a, b)) {
      throw ScenarioError("no link between " + a.name() + " and " + b.name(),
                          line);
    }
  };
  for (const auto& ev : s.events) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, OpEvent>) {
            need_peer(a.peer, ev.line);
          } else if constexpr (std::is_same_v<T, AssertState>) {
            need_peer(a.peer, ev.line);
          } else {
            need_link(a.a, a.b, ev.line);
          }
        },
        ev.action);
  }

  std::vector<std::string> warnings;
  for (const auto& l : s.links) {
    const auto& la = s.find_peer(l.a)->lens;
    const auto& lb = s.find_peer(l.b)->lens;
    if (!link_symmetric(la, lb, kSymmetryUniverseLo, kSymmetryUniverseHi)) {
      std::string msg = "link " + l.a.name() + " " + l.b.name() +
                        " is asymmetric: the elements shared in each "
                        "direction differ; convergence is not guaranteed";
      if (strict) throw ScenarioError(msg, 0);
      warnings.push_back(std::move(msg));
    }
  }
  return warnings;
}

std::string to_text(const Scenario& s) {
  std::ostringstream os;
  if (s.seed != 0) os << "seed " << s.seed << '\n';
  for (const auto& p : s.peers) {
    os << "peer " << p.id << " store="
       << (p.store == StoreKind::Bst ? "bst" : "sorted") << " offer=\""
       << p.lens.offer.to_string() << "\" accept=\""
       << p.lens.accept.to_string() << "\"\n";
  }
  for (const auto& l : s.links) {
    os << "link " << l.a << ' ' << l.b;
    if (l.latency != 1) os << " latency=" << l.latency;
    os << '\n';
  }
  for (const auto& p : s.peers) {
    if (!p.initial.empty()) {
      os << "init " << p.id << ' ' << format_set(p.initial) << '\n';
    }
  }
  for (const auto& ev : s.events) {
    os << "at " << tick_text(ev.at) << ' ';
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, OpEvent>) {
            os << "op " << a.peer << ' ' << to_string(a.kind) << ' '
               << a.element;
          } else if constexpr (std::is_same_v<T, PartitionEvent>) {
            os << "partition " << a.a << ' ' << a.b;
          } else if constexpr (std::is_same_v<T, HealEvent>) {
            os << "heal " << a.a << ' ' << a.b;
          } else if constexpr (std::is_same_v<T, AssertConsistent>) {
            os << "assert-consistent " << a.a << ' ' << a.b;
          } else if constexpr (std::is_same_v<T, AssertState>) {
            os << "assert-state " << a.peer << ' ' << format_set(a.expected);
          } else {
            os << "assert-shared " << a.a << ' ' << a.b << ' '
               << format_set(a.expected);
          }
        },
        ev.action);
    os << '\n';
  }
  return os.str();
}

}  // namespace ocds
