#include "ocds/lens.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace ocds {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::int64_t nonneg_mod(std::int64_t e, std::int64_t k) {
  std::int64_t r = e % k;
  return r < 0 ? r + k : r;
}

void render(const Predicate& p, std::ostringstream& os, bool nested) {
  std::visit(overloaded{
                 [&](const Predicate::True&) { os << "true"; },
                 [&](const Predicate::Residue& r) {
                   os << "x % " << r.modulus << " == " << r.residue;
                 },
                 [&](const Predicate::And& a) {
                   if (nested) os << '(';
                   render(a.lhs, os, false);
                   os << " and ";
                   render(a.rhs, os, true);
                   if (nested) os << ')';
                 },
                 [&](const Predicate::Or& o) {
                   if (nested) os << '(';
                   render(o.lhs, os, false);
                   os << " or ";
                   render(o.rhs, os, true);
                   if (nested) os << ')';
                 },
             },
             p.node());
}

class PredicateParser {
 public:
  explicit PredicateParser(std::string_view text) : text_(text) {}

  Predicate parse() {
    Predicate p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  Predicate parse_expr() {
    Predicate lhs = parse_term();
    for (;;) {
      skip_ws();
      if (accept_word("and")) {
        lhs = Predicate::conj(std::move(lhs), parse_term());
      } else if (accept_word("or")) {
        lhs = Predicate::disj(std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Predicate parse_term() {
    skip_ws();
    if (accept_char('(')) {
      Predicate inner = parse_expr();
      skip_ws();
      if (!accept_char(')')) fail("expected ')'");
      return inner;
    }
    if (accept_word("true")) return Predicate::always();
    if (accept_word("x")) {
      skip_ws();
      if (!accept_char('%')) fail("expected '%'");
      skip_ws();
      std::size_t mod_at = pos_;
      std::int64_t k = parse_int();
      skip_ws();
      if (!accept_char('=') || !accept_char('=')) fail("expected '=='");
      skip_ws();
      std::size_t res_at = pos_;
      std::int64_t r = parse_int();
      if (k <= 0) fail("modulus must be positive", mod_at);
      if (r < 0 || r >= k) fail("residue must lie in [0, modulus)", res_at);
      return Predicate::residue(k, r);
    }
    fail("expected 'true', 'x % k == r' or '('");
  }

  std::int64_t parse_int() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    std::int64_t v = 0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{} || ptr != text_.data() + pos_ || start == pos_) {
      fail("expected integer", start);
    }
    return v;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept_char(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    if (end < text_.size() &&
        (std::isalnum(static_cast<unsigned char>(text_[end])) ||
         text_[end] == '_')) {
      return false;
    }
    pos_ = end;
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) { fail(msg, pos_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw PredicateParseError(
        "predicate column " + std::to_string(at + 1) + ": " + msg, at + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};


}  // namespace

Predicate::Predicate() : node_(std::make_shared<const Node>(Node{True{}})) {}

Predicate Predicate::always() { return Predicate(); }

Predicate Predicate::residue(std::int64_t modulus, std::int64_t residue) {
  if (modulus <= 0) throw std::invalid_argument("modulus must be positive");
  if (residue < 0 || residue >= modulus) {
    throw std::invalid_argument("residue must lie in [0, modulus)");
  }
  return Predicate(std::make_shared<const Node>(Node{Residue{modulus, residue}}));
}

Predicate Predicate::conj(Predicate lhs, Predicate rhs) {
  return Predicate(
      std::make_shared<const Node>(Node{And{std::move(lhs), std::move(rhs)}}));
}

Predicate Predicate::disj(Predicate lhs, Predicate rhs) {
  return Predicate(
      std::make_shared<const Node>(Node{Or{std::move(lhs), std::move(rhs)}}));
}

bool Predicate::operator()(Element e) const {
  return std::visit(
      overloaded{
          [](const True&) { return true; },
          [e](const Residue& r) {
            return nonneg_mod(e, r.modulus) == r.residue;
          },
          [e](const And& a) { return a.lhs(e) && a.rhs(e); },
          [e](const Or& o) { return o.lhs(e) || o.rhs(e); },
      },
      node());
}

std::string Predicate::to_string() const {
  std::ostringstream os;
  render(*this, os, false);
  return os.str();
}

bool operator==(const Predicate& a, const Predicate& b) {
  if (a.node_ == b.node_) return true;
  return std::visit(
      overloaded{
          [](const Predicate::True&, const Predicate::True&) { return true; },
          [](const Predicate::Residue& x, const Predicate::Residue& y) {
            return x.modulus == y.modulus && x.residue == y.residue;
          },
          [](const Predicate::And& x, const Predicate::And& y) {
            return x.lhs == y.lhs && x.rhs == y.rhs;
          },
          [](const Predicate::Or& x, const Predicate::Or& y) {
            return x.lhs == y.lhs && x.rhs == y.rhs;
          },
          [](const auto&, const auto&) { return false; },
      },
      a.node(), b.node());
}

Predicate parse_predicate(std::string_view text) {
  return PredicateParser(text).parse();
}

bool eval_predicate(const Predicate& p, Element e) { return p(e); }

ElementSet normalize(ElementSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

SharedView get_view(const PredicateLens& lens, std::span<const Element> d) {
  SharedView out;
  for (Element e : d) {
    if (lens.offer(e)) out.push_back(e);
  }
  return normalize(std::move(out));
}

ElementSet put_view(const PredicateLens& lens, std::span<const Element> d,
                    std::span<const Element> v) {
  ElementSet out;
  for (Element e : d) {
    if (!lens.offer(e)) out.push_back(e);
  }
  for (Element x : v) {
    if (lens.accept(x)) out.push_back(x);
  }
  return normalize(std::move(out));
}

LawReport check_well_behaved(const PredicateLens& lens,
                             std::span<const LawSample> samples) {
  LawReport report;
  for (const auto& s : samples) {
    ++report.samples;
    ElementSet d = normalize(s.source);
    SharedView v = normalize(s.view);

    ElementSet round = put_view(lens, d, get_view(lens, d));
    if (round != d) {
      report.counterexamples.push_back(
          {LawViolation::Law::GetPut, d, v, d, std::move(round)});
    }
    SharedView back = get_view(lens, put_view(lens, d, v));
    if (back != v) {
      report.counterexamples.push_back(
          {LawViolation::Law::PutGet, d, v, v, std::move(back)});
    }
  }
  report.ok = report.counterexamples.empty();
  return report;
}

Operation transform_outbound(const Operation& op, const PredicateLens& lens) {
  if (is_identity(op) || lens.offer(*op.element())) return op;
  return op.as_identity();
}

Operation transform_inbound(const Operation& op, const PredicateLens& lens) {
  if (is_identity(op) || lens.accept(*op.element())) return op;
  return op.as_identity();
}

Predicate shared_domain(const PredicateLens& offerer,
                        const PredicateLens& accepter) {
  return Predicate::conj(offerer.offer, accepter.accept);
}

bool link_symmetric(const PredicateLens& lens_p, const PredicateLens& lens_q,
                    Element lo, Element hi) {
  Predicate pq = shared_domain(lens_p, lens_q);
  Predicate qp = shared_domain(lens_q, lens_p);
  for (Element e = lo; e <= hi; ++e) {
    if (pq(e) != qp(e)) return false;
  }
  return true;
}

}  // namespace ocds
