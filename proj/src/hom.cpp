#include "gca/hom.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

namespace gca {

Elem Hom::apply_code(Elem npattern_code) const {
  auto it = rule.find(npattern_code);
  if (it == rule.end())
    throw Error(Errc::ValidationError,
                "local rule undefined on pattern code " + std::to_string(npattern_code));
  return it->second;
}

Hom make_hom(ShiftPtr domain, GroupPtr target, Shape neighborhood,
             std::unordered_map<Elem, Elem> rule, bool require_ca, const Budget& budget) {
  if (domain->dim() < 1)
    throw Error(Errc::DimensionMismatch, "shift homomorphisms need dimension >= 1");
  if (neighborhood.empty())
    throw Error(Errc::ValidationError, "empty neighborhood");
  Hom f;
  f.domain = std::move(domain);
  f.target = std::move(target);
  f.neighborhood = neighborhood;
  f.rule = std::move(rule);

  const Subgroup allowed = allowed_patterns(f.domain, neighborhood, budget);
  if (allowed.size() != f.rule.size())
    throw Error(Errc::ValidationError,
                "rule table must cover exactly the allowed neighborhood patterns (" +
                    std::to_string(allowed.size()) + " required, " +
                    std::to_string(f.rule.size()) + " given)");
  for (Elem code : allowed.members)
    if (!f.rule.count(code))
      throw Error(Errc::ValidationError, "rule table misses an allowed neighborhood pattern");
  for (auto& [code, value] : f.rule)
    if (value < 0 || value >= f.target->order())
      throw Error(Errc::ValidationError, "rule value out of range");

  const GroupPtr pg = allowed.parent;
  for (Elem a : allowed.members)
    for (Elem b : allowed.members) {
      const Elem lhs = f.rule.at(pg->mul(a, b));
      const Elem rhs = f.target->mul(f.rule.at(a), f.rule.at(b));
      if (lhs != rhs) {
        const Pattern pa = pattern_from_code(f.source(), neighborhood, a);
        const Pattern pb = pattern_from_code(f.source(), neighborhood, b);
        throw Error(Errc::NotGroupHom,
                    "witness pair " + pa.to_string() + ", " + pb.to_string());
      }
    }

  if (require_ca) {
    if (!f.target->same_as(*f.source()))
      throw Error(Errc::NotEndomorphism, "cellular automata map a shift into itself");
    for (const auto& q : f.domain->forbidden()) {
      const Subgroup img = image_language(f, f.domain, q.shape, budget);
      if (img.contains(pattern_code(q)))
        throw Error(Errc::NotEndomorphism,
                    "image contains forbidden pattern " + q.to_string());
    }
    f.is_ca = true;
  }
  f.verified = true;
  return f;
}

Hom restrict_domain(const Hom& f, ShiftPtr sub) {
  Hom g = f;
  g.domain = std::move(sub);
  return g;
}

std::string hom_signature(const Hom& f) {
  std::string s = f.domain->signature() + "|" + f.target->content_key() + "|" +
                  f.neighborhood.to_string() + "|";
  std::vector<std::pair<Elem, Elem>> entries(f.rule.begin(), f.rule.end());
  std::sort(entries.begin(), entries.end());
  for (auto& [k, v] : entries) s += std::to_string(k) + ":" + std::to_string(v) + ",";
  return s;
}

namespace {

struct WordParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_str(const char* w) {
    skip();
    const std::size_t n = std::strlen(w);
    if (s.compare(pos, n, w) == 0) {
      pos += n;
      return true;
    }
    return false;
  }

  // AST: list of (var index | -1 for identity, inverted flag) is not enough
  // for nesting, so parse to a closure over the variable assignment.
  using Eval = std::function<Elem(const std::vector<Elem>&)>;

  Eval parse_expr(const GroupPtr& target, int nvars) {
    Eval acc = parse_term(target, nvars);
    while (true) {
      skip();
      if (pos < s.size() && (s[pos] == '*' || s[pos] == '.')) {
        ++pos;
        Eval rhs = parse_term(target, nvars);
        Eval lhs = acc;
        acc = [lhs, rhs, target](const std::vector<Elem>& v) {
          return target->mul(lhs(v), rhs(v));
        };
        continue;
      }
      break;
    }
    return acc;
  }

  Eval parse_term(const GroupPtr& target, int nvars) {
    skip();
    if (eat_str("inv")) {
      if (!eat('(')) throw Error(Errc::ParseError, "expected ( after inv");
      Eval inner = parse_expr(target, nvars);
      if (!eat(')')) throw Error(Errc::ParseError, "expected ) in rule expression");
      return [inner, target](const std::vector<Elem>& v) { return target->inv(inner(v)); };
    }
    if (eat('(')) {
      Eval inner = parse_expr(target, nvars);
      if (!eat(')')) throw Error(Errc::ParseError, "expected ) in rule expression");
      return inner;
    }
    skip();
    if (pos < s.size() && (s[pos] == 'v' || s[pos] == 'x')) {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) throw Error(Errc::ParseError, "expected variable index");
      const int idx = std::stoi(s.substr(start, pos - start));
      if (idx < 0 || idx >= nvars)
        throw Error(Errc::ParseError, "variable v" + std::to_string(idx) +
                                          " outside the neighborhood (" +
                                          std::to_string(nvars) + " cells)");
      return [idx](const std::vector<Elem>& v) { return v[static_cast<std::size_t>(idx)]; };
    }
    if (eat('e')) {
      return [target](const std::vector<Elem>&) { return target->identity(); };
    }
    throw Error(Errc::ParseError, "unexpected token in rule expression at offset " +
                                      std::to_string(pos));
  }
};

}  // namespace

std::unordered_map<Elem, Elem> compile_rule_word(const std::string& expr, const GroupPtr& g,
                                                 const GroupPtr& target, const Shape& n,
                                                 const std::vector<Elem>& allowed_codes) {
  if (!g->same_as(*target))
    throw Error(Errc::ValidationError,
                "word-expression rules require matching source and target groups");
  WordParser parser{expr};
  auto eval = parser.parse_expr(target, static_cast<int>(n.size()));
  parser.skip();
  if (parser.pos != expr.size())
    throw Error(Errc::ParseError, "trailing input in rule expression");
  std::unordered_map<Elem, Elem> rule;
  std::vector<Elem> vars(n.size());
  for (Elem code : allowed_codes) {
    Elem c = code;
    for (std::size_t i = n.size(); i-- > 0;) {
      vars[i] = c % g->order();
      c /= g->order();
    }
    rule[code] = eval(vars);
  }
  return rule;
}

Pattern apply_to_pattern(const Hom& f, const Pattern& p, const Shape& s) {
  Pattern out;
  out.group = f.target;
  out.shape = s;
  out.values.reserve(s.size());
  const GroupPtr& g = f.source();
  for (const auto& u : s.cells()) {
    Elem code = 0;
    for (const auto& nc : f.neighborhood.cells()) code = code * g->order() + p.at(cell_add(u, nc));
    out.values.push_back(f.apply_code(code));
  }
  return out;
}

PeriodicConfiguration apply_to_torus(const Hom& f, const PeriodicConfiguration& c) {
  PeriodicConfiguration out = c;
  out.group = f.target;
  Cell lo(static_cast<std::size_t>(c.dim()), 0);
  Cell hi(static_cast<std::size_t>(c.dim()));
  for (int i = 0; i < c.dim(); ++i) hi[static_cast<std::size_t>(i)] = c.periods[static_cast<std::size_t>(i)] - 1;
  const GroupPtr& g = f.source();
  for (const auto& u : box_cells(lo, hi)) {
    Elem code = 0;
    for (const auto& nc : f.neighborhood.cells()) code = code * g->order() + c.at(cell_add(u, nc));
    auto it = f.rule.find(code);
    if (it == f.rule.end())
      throw Error(Errc::ConfigNotInShift, "window at " + cell_to_string(u) + " is not allowed");
    out.fundamental[c.fold_index(u)] = it->second;
  }
  return out;
}

Subgroup image_language(const Hom& f, const ShiftPtr& x, const Shape& s, const Budget& budget) {
  const Shape sn = s.minkowski_sum(f.neighborhood);
  const Subgroup pre = allowed_patterns(x, sn, budget);
  const GroupPtr hg = power_group(f.target, s);
  const GroupPtr& g = f.source();
  auto map = [&](Elem code) {
    const Pattern p = pattern_from_code(g, sn, code);
    const Pattern img = apply_to_pattern(f, p, s);
    return pattern_code(img);
  };
  return subgroup_image_unchecked(pre, map, hg);
}

}  // namespace gca
