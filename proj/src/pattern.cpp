#include "gca/pattern.hpp"

#include <algorithm>

namespace gca {

Elem Pattern::at(const Cell& c) const {
  const int i = shape.index_of(c);
  if (i < 0) throw Error(Errc::ShapeMismatch, "cell outside pattern domain");
  return values[static_cast<std::size_t>(i)];
}

Pattern Pattern::canonical() const {
  if (shape.empty()) return *this;
  return pattern_translate(*this, shape.min_cell());
}

bool Pattern::operator==(const Pattern& o) const {
  return shape == o.shape && values == o.values && group->same_as(*o.group);
}

std::string Pattern::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.cells().size(); ++i) {
    if (i) s += " ";
    s += cell_to_string(shape.cells()[i]) + "=" + group->label(values[i]);
  }
  return s + "]";
}

Elem pattern_code(const Pattern& p) {
  Elem code = 0;
  for (Elem v : p.values) code = code * p.group->order() + v;
  return code;
}

Pattern pattern_from_code(const GroupPtr& g, const Shape& s, Elem code) {
  Pattern p;
  p.group = g;
  p.shape = s;
  p.values.assign(s.size(), 0);
  for (std::size_t i = s.size(); i-- > 0;) {
    p.values[i] = code % g->order();
    code /= g->order();
  }
  return p;
}

Elem code_digit(const GroupPtr& base, int ncells, Elem code, int i) {
  std::int64_t rad = 1;
  for (int k = 0; k < ncells - 1 - i; ++k) rad *= base->order();
  return (code / rad) % base->order();
}

Pattern pattern_combine(CombineKind kind, const Pattern& p, const Pattern* q) {
  Pattern out = p;
  if (kind == CombineKind::Inverse) {
    for (auto& v : out.values) v = p.group->inv(v);
    return out;
  }
  if (!q) throw Error(Errc::ShapeMismatch, "product needs two patterns");
  if (!(p.shape == q->shape) || !p.group->same_as(*q->group))
    throw Error(Errc::ShapeMismatch, "patterns with different shapes or groups");
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = p.group->mul(p.values[i], q->values[i]);
  return out;
}

Pattern pattern_translate(const Pattern& p, const Cell& t) {
  Pattern out;
  out.group = p.group;
  out.values.resize(p.values.size());
  std::vector<Cell> cells;
  cells.reserve(p.shape.size());
  for (const auto& c : p.shape.cells()) cells.push_back(cell_sub(c, t));
  // translation preserves the lexicographic cell order, so values carry over
  out.shape = Shape(std::move(cells));
  out.values = p.values;
  return out;
}

Pattern identity_pattern(const GroupPtr& g, const Shape& s) {
  Pattern p;
  p.group = g;
  p.shape = s;
  p.values.assign(s.size(), g->identity());
  return p;
}

Pattern hat_lift(const Pattern& p) {
  const GroupPtr& a = p.group;
  if (!a->composite())
    throw Error(Errc::NotPowerAlphabet, "hat lift needs a power alphabet");
  const int n = a->factor_count();
  const GroupPtr base = a->factor(0);
  for (int i = 1; i < n; ++i)
    if (!a->factor(i)->same_as(*base))
      throw Error(Errc::NotPowerAlphabet, "hat lift needs equal factors");
  std::vector<Cell> cells;
  std::vector<Elem> values;
  cells.reserve(p.shape.size() * static_cast<std::size_t>(n));
  for (std::size_t ci = 0; ci < p.shape.size(); ++ci) {
    const Cell& u = p.shape.cells()[ci];
    for (int i = 0; i < n; ++i) {
      Cell lifted;
      lifted.reserve(u.size() + 1);
      lifted.push_back(i);
      lifted.insert(lifted.end(), u.begin(), u.end());
      cells.push_back(std::move(lifted));
      values.push_back(a->component(p.values[ci], i));
    }
  }
  // re-sort values to the canonical cell order of the lifted shape
  std::vector<std::size_t> idx(cells.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t x, std::size_t y) { return cell_lex_less(cells[x], cells[y]); });
  Pattern out;
  out.group = base;
  std::vector<Cell> sorted_cells;
  sorted_cells.reserve(cells.size());
  out.values.reserve(values.size());
  for (std::size_t i : idx) {
    sorted_cells.push_back(cells[i]);
    out.values.push_back(values[i]);
  }
  out.shape = Shape(std::move(sorted_cells));
  return out;
}

Pattern hat_drop(const Pattern& p, int n) {
  const GroupPtr& base = p.group;
  // domain must be {0..n-1} x D for a consistent D
  std::vector<Cell> residual;
  for (const auto& c : p.shape.cells()) {
    if (c.empty() || c[0] < 0 || c[0] >= n)
      throw Error(Errc::ShapeMismatch, "pattern does not span tracks 0..n-1");
    if (c[0] == 0) residual.push_back(Cell(c.begin() + 1, c.end()));
  }
  Shape d(residual);
  if (d.size() * static_cast<std::size_t>(n) != p.shape.size())
    throw Error(Errc::ShapeMismatch, "pattern domain is not a full track stack");
  GroupPtr alphabet = canonical_power(base, n);
  Pattern out;
  out.group = alphabet;
  out.shape = d;
  out.values.reserve(d.size());
  for (const auto& u : d.cells()) {
    std::vector<Elem> comps;
    comps.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      Cell c;
      c.reserve(u.size() + 1);
      c.push_back(i);
      c.insert(c.end(), u.begin(), u.end());
      comps.push_back(p.at(c));
    }
    out.values.push_back(alphabet->compose(comps));
  }
  return out;
}

bool pattern_occurs_in(const Pattern& q, const Pattern& p) {
  if (q.shape.empty()) return true;
  if (q.shape.size() > p.shape.size()) return false;
  // anchor q's first cell on each cell of p
  for (const auto& anchor : p.shape.cells()) {
    const Cell t = cell_sub(anchor, q.shape.min_cell());
    bool ok = true;
    for (std::size_t i = 0; i < q.shape.size() && ok; ++i) {
      const Cell c = cell_add(q.shape.cells()[i], t);
      const int j = p.shape.index_of(c);
      ok = j >= 0 && p.values[static_cast<std::size_t>(j)] == q.values[i];
    }
    if (ok) return true;
  }
  return false;
}

std::int64_t PeriodicConfiguration::volume() const {
  std::int64_t v = 1;
  for (int k : periods) v *= k;
  return v;
}

std::size_t PeriodicConfiguration::fold_index(const Cell& c) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    int m = c[i] % periods[i];
    if (m < 0) m += periods[i];
    idx = idx * static_cast<std::size_t>(periods[i]) + static_cast<std::size_t>(m);
  }
  return idx;
}

Elem PeriodicConfiguration::at(const Cell& c) const { return fundamental[fold_index(c)]; }

PeriodicConfiguration PeriodicConfiguration::translated(const Cell& t) const {
  PeriodicConfiguration out = *this;
  const auto cells = box_cells(Cell(periods.size(), 0), [&] {
    Cell hi(periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) hi[i] = periods[i] - 1;
    return hi;
  }());
  for (const auto& c : cells) out.fundamental[fold_index(c)] = at(cell_add(c, t));
  return out;
}

bool PeriodicConfiguration::contains_pattern(const Pattern& p) const {
  if (p.shape.empty()) return true;
  Cell lo(periods.size(), 0);
  Cell hi(periods.size());
  for (std::size_t i = 0; i < periods.size(); ++i) hi[i] = periods[i] - 1;
  for (const auto& t : box_cells(lo, hi)) {
    bool ok = true;
    for (std::size_t i = 0; i < p.shape.size() && ok; ++i)
      ok = at(cell_add(p.shape.cells()[i], t)) == p.values[i];
    if (ok) return true;
  }
  return false;
}

bool PeriodicConfiguration::is_identity() const {
  for (Elem v : fundamental)
    if (v != group->identity()) return false;
  return true;
}

std::string PeriodicConfiguration::to_string() const {
  std::string s = "periods(";
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(periods[i]);
  }
  s += "):";
  for (std::size_t i = 0; i < fundamental.size(); ++i) {
    s += i ? "," : " ";
    s += group->label(fundamental[i]);
  }
  return s;
}

bool PeriodicConfiguration::operator==(const PeriodicConfiguration& o) const {
  return periods == o.periods && fundamental == o.fundamental && group->same_as(*o.group);
}

PeriodicConfiguration identity_configuration(const GroupPtr& g, int dim) {
  PeriodicConfiguration c;
  c.group = g;
  c.periods.assign(static_cast<std::size_t>(dim), 1);
  c.fundamental = {g->identity()};
  return c;
}

}  // namespace gca
