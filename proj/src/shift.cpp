#include "gca/shift.hpp"

#include <algorithm>

namespace gca {

namespace {

bool pattern_less(const Pattern& a, const Pattern& b) {
  if (a.shape.size() != b.shape.size()) return a.shape.size() < b.shape.size();
  if (!(a.shape == b.shape)) return a.shape.cells() < b.shape.cells();
  return a.values < b.values;
}

}  // namespace

ShiftPtr Shift::full(GroupPtr g, int dim) { return from_patterns(std::move(g), dim, {}); }

ShiftPtr Shift::from_patterns(GroupPtr g, int dim, std::vector<Pattern> forbidden) {
  if (dim < 0) throw Error(Errc::DimensionMismatch, "negative dimension");
  if (dim == 0) {
    // dimension 0 degenerates to an explicit subgroup: start from the full
    // group and strike the forbidden single-cell values
    std::vector<char> banned(static_cast<std::size_t>(g->order()), 0);
    for (const auto& p : forbidden) {
      if (p.shape.size() != 1)
        throw Error(Errc::DimensionMismatch, "0-dim patterns have a single cell");
      banned[static_cast<std::size_t>(p.values[0])] = 1;
    }
    Subgroup s;
    s.parent = g;
    for (Elem e = 0; e < g->order(); ++e)
      if (!banned[static_cast<std::size_t>(e)]) s.members.push_back(e);
    return from_subgroup(std::move(s));
  }
  auto x = std::shared_ptr<Shift>(new Shift());
  x->alphabet_ = std::move(g);
  x->dim_ = dim;
  x->forbidden_.reserve(forbidden.size());
  for (auto& p : forbidden) {
    if (p.dim() != dim) throw Error(Errc::DimensionMismatch, "pattern dimension mismatch");
    if (!p.group->same_as(*x->alphabet_))
      throw Error(Errc::ValidationError, "pattern over a different alphabet");
    if (p.shape.empty()) continue;
    x->forbidden_.push_back(p.canonical());
  }
  std::sort(x->forbidden_.begin(), x->forbidden_.end(), pattern_less);
  x->forbidden_.erase(std::unique(x->forbidden_.begin(), x->forbidden_.end()),
                      x->forbidden_.end());
  return x;
}

ShiftPtr Shift::from_subgroup(Subgroup members) {
  auto x = std::shared_ptr<Shift>(new Shift());
  x->alphabet_ = members.parent;
  x->dim_ = 0;
  x->members_ = std::move(members);
  return x;
}

ShiftPtr Shift::identity_only(GroupPtr g, int dim) {
  if (dim == 0) return from_subgroup(trivial_subgroup(g));
  std::vector<Pattern> pats;
  for (Elem e = 0; e < g->order(); ++e) {
    if (e == g->identity()) continue;
    Pattern p;
    p.group = g;
    p.shape = Shape::origin(dim);
    p.values = {e};
    pats.push_back(std::move(p));
  }
  return from_patterns(std::move(g), dim, std::move(pats));
}

const Subgroup& Shift::members() const {
  if (!members_) throw Error(Errc::DimensionMismatch, "subgroup view needs dimension 0");
  return *members_;
}

bool Shift::is_full() const {
  if (zero_dim()) return members_->size() == static_cast<std::size_t>(alphabet_->order());
  return forbidden_.empty();
}

int Shift::width() const {
  if (zero_dim()) return 1;
  int w = 1;
  for (const auto& p : forbidden_) {
    Cell lo, hi;
    p.shape.bounds(lo, hi);
    w = std::max(w, hi[0] - lo[0] + 1);
  }
  return w;
}

Shape Shift::residual_box() const {
  if (dim_ == 1) return Shape::zero_dim();
  if (forbidden_.empty()) return Shape::origin(dim_ - 1);
  Cell lo(static_cast<std::size_t>(dim_ - 1), 0), hi(static_cast<std::size_t>(dim_ - 1), 0);
  bool first = true;
  for (const auto& p : forbidden_) {
    Cell plo, phi;
    p.shape.bounds(plo, phi);
    for (int i = 1; i < dim_; ++i) {
      const int v0 = plo[static_cast<std::size_t>(i)], v1 = phi[static_cast<std::size_t>(i)];
      if (first) {
        lo[static_cast<std::size_t>(i - 1)] = v0;
        hi[static_cast<std::size_t>(i - 1)] = v1;
      } else {
        lo[static_cast<std::size_t>(i - 1)] = std::min(lo[static_cast<std::size_t>(i - 1)], v0);
        hi[static_cast<std::size_t>(i - 1)] = std::max(hi[static_cast<std::size_t>(i - 1)], v1);
      }
    }
    first = false;
  }
  // keep shapes anchored at the origin; only extents matter to callers
  Cell size(static_cast<std::size_t>(dim_ - 1));
  for (int i = 0; i + 1 < dim_; ++i)
    size[static_cast<std::size_t>(i)] = hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
  return Shape::box(Cell(static_cast<std::size_t>(dim_ - 1), 0), size);
}

Shape Shift::domain_hull() const {
  if (zero_dim()) return Shape::zero_dim();
  if (forbidden_.empty()) return Shape::origin(dim_);
  Cell lo, hi;
  bool first = true;
  for (const auto& p : forbidden_) {
    Cell plo, phi;
    p.shape.bounds(plo, phi);
    if (first) {
      lo = plo;
      hi = phi;
      first = false;
    } else {
      for (std::size_t i = 0; i < lo.size(); ++i) {
        lo[i] = std::min(lo[i], plo[i]);
        hi[i] = std::max(hi[i], phi[i]);
      }
    }
  }
  return Shape::box(lo, hi);
}

bool Shift::locally_forbidden(const Pattern& p) const {
  for (const auto& q : forbidden_)
    if (pattern_occurs_in(q, p)) return true;
  return false;
}

std::string Shift::signature() const {
  if (!signature_) {
    std::string s = alphabet_->content_key() + "|d" + std::to_string(dim_) + "|";
    if (zero_dim()) {
      for (Elem e : members_->members) s += std::to_string(e) + ",";
    } else {
      for (const auto& p : forbidden_) {
        for (const auto& c : p.shape.cells()) s += cell_to_string(c);
        s += "=";
        for (Elem v : p.values) s += std::to_string(v) + ".";
        s += ";";
      }
    }
    signature_ = std::make_shared<std::string>(std::move(s));
  }
  return *signature_;
}

ShiftPtr Shift::normalized(const Shape& target) const {
  if (zero_dim()) throw Error(Errc::DimensionMismatch, "normalize needs dimension >= 1");
  if (target.dim() != dim_) throw Error(Errc::DimensionMismatch, "target dimension mismatch");
  Cell tlo, thi;
  target.bounds(tlo, thi);
  std::vector<Pattern> out;
  for (const auto& p : forbidden_) {
    Cell plo, phi;
    p.shape.bounds(plo, phi);
    for (std::size_t i = 0; i < plo.size(); ++i)
      if (phi[i] - plo[i] > thi[i] - tlo[i])
        throw Error(Errc::DomainTooSmall,
                    "pattern " + p.to_string() + " does not fit in the target domain");
    // place the pattern at the low corner of the target
    const Cell t = cell_sub(plo, tlo);
    Pattern placed = pattern_translate(p, t);
    for (const auto& c : placed.shape.cells())
      if (!target.contains(c))
        throw Error(Errc::DomainTooSmall, "target shape does not cover the pattern");
    // free cells of the target are extended over all values
    std::vector<Cell> free_cells;
    for (const auto& c : target.cells())
      if (placed.shape.index_of(c) < 0) free_cells.push_back(c);
    const std::int64_t g = alphabet_->order();
    std::int64_t count = 1;
    for (std::size_t i = 0; i < free_cells.size(); ++i) {
      count *= g;
      if (count > (std::int64_t(1) << 22))
        throw Error(Errc::PowerTooLarge, "normalization would enumerate too many extensions");
    }
    std::vector<Elem> fill(free_cells.size(), 0);
    while (true) {
      std::vector<Cell> cells = placed.shape.cells();
      std::vector<Elem> values = placed.values;
      cells.insert(cells.end(), free_cells.begin(), free_cells.end());
      values.insert(values.end(), fill.begin(), fill.end());
      // re-sort into canonical cell order
      std::vector<std::size_t> idx(cells.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return cell_lex_less(cells[a], cells[b]);
      });
      Pattern q;
      q.group = alphabet_;
      std::vector<Cell> sc;
      sc.reserve(cells.size());
      for (std::size_t i : idx) {
        sc.push_back(cells[i]);
        q.values.push_back(values[i]);
      }
      q.shape = Shape(std::move(sc));
      out.push_back(std::move(q));
      // odometer over the free cells
      std::size_t i = free_cells.size();
      while (i > 0) {
        --i;
        if (++fill[i] < g) break;
        fill[i] = 0;
        if (i == 0) goto next_pattern;
      }
      if (free_cells.empty()) break;
    }
  next_pattern:;
  }
  return from_patterns(alphabet_, dim_, std::move(out));
}

ShiftPtr Shift::relabeled(GroupPtr new_alphabet, const std::function<Elem(Elem)>& old_to_new,
                          const std::function<Elem(Elem)>& new_to_old) const {
  (void)new_to_old;
  if (zero_dim()) {
    Subgroup s = subgroup_image_unchecked(*members_, old_to_new, new_alphabet);
    return from_subgroup(std::move(s));
  }
  std::vector<Pattern> out;
  out.reserve(forbidden_.size());
  for (const auto& p : forbidden_) {
    Pattern q = p;
    q.group = new_alphabet;
    for (auto& v : q.values) v = old_to_new(v);
    out.push_back(std::move(q));
  }
  return from_patterns(std::move(new_alphabet), dim_, std::move(out));
}

ShiftPtr Shift::permuted_axes(const std::vector<int>& new_to_old_axis) const {
  if (zero_dim()) return shared_from_this();
  if (new_to_old_axis.size() != static_cast<std::size_t>(dim_))
    throw Error(Errc::DimensionMismatch, "axis permutation size mismatch");
  std::vector<Pattern> out;
  out.reserve(forbidden_.size());
  for (const auto& p : forbidden_) {
    std::vector<Cell> cells;
    cells.reserve(p.shape.size());
    for (const auto& c : p.shape.cells()) {
      Cell nc(c.size());
      for (std::size_t i = 0; i < c.size(); ++i)
        nc[i] = c[static_cast<std::size_t>(new_to_old_axis[i])];
      cells.push_back(std::move(nc));
    }
    // values follow their cells through the reorder
    std::vector<std::size_t> idx(cells.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return cell_lex_less(cells[a], cells[b]);
    });
    Pattern q;
    q.group = alphabet_;
    std::vector<Cell> sc;
    sc.reserve(cells.size());
    for (std::size_t i : idx) {
      sc.push_back(cells[i]);
      q.values.push_back(p.values[i]);
    }
    q.shape = Shape(std::move(sc));
    out.push_back(std::move(q));
  }
  return from_patterns(alphabet_, dim_, std::move(out));
}

ShiftPtr Shift::intersect(const ShiftPtr& other) const {
  if (dim_ != other->dim_) throw Error(Errc::DimensionMismatch, "intersect dimension mismatch");
  if (!alphabet_->same_as(*other->alphabet_))
    throw Error(Errc::ValidationError, "intersect alphabet mismatch");
  if (zero_dim()) {
    Subgroup s;
    s.parent = alphabet_;
    std::set_intersection(members_->members.begin(), members_->members.end(),
                          other->members_->members.begin(), other->members_->members.end(),
                          std::back_inserter(s.members));
    return from_subgroup(std::move(s));
  }
  std::vector<Pattern> out = forbidden_;
  out.insert(out.end(), other->forbidden_.begin(), other->forbidden_.end());
  return from_patterns(alphabet_, dim_, std::move(out));
}

ShiftPtr Shift::pruned() const {
  if (zero_dim()) return shared_from_this();
  std::vector<Pattern> kept;
  // forbidden_ is sorted by domain size, so any subsuming pattern comes first
  for (const auto& p : forbidden_) {
    bool redundant = false;
    for (const auto& k : kept)
      if (pattern_occurs_in(k, p)) {
        redundant = true;
        break;
      }
    if (!redundant) kept.push_back(p);
  }
  if (kept.size() == forbidden_.size()) return shared_from_this();
  return from_patterns(alphabet_, dim_, std::move(kept));
}

bool torus_member(const PeriodicConfiguration& c, const Shift& x) {
  if (x.dim() != c.dim()) throw Error(Errc::DimensionMismatch, "configuration dimension mismatch");
  if (!c.group->same_as(*x.alphabet()))
    throw Error(Errc::ValidationError, "configuration alphabet mismatch");
  if (x.zero_dim()) return x.members().contains(c.fundamental[0]);
  Cell lo(static_cast<std::size_t>(x.dim()), 0);
  Cell hi(static_cast<std::size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) hi[static_cast<std::size_t>(i)] = c.periods[static_cast<std::size_t>(i)] - 1;
  for (const auto& q : x.forbidden()) {
    for (const auto& t : box_cells(lo, hi)) {
      bool match = true;
      for (std::size_t i = 0; i < q.shape.size() && match; ++i)
        match = c.at(cell_add(q.shape.cells()[i], t)) == q.values[i];
      if (match) return false;
    }
  }
  return true;
}

}  // namespace gca
