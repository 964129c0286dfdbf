#include "gca/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "gca/errors.hpp"

namespace gca {

Cell cell_add(const Cell& a, const Cell& b) {
  Cell r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Cell cell_sub(const Cell& a, const Cell& b) {
  Cell r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

bool cell_lex_less(const Cell& a, const Cell& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string cell_to_string(const Cell& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + ")";
}

Shape::Shape(std::vector<Cell> cells) : cells_(std::move(cells)) {
  for (const auto& c : cells_)
    if (c.size() != cells_.front().size())
      throw Error(Errc::ShapeMismatch, "cells of mixed dimension in shape");
  std::sort(cells_.begin(), cells_.end(), cell_lex_less);
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

Shape Shape::box(const Cell& lo, const Cell& hi) { return Shape(box_cells(lo, hi)); }

Shape Shape::interval(int lo, int hi) { return box(Cell{lo}, Cell{hi}); }

Shape Shape::origin(int dim) { return Shape({Cell(dim, 0)}); }

Shape Shape::zero_dim() { return Shape({Cell{}}); }

int Shape::dim() const {
  if (cells_.empty()) throw Error(Errc::ShapeMismatch, "empty shape has no dimension");
  return static_cast<int>(cells_.front().size());
}

bool Shape::contains(const Cell& c) const {
  return std::binary_search(cells_.begin(), cells_.end(), c, cell_lex_less);
}

int Shape::index_of(const Cell& c) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), c, cell_lex_less);
  if (it == cells_.end() || *it != c) return -1;
  return static_cast<int>(it - cells_.begin());
}

Shape Shape::translated(const Cell& t) const {
  std::vector<Cell> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(cell_sub(c, t));
  return Shape(std::move(out));
}

Shape Shape::united(const Shape& o) const {
  std::vector<Cell> out = cells_;
  out.insert(out.end(), o.cells_.begin(), o.cells_.end());
  return Shape(std::move(out));
}

Shape Shape::minkowski_sum(const Shape& o) const {
  std::vector<Cell> out;
  out.reserve(cells_.size() * o.cells_.size());
  for (const auto& a : cells_)
    for (const auto& b : o.cells_) out.push_back(cell_add(a, b));
  return Shape(std::move(out));
}

Shape Shape::inflated(int r) const {
  Cell lo, hi;
  bounds(lo, hi);
  for (auto& v : lo) v -= r;
  for (auto& v : hi) v += r;
  return box(lo, hi);
}

void Shape::bounds(Cell& lo, Cell& hi) const {
  if (cells_.empty()) throw Error(Errc::ShapeMismatch, "empty shape has no bounds");
  lo = cells_.front();
  hi = cells_.front();
  for (const auto& c : cells_)
    for (std::size_t i = 0; i < c.size(); ++i) {
      lo[i] = std::min(lo[i], c[i]);
      hi[i] = std::max(hi[i], c[i]);
    }
}

std::string Shape::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (i) s += " ";
    s += cell_to_string(cells_[i]);
  }
  return s + "}";
}

std::vector<Cell> box_cells(const Cell& lo, const Cell& hi) {
  const std::size_t d = lo.size();
  if (hi.size() != d) throw Error(Errc::ShapeMismatch, "box corners of mixed dimension");
  std::vector<Cell> out;
  Cell cur = lo;
  if (d == 0) return {Cell{}};
  for (std::size_t i = 0; i < d; ++i)
    if (hi[i] < lo[i]) return out;
  while (true) {
    out.push_back(cur);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (cur[i] < hi[i]) {
        ++cur[i];
        for (std::size_t j = i + 1; j < d; ++j) cur[j] = lo[j];
        break;
      }
      if (i == 0) return out;
    }
  }
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonAssociative: return "NonAssociative";
    case Errc::NoIdentity: return "NoIdentity";
    case Errc::NoInverse: return "NoInverse";
    case Errc::PowerTooLarge: return "PowerTooLarge";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotPowerAlphabet: return "NotPowerAlphabet";
    case Errc::DomainTooSmall: return "DomainTooSmall";
    case Errc::NotHomomorphism: return "NotHomomorphism";
    case Errc::NotGroupHom: return "NotGroupHom";
    case Errc::NotEndomorphism: return "NotEndomorphism";
    case Errc::NotOneDimensional: return "NotOneDimensional";
    case Errc::EmptyAutomaton: return "EmptyAutomaton";
    case Errc::ConfigNotInShift: return "ConfigNotInShift";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::Internal: return "Internal";
  }
  return "Error";
}

}  // namespace gca
