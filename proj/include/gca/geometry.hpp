#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gca {

/// A grid cell: integer coordinates, length = ambient dimension.
/// Dimension 0 is allowed; its single cell is the empty vector.
using Cell = std::vector<int>;

Cell cell_add(const Cell& a, const Cell& b);
Cell cell_sub(const Cell& a, const Cell& b);
bool cell_lex_less(const Cell& a, const Cell& b);
std::string cell_to_string(const Cell& c);

/// A finite set of cells, kept sorted lexicographically and deduplicated.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<Cell> cells);

  static Shape box(const Cell& lo, const Cell& hi);        // inclusive corners
  static Shape interval(int lo, int hi);                   // 1-dimensional box
  static Shape origin(int dim);                            // single cell at 0
  static Shape zero_dim();                                 // the one cell of Z^0

  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  int dim() const;

  bool contains(const Cell& c) const;
  int index_of(const Cell& c) const;  // -1 if absent

  Shape translated(const Cell& t) const;   // cells shifted by -t (pulls t to 0)
  Shape united(const Shape& o) const;
  Shape minkowski_sum(const Shape& o) const;  // {a + b}
  Shape inflated(int r) const;                // bounding box grown by r per side

  void bounds(Cell& lo, Cell& hi) const;   // bounding box (shape nonempty)
  Cell min_cell() const { return cells_.front(); }

  bool operator==(const Shape& o) const { return cells_ == o.cells_; }
  std::string to_string() const;

 private:
  std::vector<Cell> cells_;
};

/// All cells of the box [lo, hi] in lexicographic order.
std::vector<Cell> box_cells(const Cell& lo, const Cell& hi);

}  // namespace gca
