#pragma once

#include <string>
#include <vector>

#include "gtd/expression.hpp"

namespace gtd {

// Ordered coordinate names for a manifold patch. Order is significant:
// it fixes index meaning in metric components, Christoffel symbols, and
// state vectors throughout.
struct Chart {
  std::vector<std::string> coords;

  std::size_t dim() const { return coords.size(); }
  const std::string& operator[](std::size_t i) const { return coords[i]; }

  // Index of a named coordinate; throws Error if absent.
  std::size_t index_of(const std::string& name) const;

  bool operator==(const Chart&) const = default;
};

// A point is a coordinate tuple in chart order.
using Point = std::vector<double>;

inline Bindings bind(const Chart& chart, const Point& p) {
  Bindings b;
  for (std::size_t i = 0; i < chart.coords.size() && i < p.size(); ++i)
    b[chart.coords[i]] = p[i];
  return b;
}

}  // namespace gtd
