#include "gtd/chart.hpp"

#include "gtd/errors.hpp"

namespace gtd {

std::size_t Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == name) return i;
  throw Error("coordinate '" + name + "' not in chart");
}

}  // namespace gtd
