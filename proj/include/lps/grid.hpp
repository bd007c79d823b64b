#pragma once

// Percolation benchmark world: rectangular grids with obstructed
// cells, the eight directional Moore neighborhoods, the three target
// propagation models, and fire simulation as closure computation.
// Orientation: row 0 is north, column 0 is west, cell (r,c) is index
// r*width + c.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lps/closure.hpp"
#include "lps/dnf.hpp"
#include "lps/element_set.hpp"
#include "lps/errors.hpp"
#include "lps/neighborhoods.hpp"
#include "lps/rng.hpp"
#include "lps/structuring.hpp"

namespace lps {

class Grid {
public:
  Grid(std::size_t width, std::size_t height)
      : width_(width), height_(height), obstacles_(width * height) {
    if (width == 0 || height == 0)
      throw invalid_argument_error("grid dimensions must be positive");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t n() const noexcept { return width_ * height_; }

  std::size_t cell(std::size_t row, std::size_t col) const {
    if (row >= height_ || col >= width_)
      throw invalid_argument_error("cell coordinates out of bounds");
    return row * width_ + col;
  }
  std::size_t row_of(std::size_t x) const { return x / width_; }
  std::size_t col_of(std::size_t x) const { return x % width_; }

  const ElementSet& obstacles() const noexcept { return obstacles_; }
  bool obstructed(std::size_t x) const { return obstacles_.contains(x); }

  void obstruct(std::size_t x) {
    if (x >= n()) throw invalid_argument_error("obstacle index out of bounds");
    obstacles_.insert(x);
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.obstacles_ == b.obstacles_;
  }

private:
  std::size_t width_;
  std::size_t height_;
  ElementSet obstacles_;
};

// First line `width height`, then height rows of width characters,
// '.' inflammable and '#' obstructed.
inline Grid parse_grid(std::istream& in) {
  std::size_t width = 0, height = 0;
  std::string header;
  if (!std::getline(in, header)) throw parse_error("grid file is empty");
  {
    std::istringstream fields(header);
    long long w = 0, h = 0;
    std::string rest;
    if (!(fields >> w >> h) || fields >> rest || w <= 0 || h <= 0)
      throw parse_error("grid header must be 'width height'");
    if (w > 1000000 || h > 1000000 || w * h > 100000000)
      throw size_error("grid dimensions exceed the supported size");
    width = static_cast<std::size_t>(w);
    height = static_cast<std::size_t>(h);
  }
  Grid g(width, height);
  std::string line;
  for (std::size_t r = 0; r < height; ++r) {
    if (!std::getline(in, line))
      throw parse_error("grid ends after " + std::to_string(r) + " of " +
                        std::to_string(height) + " rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != width)
      throw parse_error("grid row " + std::to_string(r) + " has " +
                        std::to_string(line.size()) + " cells, expected " +
                        std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      if (line[c] == '#')
        g.obstruct(g.cell(r, c));
      else if (line[c] != '.')
        throw parse_error(std::string("unexpected grid character '") + line[c] + "'");
    }
  }
  return g;
}

inline Grid parse_grid(const std::string& text) {
  std::istringstream in(text);
  return parse_grid(in);
}

inline void write_grid(std::ostream& out, const Grid& g) {
  out << g.width() << ' ' << g.height() << '\n';
  for (std::size_t r = 0; r < g.height(); ++r) {
    for (std::size_t c = 0; c < g.width(); ++c)
      out << (g.obstructed(g.cell(r, c)) ? '#' : '.');
    out << '\n';
  }
}

inline std::string to_string(const Grid& g) {
  std::ostringstream out;
  write_grid(out, g);
  return out.str();
}

namespace detail {

// Direction of V_i as (row, col) deltas under row 0 = north: V1 NW,
// V2 W, V3 SW, V4 N, V5 S, V6 NE, V7 E, V8 SE.
inline constexpr std::pair<int, int> moore_delta[8] = {
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

}  // namespace detail

// The eight one-step directional neighborhoods. Obstructed cells are
// isolated in both roles: their own V_i collapse to {x} (they cannot
// be expanded) and they are left out of other cells' neighborhoods
// (fire never enters them, so an ignited obstacle must not propagate
// either).
inline NeighborhoodFamily moore_family(const Grid& g) {
  NeighborhoodFamilyBuilder b(8, g.n());
  for (std::size_t r = 0; r < g.height(); ++r)
    for (std::size_t c = 0; c < g.width(); ++c) {
      const std::size_t x = g.cell(r, c);
      if (g.obstructed(x)) continue;
      for (std::size_t i = 0; i < 8; ++i) {
        const auto [dr, dc] = detail::moore_delta[i];
        const long long nr = static_cast<long long>(r) + dr;
        const long long nc = static_cast<long long>(c) + dc;
        if (nr < 0 || nc < 0 || nr >= static_cast<long long>(g.height()) ||
            nc >= static_cast<long long>(g.width()))
          continue;
        const std::size_t y =
            g.cell(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc));
        if (!g.obstructed(y)) b.add(i + 1, x, y);
      }
    }
  return b.build();
}

inline Dnf target_model(const std::string& name) {
  if (name == "simple") return parse_dnf("q4 | q6 | q7");
  if (name == "medium") return parse_dnf("(q4 & q6) | (q5 & q8) | q7");
  if (name == "hard") return parse_dnf("q3 | q5 | (q2 & q4) | (q4 & q7) | (q6 & q7 & q8)");
  throw invalid_argument_error("unknown target model '" + name + "'");
}

namespace detail {

inline std::size_t round_half_up(double v) {
  return static_cast<std::size_t>(std::floor(v + 0.5));
}

}  // namespace detail

struct ObstacleSeries {
  std::vector<double> percentages;
  std::vector<Grid> grids;  // same order; obstacle sets are nested
};

// One shared random permutation of the cells; the grid at percentage
// p obstructs its first round(p*n/100) cells, which makes the series
// nested by construction.
inline ObstacleSeries generate_obstacle_series(std::size_t width, std::size_t height,
                                               const std::vector<double>& percentages,
                                               std::uint64_t rng_seed) {
  if (percentages.empty()) throw config_error("obstacle series needs percentages");
  for (std::size_t j = 0; j < percentages.size(); ++j) {
    if (!(percentages[j] >= 0 && percentages[j] <= 100))
      throw config_error("obstacle percentage must lie in [0, 100]");
    if (j > 0 && !(percentages[j] > percentages[j - 1]))
      throw config_error("obstacle percentages must be strictly increasing");
  }
  const Grid base(width, height);

  std::vector<std::size_t> order(base.n());
  for (std::size_t x = 0; x < order.size(); ++x) order[x] = x;
  Rng rng(rng_seed);
  rng.shuffle(order);

  ObstacleSeries series{percentages, {}};
  series.grids.reserve(percentages.size());
  for (double p : percentages) {
    const std::size_t count =
        detail::round_half_up(p * static_cast<double>(base.n()) / 100.0);
    Grid g = base;
    for (std::size_t j = 0; j < count; ++j) g.obstruct(order[j]);
    series.grids.push_back(std::move(g));
  }
  return series;
}

template <typename Model>
ElementSet simulate_fire(const Grid& g, const Model& model, std::size_t origin) {
  if (origin >= g.n()) throw invalid_argument_error("fire origin out of bounds");
  return closure(moore_family(g), model, ElementSet::singleton(g.n(), origin));
}

// Precomputed-family variant for callers simulating many origins.
template <typename Model>
ElementSet simulate_fire(const NeighborhoodFamily& family, const Model& model,
                         std::size_t origin) {
  if (origin >= family.n()) throw invalid_argument_error("fire origin out of bounds");
  return closure(family, model, ElementSet::singleton(family.n(), origin));
}

// Samples round(fraction * #inflammable) cells without replacement
// and maps each to its burnt region. The sample is the learner's
// whole world: scores downstream sum over these elements only.
template <typename Model>
Structuring build_training_structuring(const Grid& g, const Model& model,
                                       double fraction, std::uint64_t rng_seed) {
  if (!(fraction > 0 && fraction <= 1))
    throw invalid_argument_error("training fraction must lie in (0, 1]");
  std::vector<std::size_t> inflammable;
  for (std::size_t x = 0; x < g.n(); ++x)
    if (!g.obstructed(x)) inflammable.push_back(x);
  if (inflammable.empty())
    throw empty_input_error("grid has no inflammable cells to sample");
  const std::size_t count =
      detail::round_half_up(fraction * static_cast<double>(inflammable.size()));
  if (count == 0) throw empty_input_error("training sample is empty");

  Rng rng(rng_seed);
  rng.shuffle(inflammable);
  inflammable.resize(count);

  const NeighborhoodFamily family = moore_family(g);
  Structuring s(g.n());
  for (std::size_t x : inflammable) s.set(x, simulate_fire(family, model, x));
  return s;
}

}  // namespace lps
