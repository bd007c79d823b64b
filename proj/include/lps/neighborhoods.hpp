#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lps/element_set.hpp"
#include "lps/errors.hpp"

namespace lps {

class NeighborhoodFamilyBuilder;

// k neighborhood maps V_1..V_k over a universe of n elements.
// Reflexive by construction: x is inserted into every V_i(x), so
// V_i(x) is never empty. Immutable; build via NeighborhoodFamilyBuilder.
// sources(i, y) lists the x with y in V_i(x) (reverse adjacency),
// the hot path of the incremental closure engine.
class NeighborhoodFamily {
public:
  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }

  // i is 1-based, matching the subscripts V_1..V_k.
  const ElementSet& neighborhood(std::size_t i, std::size_t x) const {
    return sets_[slot(i, x)];
  }

  const std::vector<std::uint32_t>& sources(std::size_t i, std::size_t y) const {
    return sources_[slot(i, y)];
  }

private:
  friend class NeighborhoodFamilyBuilder;

  NeighborhoodFamily(std::size_t k, std::size_t n, std::vector<ElementSet> sets)
      : k_(k), n_(n), sets_(std::move(sets)), sources_(k * n) {
    for (std::size_t i = 1; i <= k_; ++i)
      for (std::size_t x = 0; x < n_; ++x)
        sets_[slot(i, x)].for_each([&](std::size_t y) {
          sources_[slot(i, y)].push_back(static_cast<std::uint32_t>(x));
        });
  }

  std::size_t slot(std::size_t i, std::size_t x) const {
    if (i < 1 || i > k_) throw invalid_argument_error("neighborhood index out of range");
    if (x >= n_) throw invalid_argument_error("element index out of range");
    return (i - 1) * n_ + x;
  }

  std::size_t k_;
  std::size_t n_;
  std::vector<ElementSet> sets_;
  std::vector<std::vector<std::uint32_t>> sources_;
};

class NeighborhoodFamilyBuilder {
public:
  NeighborhoodFamilyBuilder(std::size_t k, std::size_t n) : k_(k), n_(n) {
    if (k == 0) throw invalid_argument_error("family needs at least one neighborhood");
    if (n == 0) throw invalid_argument_error("universe must be non-empty");
    sets_.reserve(k * n);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t x = 0; x < n; ++x) sets_.push_back(ElementSet::singleton(n, x));
  }

  // Declares y in V_i(x).
  NeighborhoodFamilyBuilder& add(std::size_t i, std::size_t x, std::size_t y) {
    if (i < 1 || i > k_) throw invalid_argument_error("neighborhood index out of range");
    if (x >= n_ || y >= n_) throw invalid_argument_error("element index out of range");
    sets_[(i - 1) * n_ + x].insert(y);
    return *this;
  }

  NeighborhoodFamily build() { return NeighborhoodFamily(k_, n_, std::move(sets_)); }

private:
  std::size_t k_;
  std::size_t n_;
  std::vector<ElementSet> sets_;
};

namespace detail {

// Splits a line into whitespace-separated tokens, treating ':' as its
// own token so "3:" and "3 :" read the same.
inline std::vector<std::string> tokenize_colon_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else if (c == ':') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
      out.push_back(":");
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline std::size_t parse_index(const std::string& tok, std::size_t line_no,
                               const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw parse_error(std::string("expected ") + what + ", got '" + tok + "'", line_no, 1);
  unsigned long long v = 0;
  for (char c : tok) {
    v = v * 10 + static_cast<unsigned long long>(c - '0');
    if (v > 0xffffffffull) throw parse_error(std::string(what) + " out of range", line_no, 1);
  }
  return static_cast<std::size_t>(v);
}

}  // namespace detail

// Text format: header `k n`, then lines `V<i> <x>: <y1> <y2> ...`
// meaning each y_j is in V_i(x). Pairs with no line default to
// V_i(x) = {x}.
inline NeighborhoodFamily parse_neighborhood_family(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t k = 0, n = 0;
  // Header: first non-empty line.
  for (;;) {
    if (!std::getline(in, line)) throw parse_error("missing `k n` header", line_no, 1);
    ++line_no;
    auto toks = detail::tokenize_colon_line(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw parse_error("header must be exactly `k n`", line_no, 1);
    k = detail::parse_index(toks[0], line_no, "neighborhood count k");
    n = detail::parse_index(toks[1], line_no, "universe size n");
    break;
  }
  if (k == 0) throw parse_error("k must be at least 1", line_no, 1);
  if (n == 0) throw parse_error("n must be at least 1", line_no, 1);
  NeighborhoodFamilyBuilder b(k, n);
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::tokenize_colon_line(line);
    if (toks.empty()) continue;
    if (toks[0].size() < 2 || (toks[0][0] != 'V' && toks[0][0] != 'v'))
      throw parse_error("expected `V<i>`, got '" + toks[0] + "'", line_no, 1);
    std::size_t i = detail::parse_index(toks[0].substr(1), line_no, "neighborhood index");
    if (i < 1 || i > k)
      throw parse_error("neighborhood index " + std::to_string(i) + " outside 1.." +
                            std::to_string(k),
                        line_no, 1);
    if (toks.size() < 3 || toks[2] != ":")
      throw parse_error("expected `V<i> <x>: ...`", line_no, 1);
    std::size_t x = detail::parse_index(toks[1], line_no, "element index");
    if (x >= n) throw parse_error("element index out of range", line_no, 1);
    for (std::size_t t = 3; t < toks.size(); ++t) {
      std::size_t y = detail::parse_index(toks[t], line_no, "element index");
      if (y >= n) throw parse_error("element index out of range", line_no, 1);
      b.add(i, x, y);
    }
  }
  return b.build();
}

inline NeighborhoodFamily parse_neighborhood_family(const std::string& text) {
  std::istringstream in(text);
  return parse_neighborhood_family(in);
}

// Emits only the non-default lines (V_i(x) beyond the bare {x}).
inline void write_neighborhood_family(std::ostream& out, const NeighborhoodFamily& f) {
  out << f.k() << ' ' << f.n() << '\n';
  for (std::size_t i = 1; i <= f.k(); ++i)
    for (std::size_t x = 0; x < f.n(); ++x) {
      const ElementSet& v = f.neighborhood(i, x);
      if (v.count() == 1) continue;
      out << 'V' << i << ' ' << x << ':';
      v.for_each([&](std::size_t y) { out << ' ' << y; });
      out << '\n';
    }
}

}  // namespace lps
