#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lps/element_set.hpp"
#include "lps/errors.hpp"
#include "lps/neighborhoods.hpp"

namespace lps {

// Map x -> F({x}) over some domain of elements. A full structuring
// covers the whole universe; a partial one covers a training sample.
// Invariant: x is a member of its own closure.
class Structuring {
public:
  Structuring() : n_(0), count_(0) {}

  explicit Structuring(std::size_t universe_size)
      : n_(universe_size), closures_(universe_size), count_(0) {}

  std::size_t universe_size() const noexcept { return n_; }
  std::size_t domain_size() const noexcept { return count_; }
  bool is_full() const noexcept { return count_ == n_; }

  void set(std::size_t x, ElementSet closure) {
    if (x >= n_) throw invalid_argument_error("element index out of range");
    if (closure.universe_size() != n_)
      throw invalid_argument_error("closure over a different universe");
    if (!closure.contains(x))
      throw invalid_argument_error("elementary closure must contain its own element");
    if (!closures_[x]) ++count_;
    closures_[x] = std::move(closure);
  }

  bool has(std::size_t x) const {
    if (x >= n_) throw invalid_argument_error("element index out of range");
    return closures_[x].has_value();
  }

  const ElementSet& closure_of(std::size_t x) const {
    if (x >= n_) throw invalid_argument_error("element index out of range");
    if (!closures_[x]) throw invalid_argument_error("element not in structuring domain");
    return *closures_[x];
  }

  std::vector<std::size_t> domain() const {
    std::vector<std::size_t> out;
    out.reserve(count_);
    for (std::size_t x = 0; x < n_; ++x)
      if (closures_[x]) out.push_back(x);
    return out;
  }

  // Visits (x, closure) in ascending x.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t x = 0; x < n_; ++x)
      if (closures_[x]) fn(x, *closures_[x]);
  }

  friend bool operator==(const Structuring& a, const Structuring& b) {
    return a.n_ == b.n_ && a.closures_ == b.closures_;
  }

private:
  std::size_t n_;
  std::vector<std::optional<ElementSet>> closures_;
  std::size_t count_;
};

// Text format: one line `<x>: <y1> <y2> ...` per domain element;
// elements with no line are outside the domain.
inline Structuring parse_structuring(std::istream& in, std::size_t universe_size) {
  Structuring s(universe_size);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::tokenize_colon_line(line);
    if (toks.empty()) continue;
    if (toks.size() < 2 || toks[1] != ":")
      throw parse_error("expected `<x>: <members>`", line_no, 1);
    std::size_t x = detail::parse_index(toks[0], line_no, "element index");
    if (x >= universe_size)
      throw invalid_argument_error("structuring references element " + std::to_string(x) +
                                   " outside a universe of " +
                                   std::to_string(universe_size));
    ElementSet f(universe_size);
    for (std::size_t t = 2; t < toks.size(); ++t) {
      std::size_t y = detail::parse_index(toks[t], line_no, "element index");
      if (y >= universe_size)
        throw invalid_argument_error("structuring references element " +
                                     std::to_string(y) + " outside a universe of " +
                                     std::to_string(universe_size));
      f.insert(y);
    }
    s.set(x, std::move(f));
  }
  return s;
}

inline Structuring parse_structuring(const std::string& text, std::size_t universe_size) {
  std::istringstream in(text);
  return parse_structuring(in, universe_size);
}

inline void write_structuring(std::ostream& out, const Structuring& s) {
  s.for_each([&](std::size_t x, const ElementSet& f) {
    out << x << ':';
    f.for_each([&](std::size_t y) { out << ' ' << y; });
    out << '\n';
  });
}

inline std::string to_string(const Structuring& s) {
  std::ostringstream out;
  write_structuring(out, s);
  return out.str();
}

}  // namespace lps
