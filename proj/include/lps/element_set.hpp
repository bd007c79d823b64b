#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "lps/errors.hpp"

namespace lps {

// The finite ground set E. Elements are dense indices 0..n-1; labels
// exist for display only and default to the decimal index.
class Universe {
public:
  explicit Universe(std::size_t n) : labels_() {
    if (n == 0) throw invalid_argument_error("universe must be non-empty");
    labels_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }

  explicit Universe(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw invalid_argument_error("universe must be non-empty");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j])
          throw invalid_argument_error("duplicate element label: " + labels_[i]);
  }

  std::size_t size() const noexcept { return labels_.size(); }

  const std::string& label(std::size_t x) const {
    if (x >= labels_.size()) throw invalid_argument_error("element index out of range");
    return labels_[x];
  }

private:
  std::vector<std::string> labels_;
};

// A subset of a universe of fixed size n, stored as packed bits.
// Word 0 holds elements 0..63, so comparing words from the highest
// down gives the "ascending bitmask" numeric order on subsets.
class ElementSet {
public:
  ElementSet() : n_(0) {}

  explicit ElementSet(std::size_t universe_size)
      : n_(universe_size), words_((universe_size + 63) / 64, 0) {}

  static ElementSet singleton(std::size_t universe_size, std::size_t x) {
    ElementSet s(universe_size);
    s.insert(x);
    return s;
  }

  static ElementSet full(std::size_t universe_size) {
    ElementSet s(universe_size);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  static ElementSet of(std::size_t universe_size, std::initializer_list<std::size_t> xs) {
    ElementSet s(universe_size);
    for (auto x : xs) s.insert(x);
    return s;
  }

  std::size_t universe_size() const noexcept { return n_; }

  bool contains(std::size_t x) const {
    check(x);
    return (words_[x >> 6] >> (x & 63)) & 1u;
  }

  void insert(std::size_t x) {
    check(x);
    words_[x >> 6] |= std::uint64_t{1} << (x & 63);
  }

  void erase(std::size_t x) {
    check(x);
    words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool empty() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool intersects(const ElementSet& o) const {
    match(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  bool is_subset_of(const ElementSet& o) const {
    match(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  ElementSet& operator|=(const ElementSet& o) {
    match(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  ElementSet& operator&=(const ElementSet& o) {
    match(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  // Set difference.
  ElementSet& operator-=(const ElementSet& o) {
    match(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

  // Numeric order of the subset read as an integer (element 0 = least
  // significant bit). Total order used wherever determinism matters.
  friend bool operator<(const ElementSet& a, const ElementSet& b) {
    a.match(b);
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    return false;
  }

  // Smallest member; set must be non-empty.
  std::size_t min() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return (i << 6) + static_cast<std::size_t>(std::countr_zero(words_[i]));
    throw invalid_argument_error("min() of an empty set");
  }

  // Visits members in ascending index order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        fn((i << 6) + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t x) { out.push_back(x); });
    return out;
  }

  std::size_t hash() const noexcept {
    // splitmix64 finalizer folded over the words.
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ n_;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      std::uint64_t z = h;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      h = z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }

private:
  void check(std::size_t x) const {
    if (x >= n_) throw invalid_argument_error("element index out of range");
  }

  void match(const ElementSet& o) const {
    if (n_ != o.n_) throw invalid_argument_error("element sets over different universes");
  }

  void trim() {
    if (n_ & 63) words_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
  }

  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

}  // namespace lps
