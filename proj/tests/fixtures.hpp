#pragma once

// Hand-built instances shared across the suite: the four-element
// running example with its neighborhood family, the two target
// structurings it can(not) realize, the measure-comparison tables,
// and the worked coverage instances.

#include "lps/closure.hpp"
#include "lps/dnf.hpp"
#include "lps/element_set.hpp"
#include "lps/neighborhoods.hpp"
#include "lps/structuring.hpp"

namespace fixtures {

using lps::Dnf;
using lps::ElementSet;
using lps::NeighborhoodFamily;
using lps::NeighborhoodFamilyBuilder;
using lps::Structuring;

// Elements of the running example, in file order.
constexpr std::size_t A = 0, B = 1, C = 2, D = 3;

inline ElementSet set4(std::initializer_list<std::size_t> xs) {
  return ElementSet::of(4, xs);
}

// The k=4 family over {a,b,c,d}. Directed edges below mean
// "y belongs to V_i(x)"; the builder adds the reflexive member.
inline NeighborhoodFamily four_element_family() {
  NeighborhoodFamilyBuilder b(4, 4);
  b.add(1, A, B).add(1, B, A).add(1, D, B);
  b.add(2, B, A).add(2, B, C).add(2, D, C);
  b.add(3, D, C).add(3, C, B);
  b.add(4, A, B).add(4, B, C).add(4, C, B);
  return b.build();
}

inline Dnf target_q1() { return lps::parse_dnf("(q1 & q2) | q3"); }
inline Dnf target_q2() { return lps::parse_dnf("(q1 & q2) | (q3 & q4)"); }

// Elementary closures of target_q1 over the family above.
inline Structuring s_star_1() {
  Structuring s(4);
  s.set(A, set4({A, B, C, D}));
  s.set(B, set4({B, C, D}));
  s.set(C, set4({C, D}));
  s.set(D, set4({D}));
  return s;
}

// Elementary closures of target_q2: same as s_star_1 except c stays put.
inline Structuring s_star_2() {
  Structuring s(4);
  s.set(A, set4({A, B, C, D}));
  s.set(B, set4({B, C, D}));
  s.set(C, set4({C}));
  s.set(D, set4({D}));
  return s;
}

// The worked precision/recall table: target equals s_star_2, learned
// closures are the imperfect ones giving P = 8/11, R = 8/9.
inline Structuring measure_example_learned() {
  Structuring s(4);
  s.set(A, set4({A, C, D}));
  s.set(B, set4({A, B, C, D}));
  s.set(C, set4({C, D}));
  s.set(D, set4({C, D}));
  return s;
}

// Two equal-F-measure candidates distinguished by the intrinsic
// measure (the potential-for-future-growth comparison).
inline Structuring potential_target() {
  Structuring s(4);
  s.set(A, set4({A, B, C, D}));
  s.set(B, set4({B}));
  s.set(C, set4({C, D}));
  s.set(D, set4({D}));
  return s;
}

inline Structuring potential_learned_better() {
  Structuring s(4);
  s.set(A, set4({A, D}));
  s.set(B, set4({B}));
  s.set(C, set4({C}));
  s.set(D, set4({D}));
  return s;
}

inline Structuring potential_learned_worse() {
  Structuring s(4);
  s.set(A, set4({A}));
  s.set(B, set4({B}));
  s.set(C, set4({C, D}));
  s.set(D, set4({D}));
  return s;
}

// Coverage worked example: two elements sharing the full universe as
// closure (one equivalence class {a,c}), learned closures {a,b} and
// {c,d}. Expected covered-positive estimate: 7 of the 11 class bags.
inline Structuring coverage_worked_target() {
  Structuring s(4);
  s.set(A, set4({A, B, C, D}));
  s.set(C, set4({A, B, C, D}));
  return s;
}

inline Structuring coverage_worked_learned() {
  Structuring s(4);
  s.set(A, set4({A, B}));
  s.set(C, set4({C, D}));
  return s;
}

// Single-element variant: domain {a}, F*(a) = E, F_Q(a) = {a,b};
// expected estimate 7 - 3 = 4.
inline Structuring coverage_single_target() {
  Structuring s(4);
  s.set(A, set4({A, B, C, D}));
  return s;
}

inline Structuring coverage_single_learned() {
  Structuring s(4);
  s.set(A, set4({A, B}));
  return s;
}

inline Structuring identity_structuring(std::size_t n) {
  Structuring s(n);
  for (std::size_t x = 0; x < n; ++x) s.set(x, ElementSet::singleton(n, x));
  return s;
}

}  // namespace fixtures
