#pragma once

// Multiple-instance view of the learning task: every element x and
// every set A with {x} <= A < F*({x}) demands at least one true
// propagation (a positive bag), and every y outside F*({x}) forbids
// all propagations from the sub-lattice of {x} (a negative bag).
// Totals and coverage run in closed form over equivalence classes of
// elements sharing a closure; full bag materialisation is exponential
// and therefore capped, intended for cross-checking only.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "lps/closure.hpp"
#include "lps/element_set.hpp"
#include "lps/errors.hpp"
#include "lps/neighborhoods.hpp"
#include "lps/structuring.hpp"

namespace lps {

using big_int = boost::multiprecision::cpp_int;

// Wide float for score comparisons. Bag counts grow like 2^|F*|, so
// two candidates can differ by amounts far below double resolution
// after the log; 100 decimal digits keep such gaps visible for
// closures of up to roughly 300 elements.
using big_float = boost::multiprecision::cpp_bin_float_100;

// Size gates for the exponential code paths. Counting formulas touch
// 2^|F*| and 2^|class|; the brute-force generator touches 2^n.
struct BagCaps {
  std::size_t max_closure_size = 62;
  std::size_t max_class_size = 20;
  std::size_t max_oracle_universe = 16;
};

struct EquivalenceClass {
  std::vector<std::size_t> members;  // ascending
  ElementSet closure;                // the shared elementary closure
};

// Groups the structuring's domain by identical closure. Classes are
// ordered by their smallest member.
inline std::vector<EquivalenceClass> equivalence_partition(const Structuring& s) {
  std::map<ElementSet, std::vector<std::size_t>> by_closure;
  s.for_each([&](std::size_t x, const ElementSet& f) { by_closure[f].push_back(x); });
  std::vector<EquivalenceClass> classes;
  classes.reserve(by_closure.size());
  for (auto& [closure, members] : by_closure)
    classes.push_back({std::move(members), closure});
  std::sort(classes.begin(), classes.end(),
            [](const EquivalenceClass& a, const EquivalenceClass& b) {
              return a.members.front() < b.members.front();
            });
  return classes;
}

// |L[bottom, top]| = 2^(|top| - |bottom|); the exclusive form L[.,.[
// drops the top itself.
inline big_int sublattice_size(const ElementSet& bottom, const ElementSet& top,
                               bool exclusive_top) {
  if (bottom.universe_size() != top.universe_size())
    throw invalid_argument_error("sublattice endpoints live in different universes");
  if (!bottom.is_subset_of(top))
    throw invalid_argument_error("sublattice bottom is not contained in its top");
  big_int size = big_int(1) << (top.count() - bottom.count());
  if (exclusive_top) size -= 1;
  return size;
}

namespace detail {

inline void check_same_universe(const Structuring& s_star, const Structuring& s_q) {
  if (s_star.universe_size() != s_q.universe_size())
    throw invalid_argument_error("structurings live in different universes");
}

}  // namespace detail

// B+ = sum over classes of  sum_{i=1..|A_k|} (-1)^(i+1) C(|A_k|,i) (2^(|F*_k|-i) - 1).
// For a singleton class this is 2^(|F*|-1) - 1, the size of L[{x}, F*({x})[.
inline big_int total_positive_bags(const Structuring& s_star, const BagCaps& caps = {}) {
  big_int total = 0;
  for (const EquivalenceClass& cls : equivalence_partition(s_star)) {
    const std::size_t t = cls.closure.count();
    if (t > caps.max_closure_size)
      throw size_error("closure of " + std::to_string(t) +
                       " elements exceeds the counting cap of " +
                       std::to_string(caps.max_closure_size));
    const std::size_t s = cls.members.size();
    big_int binom = 1;
    for (std::size_t i = 1; i <= s; ++i) {
      binom = binom * static_cast<unsigned>(s - i + 1) / static_cast<unsigned>(i);
      const big_int term = binom * ((big_int(1) << (t - i)) - 1);
      if (i % 2 == 1)
        total += term;
      else
        total -= term;
    }
  }
  return total;
}

// B- = sum_x |E \ F*({x})|: one bag per (x, forbidden y).
inline big_int total_negative_bags(const Structuring& s_star) {
  big_int total = 0;
  const std::size_t n = s_star.universe_size();
  s_star.for_each(
      [&](std::size_t, const ElementSet& f) { total += n - f.count(); });
  return total;
}

struct Instance {
  ElementSet source;        // A
  std::size_t target = 0;   // the element the propagation would reach
  std::vector<bool> features;  // q_1(A,target) .. q_k(A,target)
};

struct Bag {
  bool positive = true;
  std::vector<std::size_t> origin;  // engendering elements, ascending
  ElementSet source;                // positive bags: the shared A
  std::size_t target = 0;           // negative bags: the forbidden y
  std::vector<Instance> instances;
};

namespace detail {

// All A with bottom <= A <= top (A != top when exclusive_top), in
// ascending bitmask order. Only used under the oracle universe cap.
inline std::vector<ElementSet> enumerate_sublattice(const ElementSet& bottom,
                                                    const ElementSet& top,
                                                    bool exclusive_top) {
  std::vector<std::size_t> free;
  top.for_each([&](std::size_t y) {
    if (!bottom.contains(y)) free.push_back(y);
  });
  std::vector<ElementSet> out;
  out.reserve(std::size_t{1} << free.size());
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << free.size()); ++mask) {
    ElementSet a = bottom;
    for (std::size_t j = 0; j < free.size(); ++j)
      if (mask & (std::uint32_t{1} << j)) a.insert(free[j]);
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end());
  if (exclusive_top) out.pop_back();  // the top sorts last
  return out;
}

inline std::vector<bool> instance_features(const NeighborhoodFamily& fam,
                                           const ElementSet& a, std::size_t y) {
  std::vector<bool> f;
  f.reserve(fam.k());
  for (std::size_t i = 1; i <= fam.k(); ++i) f.push_back(predicate_eval(fam, i, a, y));
  return f;
}

}  // namespace detail

// Materialises every bag. Positive bags engendered by several elements
// of one class appear once, keyed by their shared source set; the
// origin field lists exactly the members contained in that set.
inline std::vector<Bag> generate_bags_bruteforce(const NeighborhoodFamily& fam,
                                                 const Structuring& s_star,
                                                 const BagCaps& caps = {}) {
  const std::size_t n = s_star.universe_size();
  if (fam.n() != n)
    throw invalid_argument_error("family and structuring universes differ");
  // The 30-element backstop keeps the uint32 subset masks well-defined
  // no matter how the cap is configured.
  if (n > caps.max_oracle_universe || n > 30)
    throw size_error("brute-force bag generation over " + std::to_string(n) +
                     " elements exceeds the cap of " +
                     std::to_string(std::min<std::size_t>(caps.max_oracle_universe, 30)));
  std::vector<Bag> out;
  for (const EquivalenceClass& cls : equivalence_partition(s_star)) {
    std::set<ElementSet> sources;
    for (std::size_t x : cls.members)
      for (const ElementSet& a : detail::enumerate_sublattice(
               ElementSet::singleton(n, x), cls.closure, true))
        sources.insert(a);
    for (const ElementSet& a : sources) {
      Bag bag;
      bag.positive = true;
      for (std::size_t x : cls.members)
        if (a.contains(x)) bag.origin.push_back(x);
      bag.source = a;
      (cls.closure - a).for_each([&](std::size_t y) {
        bag.instances.push_back({a, y, detail::instance_features(fam, a, y)});
      });
      out.push_back(std::move(bag));
    }
  }
  s_star.for_each([&](std::size_t x, const ElementSet& top) {
    for (std::size_t y = 0; y < n; ++y) {
      if (top.contains(y)) continue;
      Bag bag;
      bag.positive = false;
      bag.origin.push_back(x);
      bag.source = ElementSet::singleton(n, x);
      bag.target = y;
      for (const ElementSet& a :
           detail::enumerate_sublattice(ElementSet::singleton(n, x), top, false))
        bag.instances.push_back({a, y, detail::instance_features(fam, a, y)});
      out.push_back(std::move(bag));
    }
  });
  return out;
}

// Estimated number of positive bags covered by the candidate, under
// the assumption that covering F_Q*({x}) = F_Q({x}) n F*({x}) covers
// the whole propagation. The per-class inclusion-exclusion
//   b_Q+(A_k) = sum_{i} (-1)^(i+1) sum_{B in comb(A_k,i)}
//               [ (2^(|F*_k|-i) - 1) - r_Q+(B) ]
//   r_Q+(B)   = |U_{x in B} L[F_Q*({x}) u B, F*_k]| - 1
// telescopes to a direct count over the proper subsets A of F*_k:
//   b_Q+(A_k) = #{ A : exists x in A n A_k with F_Q*({x}) not in A }
// whose complement ("every present member's true part is inside A")
// splits by S = A n A_k into 2^s closed-form terms:
//   b_Q+ = 2^t - sum_{S in P(A_k), U_S n (A_k\S) = 0} 2^(t - |A_k u U_S|)
// with U_S the union of the true parts over S (a term vanishes when
// that union forces in a member excluded from S).
inline big_int covered_positive_estimate(const std::vector<EquivalenceClass>& classes,
                                         const Structuring& s_q,
                                         const BagCaps& caps = {}) {
  big_int total = 0;
  for (const EquivalenceClass& cls : classes) {
    if (cls.closure.universe_size() != s_q.universe_size())
      throw invalid_argument_error("structurings live in different universes");
    const std::size_t s = cls.members.size();
    const std::size_t t = cls.closure.count();
    if (s > caps.max_class_size || s > 30)
      throw size_error("equivalence class of " + std::to_string(s) +
                       " elements exceeds the estimation cap of " +
                       std::to_string(std::min<std::size_t>(caps.max_class_size, 30)));
    std::vector<ElementSet> true_part;  // F_Q*({x}) per member
    true_part.reserve(s);
    for (std::size_t x : cls.members) true_part.push_back(s_q.closure_of(x) & cls.closure);
    ElementSet member_set(cls.closure.universe_size());
    for (std::size_t x : cls.members) member_set.insert(x);

    big_int good = 0;  // subsets of F*_k with no under-expanded member
    auto dfs = [&](auto&& self, std::size_t j, const ElementSet& chosen,
                   const ElementSet& unioned) -> void {
      if (j == s) {
        if (((unioned & member_set) - chosen).count() == 0)
          good += big_int(1) << (t - (unioned | member_set).count());
        return;
      }
      self(self, j + 1, chosen, unioned);  // member j absent from S
      ElementSet with_member = chosen;
      with_member.insert(cls.members[j]);
      self(self, j + 1, with_member, unioned | true_part[j]);
    };
    dfs(dfs, 0, ElementSet(cls.closure.universe_size()),
        ElementSet(cls.closure.universe_size()));
    total += (big_int(1) << t) - good;
  }
  return total;
}

inline big_int covered_positive_estimate(const Structuring& s_star,
                                         const Structuring& s_q,
                                         const BagCaps& caps = {}) {
  detail::check_same_universe(s_star, s_q);
  return covered_positive_estimate(equivalence_partition(s_star), s_q, caps);
}

// B-_Q = sum_x |F_Q({x}) \ F*({x})|: propagations reaching forbidden
// elements, counted once per (x, y) pair.
inline big_int covered_negative(const Structuring& s_star, const Structuring& s_q) {
  detail::check_same_universe(s_star, s_q);
  big_int total = 0;
  s_star.for_each([&](std::size_t x, const ElementSet& f_star) {
    total += (s_q.closure_of(x) - f_star).count();
  });
  return total;
}

struct BagAccounts {
  big_int total_positive;
  big_int total_negative;
  big_int covered_positive_estimate;
  big_int covered_negative;
};

inline BagAccounts bag_accounts(const Structuring& s_star, const Structuring& s_q,
                                const BagCaps& caps = {}) {
  return {total_positive_bags(s_star, caps), total_negative_bags(s_star),
          covered_positive_estimate(s_star, s_q, caps),
          covered_negative(s_star, s_q)};
}

// log2 of a positive big integer, via the top 53 bits.
inline double log2_big(const big_int& v) {
  if (v <= 0) throw invalid_argument_error("log2 of a non-positive count");
  const std::size_t m = boost::multiprecision::msb(v);
  if (m <= 52) return std::log2(v.convert_to<double>());
  const big_int top_bits = v >> (m - 52);
  return std::log2(top_bits.convert_to<double>()) + static_cast<double>(m - 52);
}

// h(Q) = log2(B+_Q) / (log2(B+_Q) + B-_Q + p), and 0 outright when
// B+_Q <= 1: such a candidate has learned essentially nothing.
// The overload with a precomputed partition saves re-grouping the
// target when one structuring is scored against many candidates.
inline double intrinsic_measure(const std::vector<EquivalenceClass>& classes,
                                const Structuring& s_star, const Structuring& s_q,
                                double p = 1.0, const BagCaps& caps = {}) {
  if (!(p >= 0))
    throw invalid_argument_error("intrinsic pull parameter must be non-negative");
  const big_int covered = covered_positive_estimate(classes, s_q, caps);
  if (covered <= 1) return 0.0;
  const double lg = log2_big(covered);
  const double neg = covered_negative(s_star, s_q).convert_to<double>();
  return lg / (lg + neg + p);
}

inline double intrinsic_measure(const Structuring& s_star, const Structuring& s_q,
                                double p = 1.0, const BagCaps& caps = {}) {
  return intrinsic_measure(equivalence_partition(s_star), s_star, s_q, p, caps);
}

// Wide-precision log2. Counts below 2^332 convert to big_float exactly,
// which covers every count the cap on class exponents admits.
inline big_float log2_big_precise(const big_int& v) {
  if (v <= 0) throw invalid_argument_error("log2 of a non-positive count");
  return log(big_float(v)) / log(big_float(2));
}

// Same measure evaluated in big_float. Search loops compare candidates
// with this variant: nested submodels on large universes produce counts
// whose log2 values differ by less than one double ulp, so a 53-bit
// comparison would report a tie where the true measure improves.
inline big_float intrinsic_measure_precise(
    const std::vector<EquivalenceClass>& classes, const Structuring& s_star,
    const Structuring& s_q, double p = 1.0, const BagCaps& caps = {}) {
  if (!(p >= 0))
    throw invalid_argument_error("intrinsic pull parameter must be non-negative");
  const big_int covered = covered_positive_estimate(classes, s_q, caps);
  if (covered <= 1) return big_float(0);
  const big_float lg = log2_big_precise(covered);
  const big_float neg(covered_negative(s_star, s_q));
  return lg / (lg + neg + big_float(p));
}

inline big_float intrinsic_measure_precise(const Structuring& s_star,
                                           const Structuring& s_q, double p = 1.0,
                                           const BagCaps& caps = {}) {
  return intrinsic_measure_precise(equivalence_partition(s_star), s_star, s_q, p,
                                   caps);
}

namespace detail {

inline void write_set_inline(std::ostream& out, const ElementSet& s) {
  out << '{';
  bool first = true;
  s.for_each([&](std::size_t y) {
    if (!first) out << ',';
    out << y;
    first = false;
  });
  out << '}';
}

}  // namespace detail

// Line-oriented dump:  + x A : y1 y2 ...   /   - x y : A1 ; A2 ; ...
// with x the smallest engendering element and sets written {1,2}.
inline void write_bags(std::ostream& out, const std::vector<Bag>& bags) {
  for (const Bag& bag : bags) {
    if (bag.positive) {
      out << "+ " << bag.origin.front() << ' ';
      detail::write_set_inline(out, bag.source);
      out << " :";
      for (const Instance& inst : bag.instances) out << ' ' << inst.target;
    } else {
      out << "- " << bag.origin.front() << ' ' << bag.target << " :";
      for (std::size_t j = 0; j < bag.instances.size(); ++j) {
        if (j > 0) out << " ;";
        out << ' ';
        detail::write_set_inline(out, bag.instances[j].source);
      }
    }
    out << '\n';
  }
}

inline std::string to_string(const std::vector<Bag>& bags) {
  std::ostringstream out;
  write_bags(out, bags);
  return out.str();
}

}  // namespace lps
