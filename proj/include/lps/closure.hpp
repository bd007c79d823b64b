#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lps/dnf.hpp"
#include "lps/element_set.hpp"
#include "lps/errors.hpp"
#include "lps/neighborhoods.hpp"
#include "lps/structuring.hpp"

namespace lps {

// q_i(A, x): does V_i(x) meet A?
inline bool predicate_eval(const NeighborhoodFamily& family, std::size_t i,
                           const ElementSet& A, std::size_t x) {
  if (A.universe_size() != family.n())
    throw invalid_argument_error("set over a different universe");
  return family.neighborhood(i, x).intersects(A);
}

namespace detail {

inline void check_dnf_fits(const NeighborhoodFamily& family, const Dnf& q) {
  if (q.max_index() > family.k())
    throw invalid_argument_error("model references predicate q" +
                                 std::to_string(q.max_index()) +
                                 " but the family has k=" + std::to_string(family.k()));
}

inline void check_weights_fit(const NeighborhoodFamily& family, const WeightVector& w) {
  if (w.k() != family.k())
    throw invalid_argument_error("weight vector has " + std::to_string(w.k()) +
                                 " weights but the family has k=" +
                                 std::to_string(family.k()));
}

inline void check_universe(const NeighborhoodFamily& family, const ElementSet& A) {
  if (A.universe_size() != family.n())
    throw invalid_argument_error("set over a different universe");
}

}  // namespace detail

// One application of the DNF operator: A plus every x for which some
// clause holds entirely. Not iterated.
inline ElementSet pseudo_closure_dnf(const NeighborhoodFamily& family, const Dnf& q,
                                     const ElementSet& A) {
  detail::check_dnf_fits(family, q);
  detail::check_universe(family, A);
  ElementSet out = A;
  for (std::size_t x = 0; x < family.n(); ++x) {
    if (out.contains(x)) continue;
    for (const Clause& c : q.clauses()) {
      bool all = true;
      for (std::uint16_t i : c.indices())
        if (!family.neighborhood(i, x).intersects(A)) {
          all = false;
          break;
        }
      if (all) {
        out.insert(x);
        break;
      }
    }
  }
  return out;
}

// One application of the weighted operator: A plus every x whose
// satisfied-neighborhood weights sum to at least w_0. The sum is
// accumulated in ascending index order, which keeps the comparison
// reproducible and monotone under predicate growth.
inline ElementSet pseudo_closure_weighted(const NeighborhoodFamily& family,
                                          const WeightVector& w, const ElementSet& A) {
  detail::check_weights_fit(family, w);
  detail::check_universe(family, A);
  ElementSet out = A;
  for (std::size_t x = 0; x < family.n(); ++x) {
    if (out.contains(x)) continue;
    double sum = 0;
    for (std::size_t i = 1; i <= family.k(); ++i)
      if (family.neighborhood(i, x).intersects(A)) sum += w.weights()[i - 1];
    if (sum >= w.w0()) out.insert(x);
  }
  return out;
}

// Incremental fixpoint engine for one (family, model) pair. A closure
// run is a BFS over the reverse adjacency: when y joins the set,
// every x with y in V_i(x) gains predicate i, and x joins as soon as
// one clause completes (or its weight sum clears w_0). Operators here
// are isotone, so this reaches exactly the fixpoint of the iterated
// single-step operator. Scratch arrays are epoch-stamped and reused
// across runs without clearing; one engine per thread.
class ClosureEngine {
public:
  ClosureEngine(const NeighborhoodFamily& family, const Dnf& q)
      : family_(family), weighted_(false), pred_clauses_(family.k()) {
    detail::check_dnf_fits(family, q);
    for (const Clause& c : q.clauses()) {
      const auto ci = static_cast<std::uint32_t>(clause_sizes_.size());
      clause_sizes_.push_back(static_cast<std::uint16_t>(c.size()));
      for (std::uint16_t i : c.indices()) pred_clauses_[i - 1].push_back(ci);
    }
    init_scratch();
  }

  ClosureEngine(const NeighborhoodFamily& family, const WeightVector& w)
      : family_(family), weighted_(true), weights_(w.weights()), w0_(w.w0()) {
    detail::check_weights_fit(family, w);
    init_scratch();
  }

  const NeighborhoodFamily& family() const noexcept { return family_; }

  ElementSet closure(const ElementSet& seed) {
    detail::check_universe(family_, seed);
    bump_epoch();
    ElementSet result = seed;
    queue_.clear();
    seed.for_each([&](std::size_t x) { queue_.push_back(static_cast<std::uint32_t>(x)); });
    const std::size_t k = family_.k();
    const std::size_t n = family_.n();
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::uint32_t y = queue_[head];
      for (std::size_t i = 1; i <= k; ++i) {
        for (std::uint32_t x : family_.sources(i, y)) {
          if (result.contains(x)) continue;
          const std::size_t ps = (i - 1) * n + x;
          if (pred_epoch_[ps] == epoch_) continue;
          pred_epoch_[ps] = epoch_;
          if (fires(i, x, n)) {
            result.insert(x);
            queue_.push_back(x);
          }
        }
      }
    }
    return result;
  }

  ElementSet closure_of(std::size_t x) {
    return closure(ElementSet::singleton(family_.n(), x));
  }

private:
  void init_scratch() {
    const std::size_t n = family_.n();
    pred_epoch_.assign(family_.k() * n, 0);
    if (!weighted_) {
      clause_cnt_.assign(clause_sizes_.size() * n, 0);
      cnt_epoch_.assign(clause_sizes_.size() * n, 0);
    }
    epoch_ = 0;
  }

  void bump_epoch() {
    if (++epoch_ == 0) {  // wrapped: stale stamps would read as current
      std::fill(pred_epoch_.begin(), pred_epoch_.end(), 0);
      std::fill(cnt_epoch_.begin(), cnt_epoch_.end(), 0);
      epoch_ = 1;
    }
  }

  // Predicate (i, x) just flipped true; decide whether x joins now.
  bool fires(std::size_t i, std::uint32_t x, std::size_t n) {
    if (weighted_) {
      double sum = 0;
      for (std::size_t j = 0; j < weights_.size(); ++j)
        if (pred_epoch_[j * n + x] == epoch_) sum += weights_[j];
      return sum >= w0_;
    }
    bool complete = false;
    for (std::uint32_t ci : pred_clauses_[i - 1]) {
      const std::size_t cs = static_cast<std::size_t>(ci) * n + x;
      if (cnt_epoch_[cs] != epoch_) {
        cnt_epoch_[cs] = epoch_;
        clause_cnt_[cs] = 0;
      }
      if (++clause_cnt_[cs] == clause_sizes_[ci]) complete = true;
    }
    return complete;
  }

  const NeighborhoodFamily& family_;
  bool weighted_;
  std::vector<double> weights_;
  double w0_ = 0;
  std::vector<std::uint16_t> clause_sizes_;
  std::vector<std::vector<std::uint32_t>> pred_clauses_;
  std::vector<std::uint32_t> pred_epoch_;
  std::vector<std::uint16_t> clause_cnt_;
  std::vector<std::uint32_t> cnt_epoch_;
  std::vector<std::uint32_t> queue_;
  std::uint32_t epoch_ = 0;
};

// F(A): fixpoint of the pseudo-closure. Reaches it in at most n
// applications since every non-final application strictly grows A.
inline ElementSet closure(const NeighborhoodFamily& family, const Dnf& q,
                          const ElementSet& A) {
  return ClosureEngine(family, q).closure(A);
}

inline ElementSet closure(const NeighborhoodFamily& family, const WeightVector& w,
                          const ElementSet& A) {
  return ClosureEngine(family, w).closure(A);
}

// x -> F({x}) over a chosen domain.
template <typename Model>
Structuring elementary_closures(const NeighborhoodFamily& family, const Model& model,
                                const std::vector<std::size_t>& domain) {
  ClosureEngine engine(family, model);
  Structuring s(family.n());
  for (std::size_t x : domain) s.set(x, engine.closure_of(x));
  return s;
}

// x -> F({x}) for every x in the universe.
template <typename Model>
Structuring elementary_closures(const NeighborhoodFamily& family, const Model& model) {
  ClosureEngine engine(family, model);
  Structuring s(family.n());
  for (std::size_t x = 0; x < family.n(); ++x) s.set(x, engine.closure_of(x));
  return s;
}

}  // namespace lps
