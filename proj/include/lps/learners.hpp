#pragma once

// The four learning strategies: genetic search over weight vectors or
// over DNFs (both scored by the extrinsic F-measure), greedy clause
// growth under the extrinsic measure, and its multiple-instance twin
// under the intrinsic measure. They share one accounting rule: a
// structuring call is one computation of the learned elementary
// closures over the target's domain, and every budget is stated in
// that unit.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lps/bags.hpp"
#include "lps/closure.hpp"
#include "lps/dnf.hpp"
#include "lps/errors.hpp"
#include "lps/measures.hpp"
#include "lps/neighborhoods.hpp"
#include "lps/rng.hpp"
#include "lps/structuring.hpp"

namespace lps {

enum class Algorithm { genetic_numeric, genetic_logical, greedy, mi };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::genetic_numeric: return "genetic_numeric";
    case Algorithm::genetic_logical: return "genetic_logical";
    case Algorithm::greedy: return "greedy";
    case Algorithm::mi: return "mi";
  }
  throw invalid_argument_error("unmapped algorithm value");
}

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "genetic_numeric") return Algorithm::genetic_numeric;
  if (name == "genetic_logical") return Algorithm::genetic_logical;
  if (name == "greedy") return Algorithm::greedy;
  if (name == "mi") return Algorithm::mi;
  throw config_error("unknown algorithm '" + name + "'");
}

struct LearnerConfig {
  Algorithm algorithm = Algorithm::greedy;
  std::size_t max_iter = 50;
  std::size_t beam_size = 1;
  std::size_t initial_pop = 100;
  std::size_t required_iter_convergence = 10;
  double mutation_rate = 0.3;
  double crossover_rate = 0.9;
  double p = 1.0;
  std::uint64_t rng_seed = 0;
};

inline void validate(const LearnerConfig& c) {
  if (c.beam_size < 1) throw config_error("beam_size must be at least 1");
  if (!(c.p >= 0)) throw config_error("p must be non-negative");
  if (!(c.mutation_rate >= 0 && c.mutation_rate <= 1))
    throw config_error("mutation_rate must lie in [0, 1]");
  if (!(c.crossover_rate >= 0 && c.crossover_rate <= 1))
    throw config_error("crossover_rate must lie in [0, 1]");
  if (c.algorithm == Algorithm::genetic_numeric ||
      c.algorithm == Algorithm::genetic_logical) {
    if (c.initial_pop < 2) throw config_error("genetic search needs initial_pop >= 2");
    if (c.required_iter_convergence < 1)
      throw config_error("required_iter_convergence must be at least 1");
    if (c.max_iter < 1) throw config_error("genetic search needs at least one generation");
  }
}

// Flat key-value text, one `key = value` per line ('=' optional),
// '#' starts a comment. Keys are exactly the LearnerConfig fields.
inline LearnerConfig parse_learner_config(std::istream& in) {
  LearnerConfig c;
  std::string line;
  std::size_t line_no = 0;
  auto bad = [&](const std::string& what) {
    return config_error("learner config line " + std::to_string(line_no) + ": " + what);
  };
  auto as_u64 = [&](const std::string& key, const std::string& value) -> std::uint64_t {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
      v = std::stoull(value, &used);
    } catch (const std::invalid_argument&) {
      throw bad("malformed value '" + value + "' for " + key);
    } catch (const std::out_of_range&) {
      throw bad("value '" + value + "' for " + key + " is out of range");
    }
    if (used != value.size()) throw bad("malformed value '" + value + "' for " + key);
    return v;
  };
  auto as_f64 = [&](const std::string& key, const std::string& value) -> double {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::invalid_argument&) {
      throw bad("malformed value '" + value + "' for " + key);
    } catch (const std::out_of_range&) {
      throw bad("value '" + value + "' for " + key + " is out of range");
    }
    if (used != value.size()) throw bad("malformed value '" + value + "' for " + key);
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream fields(line);
    std::string key, value, rest;
    if (!(fields >> key)) continue;
    if (!(fields >> value) || fields >> rest)
      throw bad("expected 'key = value'");
    if (key == "algorithm") {
      try {
        c.algorithm = parse_algorithm(value);
      } catch (const config_error&) {
        throw bad("unknown algorithm '" + value + "'");
      }
    } else if (key == "max_iter") {
      c.max_iter = as_u64(key, value);
    } else if (key == "beam_size") {
      c.beam_size = as_u64(key, value);
    } else if (key == "initial_pop") {
      c.initial_pop = as_u64(key, value);
    } else if (key == "required_iter_convergence") {
      c.required_iter_convergence = as_u64(key, value);
    } else if (key == "mutation_rate") {
      c.mutation_rate = as_f64(key, value);
    } else if (key == "crossover_rate") {
      c.crossover_rate = as_f64(key, value);
    } else if (key == "p") {
      c.p = as_f64(key, value);
    } else if (key == "rng_seed") {
      c.rng_seed = as_u64(key, value);
    } else {
      throw bad("unknown key '" + key + "'");
    }
  }
  return c;
}

inline LearnerConfig parse_learner_config(const std::string& text) {
  std::istringstream in(text);
  return parse_learner_config(in);
}

struct LearnResult {
  std::variant<Dnf, WeightVector> model;
  double final_score = 0;    // objective value of the returned model
  double extrinsic_f = 0;    // extrinsic F of the returned model
  Structuring structuring;   // learned closures over the target domain
  std::size_t iterations = 0;
  std::size_t structuring_calls = 0;
  double wall_time_s = 0;
  std::vector<double> accepted_scores;  // every strict improvement, in order
};

inline std::string model_text(const LearnResult& r) {
  if (const Dnf* q = std::get_if<Dnf>(&r.model)) return to_string(*q);
  return to_string(std::get<WeightVector>(r.model));
}

namespace detail {

// Shared scoring scaffold: one closures() = one structuring call.
class ScorerBase {
public:
  ScorerBase(const NeighborhoodFamily& family, const Structuring& target)
      : family_(family), target_(target), domain_(target.domain()) {
    if (family.n() != target.universe_size())
      throw invalid_argument_error("family and target structuring universes differ");
    if (domain_.empty())
      throw empty_input_error("target structuring has an empty domain");
  }

  double extrinsic_of(const Structuring& s) const {
    return extrinsic_measure(target_, s).f_measure;
  }

  std::size_t calls() const { return calls_; }
  const NeighborhoodFamily& family() const { return family_; }

protected:
  template <typename Model>
  Structuring closures(const Model& model) {
    ++calls_;
    return elementary_closures(family_, model, domain_);
  }

  const NeighborhoodFamily& family_;
  const Structuring& target_;
  std::vector<std::size_t> domain_;
  std::size_t calls_ = 0;
};

// Extrinsic F is a ratio of counts bounded by the universe squared, so
// double holds it exactly enough to rank candidates.
class ExtrinsicScorer : public ScorerBase {
public:
  using value_type = double;
  using ScorerBase::ScorerBase;

  template <typename Model>
  std::pair<double, Structuring> score(const Model& model) {
    Structuring s = closures(model);
    double v = extrinsic_of(s);
    return {v, std::move(s)};
  }
};

// The intrinsic measure must be ranked in big_float: covering one more
// positive bag moves log2(B+) by about 2^-|F*|, far below a double ulp
// once closures pass ~60 elements, and a candidate whose true gain
// rounds to a tie would otherwise fail the strict-improvement test.
class IntrinsicScorer : public ScorerBase {
public:
  using value_type = big_float;

  IntrinsicScorer(const NeighborhoodFamily& family, const Structuring& target,
                  double p)
      : ScorerBase(family, target), p_(p), classes_(equivalence_partition(target)) {}

  template <typename Model>
  std::pair<big_float, Structuring> score(const Model& model) {
    Structuring s = closures(model);
    big_float v = intrinsic_measure_precise(classes_, target_, s, p_);
    return {std::move(v), std::move(s)};
  }

private:
  double p_;
  std::vector<EquivalenceClass> classes_;
};

// Reported scores are plain doubles regardless of the ranking type.
inline double to_plain(double v) { return v; }
inline double to_plain(const big_float& v) { return v.convert_to<double>(); }

inline Dnf with_clause(const Dnf& q, const Clause& c) {
  std::vector<Clause> clauses = q.clauses();
  clauses.push_back(c);
  return Dnf(std::move(clauses));
}

// Candidate ordering: higher score first, then fewer predicates, then
// lexicographically smaller predicate set.
template <typename Value>
bool candidate_precedes(const Value& score_a, const Clause& a, const Value& score_b,
                        const Clause& b) {
  if (score_a != score_b) return score_a > score_b;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

template <typename Value>
struct ClauseChoice {
  Clause clause;
  Value score{};
  Structuring structuring;  // of simplify(current | clause), cached for reuse
};

// Beam search over clause specializations: singles first, each kept
// clause grows by one unused predicate per level. Two prunings, both
// closed under specialization: a candidate whose addition leaves the
// DNF unchanged is subsumed (supersets stay subsumed), and a candidate
// whose addition leaves every closure unchanged is inert. An inert
// clause's specializations only shrink its firing set, so the whole
// subtree stays inert; letting such candidates hold beam slots would
// crowd out weaker-scoring clauses that actually change something.
// Inert candidates still compete for the returned best, which keeps
// full-width search equivalent to exhaustive scoring. Returns the best
// clause seen at any depth, or nothing when every candidate is
// subsumed.
template <typename Scorer>
std::optional<ClauseChoice<typename Scorer::value_type>> best_clause_choice(
    const Dnf& current, const Structuring& current_closures, std::size_t beam_size,
    Scorer& scorer) {
  using Value = typename Scorer::value_type;
  const std::size_t k = scorer.family().k();
  std::vector<Clause> level;
  level.reserve(k);
  for (std::size_t i = 1; i <= k; ++i)
    level.push_back(Clause({static_cast<std::uint16_t>(i)}));

  std::optional<ClauseChoice<Value>> best;
  while (!level.empty()) {
    struct Scored {
      Value score;
      std::size_t idx;
      bool inert;
    };
    std::vector<Scored> ranked;
    std::vector<std::optional<Structuring>> structurings(level.size());
    for (std::size_t idx = 0; idx < level.size(); ++idx) {
      Dnf extended = detail::with_clause(current, level[idx]);
      if (extended == current) continue;
      auto [v, s] = scorer.score(extended);
      ranked.push_back({v, idx, s == current_closures});
      structurings[idx] = std::move(s);
    }
    if (ranked.empty()) break;
    std::sort(ranked.begin(), ranked.end(), [&](const Scored& a, const Scored& b) {
      return detail::candidate_precedes(a.score, level[a.idx], b.score, level[b.idx]);
    });
    const Scored& top = ranked.front();
    if (!best || detail::candidate_precedes(top.score, level[top.idx], best->score,
                                            best->clause))
      best = ClauseChoice<Value>{level[top.idx], top.score,
                                 std::move(*structurings[top.idx])};

    // Specialize the beam; a set dedupes clauses reachable from
    // several parents.
    std::set<Clause> next;
    std::size_t kept = 0;
    for (const Scored& r : ranked) {
      if (r.inert) continue;
      if (++kept > beam_size) break;
      const Clause& parent = level[r.idx];
      for (std::size_t i = 1; i <= k; ++i) {
        const auto& lits = parent.indices();
        if (std::find(lits.begin(), lits.end(), static_cast<std::uint16_t>(i)) !=
            lits.end())
          continue;
        std::vector<std::uint16_t> grown = lits;
        grown.push_back(static_cast<std::uint16_t>(i));
        next.insert(Clause(std::move(grown)));
      }
    }
    level.assign(next.begin(), next.end());
  }
  return best;
}

}  // namespace detail

enum class Measure { extrinsic, intrinsic };

// The clause the beam search would append to `current`, or nothing
// when every candidate is already subsumed by it.
inline std::optional<Clause> best_clause(const NeighborhoodFamily& family,
                                         const Structuring& target, const Dnf& current,
                                         std::size_t beam_size, Measure measure,
                                         double p = 1.0) {
  if (beam_size < 1) throw config_error("beam_size must be at least 1");
  auto pick = [&](auto scorer) -> std::optional<Clause> {
    auto [base, closures] = scorer.score(current);
    (void)base;
    auto choice = detail::best_clause_choice(current, closures, beam_size, scorer);
    if (!choice) return std::nullopt;
    return std::move(choice->clause);
  };
  if (measure == Measure::intrinsic)
    return pick(detail::IntrinsicScorer(family, target, p));
  return pick(detail::ExtrinsicScorer(family, target));
}

namespace detail {

template <typename Scorer>
LearnResult greedy_engine(const LearnerConfig& config, Scorer scorer) {
  const auto start = std::chrono::steady_clock::now();

  Dnf q;
  auto [score, structuring] = scorer.score(q);  // baseline the first clause must beat
  std::vector<double> accepted{to_plain(score)};
  std::size_t iterations = 0;
  while (iterations < config.max_iter) {
    auto choice = best_clause_choice(q, structuring, config.beam_size, scorer);
    if (!choice || choice->score <= score) break;
    q = with_clause(q, choice->clause);
    score = std::move(choice->score);
    structuring = std::move(choice->structuring);
    accepted.push_back(to_plain(score));
    ++iterations;
  }

  LearnResult result{std::move(q),
                     to_plain(score),
                     0.0,
                     std::move(structuring),
                     iterations,
                     scorer.calls(),
                     0.0,
                     std::move(accepted)};
  result.extrinsic_f = scorer.extrinsic_of(result.structuring);
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// Representation-specific genetic operators. Both keep every invariant
// of their representation so individuals never need repair elsewhere.
struct LogicalOps {
  std::size_t k;

  Clause random_clause(Rng& rng) const {
    std::vector<std::uint16_t> lits;
    do {
      lits.clear();
      for (std::size_t i = 1; i <= k; ++i)
        if (rng.chance(0.5)) lits.push_back(static_cast<std::uint16_t>(i));
    } while (lits.empty());
    return Clause(std::move(lits));
  }

  Dnf random(Rng& rng) const {
    const std::size_t count = 1 + rng.index(k);
    std::vector<Clause> clauses;
    clauses.reserve(count);
    for (std::size_t c = 0; c < count; ++c) clauses.push_back(random_clause(rng));
    return Dnf(std::move(clauses));
  }

  // Uniform clause exchange; clauses present in both parents always
  // transmit, so crossing identical parents is the identity.
  Dnf cross(Rng& rng, const Dnf& a, const Dnf& b) const {
    std::set<Clause> in_a(a.clauses().begin(), a.clauses().end());
    std::set<Clause> in_b(b.clauses().begin(), b.clauses().end());
    std::vector<Clause> child;
    for (const Clause& c : in_a)
      if (in_b.count(c) || rng.chance(0.5)) child.push_back(c);
    for (const Clause& c : in_b)
      if (!in_a.count(c) && rng.chance(0.5)) child.push_back(c);
    return Dnf(std::move(child));
  }

  Dnf mutate(Rng& rng, const Dnf& q) const {
    const std::size_t op = rng.index(4);
    std::vector<Clause> clauses = q.clauses();
    if (clauses.empty() || op == 2) {
      clauses.push_back(Clause({static_cast<std::uint16_t>(1 + rng.index(k))}));
      return Dnf(std::move(clauses));
    }
    const std::size_t ci = rng.index(clauses.size());
    if (op == 0) {  // conjoin a random unused predicate
      std::vector<std::uint16_t> lits = clauses[ci].indices();
      std::vector<std::uint16_t> unused;
      for (std::size_t i = 1; i <= k; ++i)
        if (std::find(lits.begin(), lits.end(), static_cast<std::uint16_t>(i)) ==
            lits.end())
          unused.push_back(static_cast<std::uint16_t>(i));
      if (unused.empty()) return q;
      lits.push_back(unused[rng.index(unused.size())]);
      clauses[ci] = Clause(std::move(lits));
    } else if (op == 1) {  // drop a predicate, discarding an emptied clause
      std::vector<std::uint16_t> lits = clauses[ci].indices();
      if (lits.size() == 1) {
        clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(ci));
      } else {
        lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(rng.index(lits.size())));
        clauses[ci] = Clause(std::move(lits));
      }
    } else {  // op == 3: drop a whole clause
      clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(ci));
    }
    return Dnf(std::move(clauses));
  }
};

struct NumericOps {
  std::size_t k;
  static constexpr double w0_floor = 1e-6;

  // Project onto the feasible set: non-negative weights, w0 above the
  // floor, total mass at least w0 (rescaled up, then nudged past any
  // rounding shortfall so the exact constraint check passes).
  WeightVector project(double w0, std::vector<double> w) const {
    w0 = std::max(w0, w0_floor);
    double sum = 0;
    for (double& wi : w) {
      wi = std::max(wi, 0.0);
      sum += wi;
    }
    if (sum < w0) {
      if (sum == 0) {
        for (double& wi : w) wi = w0 / static_cast<double>(k);
      } else {
        const double scale = w0 / sum;
        for (double& wi : w) wi *= scale;
      }
      for (;;) {
        double check = 0;
        for (double wi : w) check += wi;
        if (check >= w0) break;
        for (double& wi : w) wi *= 1.0 + 1e-12;
      }
    }
    return WeightVector(w0, std::move(w));
  }

  WeightVector random(Rng& rng) const {
    const double w0 = rng.unit();
    std::vector<double> w(k);
    for (double& wi : w) wi = rng.unit();
    return project(w0, std::move(w));
  }

  WeightVector cross(Rng& rng, const WeightVector& a, const WeightVector& b) const {
    const double blend = rng.unit();
    const double w0 = blend * a.w0() + (1 - blend) * b.w0();
    std::vector<double> w(k);
    for (std::size_t i = 0; i < k; ++i)
      w[i] = blend * a.weights()[i] + (1 - blend) * b.weights()[i];
    return project(w0, std::move(w));
  }

  WeightVector mutate(Rng& rng, const WeightVector& v) const {
    const double w0 = v.w0() + (rng.unit() * 0.5 - 0.25);
    std::vector<double> w = v.weights();
    for (double& wi : w) wi += rng.unit() * 0.5 - 0.25;
    return project(w0, std::move(w));
  }
};

// One generation-based search over either representation. Convergence
// follows the generational scheme: the running best score must repeat
// for required_iter_convergence consecutive generations.
template <typename Individual, typename Ops>
LearnResult genetic_engine(const NeighborhoodFamily& family, const Structuring& target,
                           const LearnerConfig& config, const Ops& ops,
                           std::vector<Individual> population) {
  const auto start = std::chrono::steady_clock::now();
  ExtrinsicScorer scorer(family, target);
  Rng rng(config.rng_seed);

  if (population.empty()) {
    population.reserve(config.initial_pop);
    for (std::size_t i = 0; i < config.initial_pop; ++i)
      population.push_back(ops.random(rng));
  } else if (population.size() < 2) {
    throw config_error("genetic search needs at least two individuals");
  }
  const std::size_t pop_size = population.size();

  double best_score = 0;  // the baseline any first generation beats
  std::optional<Individual> best;
  std::optional<Structuring> best_structuring;
  std::vector<double> accepted;
  std::vector<double> scores(pop_size);
  std::size_t iterations = 0, repeats = 0;

  auto tournament = [&]() -> const Individual& {
    const std::size_t i = rng.index(pop_size);
    const std::size_t j = rng.index(pop_size);
    return scores[j] > scores[i] ? population[j] : population[i];
  };

  while (iterations < config.max_iter && repeats < config.required_iter_convergence) {
    std::size_t gen_best = 0;
    double gen_score = -1;
    std::optional<Structuring> gen_structuring;
    for (std::size_t i = 0; i < pop_size; ++i) {
      auto [v, s] = scorer.score(population[i]);
      scores[i] = v;
      if (v > gen_score) {
        gen_score = v;
        gen_best = i;
        gen_structuring = std::move(s);
      }
    }
    ++iterations;
    if (gen_score > best_score) {
      best_score = gen_score;
      best = population[gen_best];
      best_structuring = std::move(gen_structuring);
      accepted.push_back(gen_score);
      repeats = 1;
    } else if (gen_score == best_score) {
      ++repeats;
    }
    if (iterations >= config.max_iter || repeats >= config.required_iter_convergence)
      break;

    std::vector<Individual> next;
    next.reserve(pop_size);
    next.push_back(*best);  // elitism of one
    while (next.size() < pop_size) {
      const Individual& pa = tournament();
      const Individual& pb = tournament();
      Individual child = rng.chance(config.crossover_rate) ? ops.cross(rng, pa, pb) : pa;
      if (rng.chance(config.mutation_rate)) child = ops.mutate(rng, child);
      next.push_back(std::move(child));
    }
    population = std::move(next);
  }

  LearnResult result{std::move(*best),
                     best_score,
                     best_score,
                     std::move(*best_structuring),
                     iterations,
                     scorer.calls(),
                     0.0,
                     std::move(accepted)};
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace detail

inline LearnResult genetic_lps(const NeighborhoodFamily& family, const Structuring& target,
                               const LearnerConfig& config) {
  validate(config);
  if (config.algorithm == Algorithm::genetic_logical)
    return detail::genetic_engine<Dnf>(family, target, config,
                                       detail::LogicalOps{family.k()}, {});
  if (config.algorithm == Algorithm::genetic_numeric)
    return detail::genetic_engine<WeightVector>(family, target, config,
                                                detail::NumericOps{family.k()}, {});
  throw config_error("genetic_lps requires a genetic algorithm setting");
}

// Overloads seeding an explicit initial population; the population's
// size replaces initial_pop.
inline LearnResult genetic_lps(const NeighborhoodFamily& family, const Structuring& target,
                               const LearnerConfig& config, std::vector<Dnf> population) {
  validate(config);
  if (config.algorithm != Algorithm::genetic_logical)
    throw config_error("a DNF population requires algorithm = genetic_logical");
  return detail::genetic_engine<Dnf>(family, target, config,
                                     detail::LogicalOps{family.k()},
                                     std::move(population));
}

inline LearnResult genetic_lps(const NeighborhoodFamily& family, const Structuring& target,
                               const LearnerConfig& config,
                               std::vector<WeightVector> population) {
  validate(config);
  if (config.algorithm != Algorithm::genetic_numeric)
    throw config_error("a weight population requires algorithm = genetic_numeric");
  return detail::genetic_engine<WeightVector>(family, target, config,
                                              detail::NumericOps{family.k()},
                                              std::move(population));
}

inline LearnResult greedy_lps(const NeighborhoodFamily& family, const Structuring& target,
                              const LearnerConfig& config) {
  validate(config);
  if (config.algorithm != Algorithm::greedy)
    throw config_error("greedy_lps requires algorithm = greedy");
  return detail::greedy_engine(config, detail::ExtrinsicScorer(family, target));
}

inline LearnResult mi_lps(const NeighborhoodFamily& family, const Structuring& target,
                          const LearnerConfig& config) {
  validate(config);
  if (config.algorithm != Algorithm::mi)
    throw config_error("mi_lps requires algorithm = mi");
  return detail::greedy_engine(config,
                               detail::IntrinsicScorer(family, target, config.p));
}

inline LearnResult learn(const NeighborhoodFamily& family, const Structuring& target,
                         const LearnerConfig& config) {
  switch (config.algorithm) {
    case Algorithm::genetic_numeric:
    case Algorithm::genetic_logical:
      return genetic_lps(family, target, config);
    case Algorithm::greedy:
      return greedy_lps(family, target, config);
    case Algorithm::mi:
      return mi_lps(family, target, config);
  }
  throw config_error("unmapped algorithm value");
}

}  // namespace lps
