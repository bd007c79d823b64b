#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "lps/errors.hpp"

namespace lps {

// One conjunction of predicates, stored as sorted unique 1-based
// indices. Never empty.
class Clause {
public:
  explicit Clause(std::vector<std::uint16_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    if (indices_.empty()) throw model_error("clause must contain at least one predicate");
    if (indices_.front() == 0) throw model_error("predicate indices are 1-based");
  }

  Clause(std::initializer_list<std::uint16_t> indices)
      : Clause(std::vector<std::uint16_t>(indices)) {}

  const std::vector<std::uint16_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::uint16_t max_index() const noexcept { return indices_.back(); }

  bool is_subset_of(const Clause& o) const {
    return std::includes(o.indices_.begin(), o.indices_.end(), indices_.begin(),
                         indices_.end());
  }

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.indices_ == b.indices_;
  }
  friend bool operator<(const Clause& a, const Clause& b) {
    return a.indices_ < b.indices_;
  }

private:
  std::vector<std::uint16_t> indices_;
};

// Positive disjunctive normal form: a set of clauses, duplicate-free
// and subsumption-free, in lexicographic clause order. The empty DNF
// is legal and never propagates.
class Dnf {
public:
  Dnf() = default;

  explicit Dnf(std::vector<Clause> raw) : clauses_(std::move(raw)) { simplify(); }

  Dnf(std::initializer_list<Clause> raw) : Dnf(std::vector<Clause>(raw)) {}

  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  bool empty() const noexcept { return clauses_.empty(); }
  std::size_t size() const noexcept { return clauses_.size(); }

  // Largest predicate index mentioned; 0 when empty.
  std::uint16_t max_index() const noexcept {
    std::uint16_t m = 0;
    for (const auto& c : clauses_) m = std::max(m, c.max_index());
    return m;
  }

  friend bool operator==(const Dnf& a, const Dnf& b) { return a.clauses_ == b.clauses_; }
  friend bool operator<(const Dnf& a, const Dnf& b) { return a.clauses_ < b.clauses_; }

private:
  void simplify() {
    std::sort(clauses_.begin(), clauses_.end());
    clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
    // Drop any clause containing another clause as a strict subset.
    // After dedupe only a strictly shorter clause can subsume, so
    // candidates are checked against kept shorter clauses only.
    std::stable_sort(clauses_.begin(), clauses_.end(),
                     [](const Clause& a, const Clause& b) { return a.size() < b.size(); });
    std::vector<Clause> kept;
    for (const Clause& c : clauses_) {
      bool subsumed = false;
      for (const Clause& s : kept) {
        if (s.size() >= c.size()) break;
        if (s.is_subset_of(c)) {
          subsumed = true;
          break;
        }
      }
      if (!subsumed) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    clauses_ = std::move(kept);
  }

  std::vector<Clause> clauses_;
};

inline Dnf simplify_dnf(std::vector<Clause> raw) { return Dnf(std::move(raw)); }

// Renders in the grammar `dnf := clause ('|' clause)*`; single-literal
// clauses print bare, longer ones parenthesized. The empty DNF prints
// as the keyword `false`.
inline std::string to_string(const Dnf& q) {
  if (q.empty()) return "false";
  std::string out;
  for (std::size_t i = 0; i < q.clauses().size(); ++i) {
    const auto& c = q.clauses()[i];
    if (i) out += " | ";
    if (c.size() > 1) {
      out += '(';
      for (std::size_t j = 0; j < c.indices().size(); ++j) {
        if (j) out += " & ";
        out += 'q';
        out += std::to_string(c.indices()[j]);
      }
      out += ')';
    } else {
      out += 'q';
      out += std::to_string(c.indices()[0]);
    }
  }
  return out;
}

namespace detail {

class DnfLexer {
public:
  explicit DnfLexer(const std::string& text) : text_(text) {}

  struct Token {
    enum Kind { kLit, kAnd, kOr, kLParen, kRParen, kFalse, kEnd } kind;
    std::uint16_t index = 0;  // for kLit
    std::size_t line = 1, column = 1;
    std::string spelling;
  };

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= text_.size()) {
      t.kind = Token::kEnd;
      return t;
    }
    char c = text_[pos_];
    if (c == '&' || c == '|' || c == '(' || c == ')') {
      advance();
      t.spelling = std::string(1, c);
      t.kind = c == '&'   ? Token::kAnd
               : c == '|' ? Token::kOr
               : c == '(' ? Token::kLParen
                          : Token::kRParen;
      return t;
    }
    if (c == 'q' || c == 'Q') {
      std::size_t start = pos_;
      advance();
      std::size_t digits = 0;
      unsigned long v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + static_cast<unsigned long>(text_[pos_] - '0');
        if (v > 0xffff) throw parse_error("predicate index too large", t.line, t.column);
        advance();
        ++digits;
      }
      t.spelling = text_.substr(start, pos_ - start);
      if (digits == 0)
        throw parse_error("expected digits after 'q'", t.line, t.column);
      if (v == 0)
        throw parse_error("invalid predicate 'q0': indices start at 1", t.line, t.column);
      t.kind = Token::kLit;
      t.index = static_cast<std::uint16_t>(v);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_])))
        advance();
      t.spelling = text_.substr(start, pos_ - start);
      if (t.spelling == "false") {
        t.kind = Token::kFalse;
        return t;
      }
      throw parse_error("unexpected token '" + t.spelling + "'", t.line, t.column);
    }
    throw parse_error("unexpected character '" + std::string(1, c) + "'", t.line, t.column);
  }

private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    ++pos_;
    ++col_;
  }

  const std::string& text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

}  // namespace detail

// Parses `dnf := clause ('|' clause)* | 'false'` with
// `clause := '(' lit ('&' lit)* ')' | lit` and `lit := 'q' INT`.
// Whitespace-insensitive. Result is auto-simplified.
inline Dnf parse_dnf(const std::string& text) {
  detail::DnfLexer lex(text);
  auto tok = lex.next();
  using Token = detail::DnfLexer::Token;
  if (tok.kind == Token::kEnd) throw parse_error("empty model text", tok.line, tok.column);
  if (tok.kind == Token::kFalse) {
    tok = lex.next();
    if (tok.kind != Token::kEnd)
      throw parse_error("trailing input after 'false'", tok.line, tok.column);
    return Dnf();
  }
  std::vector<Clause> clauses;
  for (;;) {
    std::vector<std::uint16_t> lits;
    if (tok.kind == Token::kLParen) {
      tok = lex.next();
      if (tok.kind != Token::kLit)
        throw parse_error("expected literal after '('", tok.line, tok.column);
      lits.push_back(tok.index);
      tok = lex.next();
      while (tok.kind == Token::kAnd) {
        tok = lex.next();
        if (tok.kind != Token::kLit)
          throw parse_error("expected literal after '&'", tok.line, tok.column);
        lits.push_back(tok.index);
        tok = lex.next();
      }
      if (tok.kind != Token::kRParen)
        throw parse_error("expected ')' to close clause", tok.line, tok.column);
      tok = lex.next();
    } else if (tok.kind == Token::kLit) {
      lits.push_back(tok.index);
      tok = lex.next();
    } else {
      throw parse_error("expected clause, got '" + tok.spelling + "'", tok.line,
                        tok.column);
    }
    clauses.emplace_back(std::move(lits));
    if (tok.kind == Token::kEnd) break;
    if (tok.kind != Token::kOr)
      throw parse_error("expected '|' between clauses, got '" + tok.spelling + "'",
                        tok.line, tok.column);
    tok = lex.next();
    if (tok.kind == Token::kEnd)
      throw parse_error("dangling '|' at end of model", tok.line, tok.column);
  }
  return Dnf(std::move(clauses));
}

// Threshold model over k neighborhood weights. The stored tuple is
// (w_0, w_1..w_k); construction enforces the V-type constraints
// w_0 > 0, w_i >= 0, sum(w_i) >= w_0.
class WeightVector {
public:
  WeightVector(double w0, std::vector<double> weights)
      : w0_(w0), weights_(std::move(weights)) {
    if (!(w0_ > 0)) throw model_error("weight threshold w0 must be positive");
    double sum = 0;
    for (double w : weights_) {
      if (!(w >= 0)) throw model_error("neighborhood weights must be non-negative");
      sum += w;
    }
    if (!(sum >= w0_))
      throw model_error("weights must sum to at least the threshold w0");
  }

  WeightVector(std::initializer_list<double> tuple)
      : WeightVector(tuple.size() ? *tuple.begin() : 0.0,
                     std::vector<double>(tuple.begin() + (tuple.size() ? 1 : 0),
                                         tuple.end())) {}

  double w0() const noexcept { return w0_; }
  // 1-based accessor matching the subscripts w_1..w_k.
  double weight(std::size_t i) const {
    if (i == 0 || i > weights_.size())
      throw invalid_argument_error("weight index out of range");
    return weights_[i - 1];
  }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t k() const noexcept { return weights_.size(); }

private:
  double w0_;
  std::vector<double> weights_;
};

// One-line text form `w0 w1 ... wk`.
inline std::string to_string(const WeightVector& w) {
  std::ostringstream out;
  out.precision(17);
  out << w.w0();
  for (double wi : w.weights()) out << ' ' << wi;
  return out.str();
}

inline WeightVector parse_weight_vector(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  if (!in.eof()) {
    in.clear();
    std::string rest;
    in >> rest;
    throw parse_error("invalid number in weight vector: '" + rest + "'");
  }
  if (vals.size() < 2)
    throw parse_error("weight vector needs a threshold and at least one weight");
  return WeightVector(vals[0], std::vector<double>(vals.begin() + 1, vals.end()));
}

// Rewrites a threshold model as the equivalent positive DNF: one
// clause per non-empty subset of {1..k} whose weight sum clears w_0,
// then simplification. 2^k enumeration, so k is capped.
inline Dnf weights_to_dnf(const WeightVector& w, std::size_t max_k = 20) {
  const std::size_t k = w.k();
  if (k > max_k || k > 62)
    throw size_error("weights_to_dnf over " + std::to_string(k) +
                     " predicates exceeds the cap of " + std::to_string(max_k));
  // Weights are non-negative, so the qualifying subsets form an
  // upward-closed family: only the minimal ones survive simplification.
  // A qualifying mask is minimal exactly when no single-element removal
  // still qualifies, so minimal clauses are emitted directly instead of
  // materialising every qualifying subset.
  auto subset_sum = [&](std::uint64_t mask, std::size_t skip) {
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (i != skip && (mask & (std::uint64_t{1} << i))) sum += w.weights()[i];
    return sum;
  };
  std::vector<Clause> clauses;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    if (subset_sum(mask, k) < w.w0()) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < k && minimal; ++i)
      if ((mask & (std::uint64_t{1} << i)) && subset_sum(mask, i) >= w.w0())
        minimal = false;
    if (!minimal) continue;
    std::vector<std::uint16_t> lits;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::uint64_t{1} << i)) lits.push_back(static_cast<std::uint16_t>(i + 1));
    clauses.emplace_back(std::move(lits));
  }
  return Dnf(std::move(clauses));
}

}  // namespace lps
