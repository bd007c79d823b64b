#pragma once

// Benchmark driver: runs a ladder of learners over nested-obstacle
// grid series and reports every run as one CSV row. Everything except
// wall time is a pure function of the config, master seed included.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lps/bags.hpp"
#include "lps/errors.hpp"
#include "lps/grid.hpp"
#include "lps/learners.hpp"
#include "lps/rng.hpp"

namespace lps {

struct ExperimentConfig {
  std::vector<std::string> models;  // empty = simple, medium, hard
  std::size_t width = 15;
  std::size_t height = 15;
  std::vector<double> obstacle_percentages = {0, 10, 20, 30, 40, 50, 60};
  double training_fraction = 0.3;
  std::size_t repetitions = 10;
  std::vector<LearnerConfig> learners;  // empty = default_ladder()
  std::uint64_t rng_seed = 0;
  std::string output_path = "experiment.csv";
};

// The stock comparison: both genetic representations at populations
// 100 and 500, greedy and mi at beams 1 and 5. Listed in the CSV sort
// order so default runs append without reordering.
inline std::vector<LearnerConfig> default_ladder() {
  std::vector<LearnerConfig> out;
  for (Algorithm a : {Algorithm::genetic_logical, Algorithm::genetic_numeric})
    for (std::size_t pop : {100u, 500u}) {
      LearnerConfig c;
      c.algorithm = a;
      c.initial_pop = pop;
      out.push_back(c);
    }
  for (Algorithm a : {Algorithm::greedy, Algorithm::mi})
    for (std::size_t beam : {1u, 5u}) {
      LearnerConfig c;
      c.algorithm = a;
      c.beam_size = beam;
      out.push_back(c);
    }
  return out;
}

// The one setting the ladder varies per algorithm family.
inline std::string params_tag(const LearnerConfig& c) {
  if (c.algorithm == Algorithm::genetic_numeric ||
      c.algorithm == Algorithm::genetic_logical)
    return "pop=" + std::to_string(c.initial_pop);
  return "beam=" + std::to_string(c.beam_size);
}

inline std::vector<std::string> resolved_models(const ExperimentConfig& c) {
  if (c.models.empty()) return {"simple", "medium", "hard"};
  return c.models;
}

inline std::vector<LearnerConfig> resolved_learners(const ExperimentConfig& c) {
  if (c.learners.empty()) return default_ladder();
  return c.learners;
}

inline void validate(const ExperimentConfig& c) {
  if (c.width < 1 || c.height < 1)
    throw config_error("grid dimensions must be at least 1x1");
  if (c.obstacle_percentages.empty())
    throw config_error("experiment needs at least one obstacle percentage");
  if (!(c.training_fraction > 0 && c.training_fraction <= 1))
    throw config_error("training fraction must lie in (0, 1]");
  if (c.repetitions < 1) throw config_error("repetitions must be at least 1");
  if (c.output_path.empty()) throw config_error("output path must not be empty");
  for (const std::string& name : resolved_models(c)) {
    try {
      target_model(name);
    } catch (const invalid_argument_error& e) {
      throw config_error(e.what());
    }
  }
  for (const LearnerConfig& lc : resolved_learners(c)) validate(lc);
}

namespace detail {

// Shortest round-tripping decimal form; keeps CSVs readable and the
// seed-derivation text canonical.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::uint64_t parse_u64_field(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    throw config_error("experiment config: '" + key + "' needs an unsigned integer, got '" +
                       value + "'");
  return out;
}

inline double parse_f64_field(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw config_error("experiment config: '" + key + "' needs a number, got '" + value +
                       "'");
  }
}

// "greedy beam=5", "genetic_numeric pop=500 max_iter=40", ...
// First token picks the algorithm, the rest override LearnerConfig
// fields. Seeds are derived per run and cannot be set here.
inline LearnerConfig parse_learner_line(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  if (!(in >> token)) throw config_error("experiment config: empty learner entry");
  LearnerConfig c;
  c.algorithm = parse_algorithm(token);
  while (in >> token) {
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == token.size())
      throw config_error("experiment config: learner option '" + token +
                         "' is not key=value");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "pop" || key == "initial_pop")
      c.initial_pop = parse_u64_field(key, value);
    else if (key == "beam" || key == "beam_size")
      c.beam_size = parse_u64_field(key, value);
    else if (key == "max_iter")
      c.max_iter = parse_u64_field(key, value);
    else if (key == "required_iter_convergence")
      c.required_iter_convergence = parse_u64_field(key, value);
    else if (key == "mutation_rate")
      c.mutation_rate = parse_f64_field(key, value);
    else if (key == "crossover_rate")
      c.crossover_rate = parse_f64_field(key, value);
    else if (key == "p")
      c.p = parse_f64_field(key, value);
    else
      throw config_error("experiment config: unknown learner option '" + key + "'");
  }
  return c;
}

inline std::vector<double> parse_percentage_list(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_f64_field("obstacles", token));
  if (out.empty()) throw config_error("experiment config: 'obstacles' list is empty");
  return out;
}

}  // namespace detail

// Flat key-value text like the learner config format: one setting per
// line, '#' comments, '=' optional. 'model' and 'learner' may repeat;
// the value of 'learner' is the rest of the line.
inline ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string rest;
    std::getline(ls, rest);
    std::size_t start = rest.find_first_not_of(" \t");
    if (start != std::string::npos && rest[start] == '=')
      start = rest.find_first_not_of(" \t", start + 1);
    const std::size_t end = rest.find_last_not_of(" \t\r");
    std::string value = (start == std::string::npos || end == std::string::npos ||
                         start > end)
                            ? std::string()
                            : rest.substr(start, end - start + 1);
    auto bad = [&](const std::string& what) {
      return config_error("experiment config line " + std::to_string(line_no) + ": " +
                          what);
    };
    if (value.empty()) throw bad("'" + key + "' has no value");
    try {
      if (key == "model")
        c.models.push_back(value);
      else if (key == "width")
        c.width = detail::parse_u64_field(key, value);
      else if (key == "height")
        c.height = detail::parse_u64_field(key, value);
      else if (key == "obstacles")
        c.obstacle_percentages = detail::parse_percentage_list(value);
      else if (key == "fraction")
        c.training_fraction = detail::parse_f64_field(key, value);
      else if (key == "repetitions")
        c.repetitions = detail::parse_u64_field(key, value);
      else if (key == "seed")
        c.rng_seed = detail::parse_u64_field(key, value);
      else if (key == "out")
        c.output_path = value;
      else if (key == "learner")
        c.learners.push_back(detail::parse_learner_line(value));
      else
        throw bad("unknown key '" + key + "'");
    } catch (const config_error& e) {
      if (std::string(e.what()).rfind("experiment config line", 0) == 0) throw;
      throw bad(e.what());
    }
  }
  return c;
}

inline ExperimentConfig parse_experiment_config(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_config(in);
}

struct RunRecord {
  std::string model;
  double obstacle_pct = 0;
  std::size_t rep = 0;  // repetition index, zero-based
  std::string algorithm;
  std::string params;
  double f_measure = 0;
  double intrinsic = 0;
  std::size_t structuring_calls = 0;
  double wall_time_s = 0;
  std::string learned;
};

namespace detail {

inline auto record_key(const RunRecord& r) {
  return std::tie(r.model, r.rep, r.obstacle_pct, r.algorithm, r.params);
}

}  // namespace detail

// Runs every configured learner on every (model, repetition, grid)
// cell. Within a cell all learners see the same training structuring;
// the per-run seed folds in everything but the learner's settings, so
// rung-to-rung comparisons are paired.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::vector<std::string> models = resolved_models(config);
  const std::vector<LearnerConfig> learners = resolved_learners(config);

  std::vector<RunRecord> records;
  records.reserve(models.size() * config.repetitions *
                  config.obstacle_percentages.size() * learners.size());
  for (const std::string& name : models) {
    const Dnf target = target_model(name);
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const ObstacleSeries series = generate_obstacle_series(
          config.width, config.height, config.obstacle_percentages,
          derive_seed(config.rng_seed, name, rep, "grids"));
      for (std::size_t g = 0; g < series.grids.size(); ++g) {
        const double pct = series.percentages[g];
        const std::string pct_text = detail::format_double(pct);
        const NeighborhoodFamily family = moore_family(series.grids[g]);
        const Structuring training = build_training_structuring(
            series.grids[g], target, config.training_fraction,
            derive_seed(config.rng_seed, name, rep, pct_text, "sample"));
        const std::vector<EquivalenceClass> classes = equivalence_partition(training);
        for (const LearnerConfig& base : learners) {
          LearnerConfig run_config = base;
          run_config.rng_seed = derive_seed(config.rng_seed, name, rep, pct_text,
                                            to_string(base.algorithm));
          const LearnResult result = learn(family, training, run_config);
          records.push_back({name, pct, rep, to_string(base.algorithm),
                             params_tag(base), result.extrinsic_f,
                             intrinsic_measure(classes, training, result.structuring,
                                               run_config.p),
                             result.structuring_calls, result.wall_time_s,
                             model_text(result)});
        }
      }
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     return detail::record_key(a) < detail::record_key(b);
                   });
  return records;
}

inline void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "model,obstacle_pct,rep,algorithm,params,f_measure,intrinsic,"
         "structuring_calls,wall_time_s,learned\n";
  for (const RunRecord& r : records)
    out << r.model << ',' << detail::format_double(r.obstacle_pct) << ',' << r.rep << ','
        << r.algorithm << ',' << r.params << ',' << detail::format_double(r.f_measure)
        << ',' << detail::format_double(r.intrinsic) << ',' << r.structuring_calls << ','
        << detail::format_double(r.wall_time_s) << ',' << r.learned << '\n';
}

// Means over repetitions, one row per plotted point: F-measure is the
// position, wall time the marker size. Grouping keeps params so the
// two settings of one algorithm stay separate series.
inline void write_mean_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "model,obstacle_pct,algorithm,params,mean_f_measure,mean_wall_time_s,runs\n";
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const RunRecord& r : records) sorted.push_back(&r);
  auto group_key = [](const RunRecord& r) {
    return std::tie(r.model, r.obstacle_pct, r.algorithm, r.params);
  };
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const RunRecord* a, const RunRecord* b) {
                     return group_key(*a) < group_key(*b);
                   });
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double f_sum = 0;
    double t_sum = 0;
    while (j < sorted.size() && group_key(*sorted[j]) == group_key(*sorted[i])) {
      f_sum += sorted[j]->f_measure;
      t_sum += sorted[j]->wall_time_s;
      ++j;
    }
    const double count = static_cast<double>(j - i);
    const RunRecord& r = *sorted[i];
    out << r.model << ',' << detail::format_double(r.obstacle_pct) << ',' << r.algorithm
        << ',' << r.params << ',' << detail::format_double(f_sum / count) << ','
        << detail::format_double(t_sum / count) << ',' << (j - i) << '\n';
    i = j;
  }
}

inline std::string mean_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".mean.csv";
  return csv_path + ".mean.csv";
}

struct ExperimentOutput {
  std::string csv_path;
  std::string mean_csv_path;
  std::vector<RunRecord> records;
};

// Opens both output files before any learning starts so an unwritable
// path fails fast instead of after minutes of compute.
inline ExperimentOutput run_experiment_to_files(const ExperimentConfig& config) {
  validate(config);
  const std::string mean_path = mean_path_for(config.output_path);
  std::ofstream csv(config.output_path);
  if (!csv) throw io_error("cannot open '" + config.output_path + "' for writing");
  std::ofstream mean(mean_path);
  if (!mean) throw io_error("cannot open '" + mean_path + "' for writing");

  ExperimentOutput out{config.output_path, mean_path, run_experiment(config)};
  write_records_csv(csv, out.records);
  write_mean_csv(mean, out.records);
  csv.flush();
  mean.flush();
  if (!csv || !mean) throw io_error("writing experiment CSVs failed");
  return out;
}

}  // namespace lps
