// Command-line surface: simulation, learning, bag accounting, and the
// grid benchmark, all on the flat file formats of the library.
//
// Exit codes: 0 success, 2 configuration or input error, 3 parse
// error, 4 size-cap error.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lps/bags.hpp"
#include "lps/closure.hpp"
#include "lps/dnf.hpp"
#include "lps/errors.hpp"
#include "lps/experiment.hpp"
#include "lps/grid.hpp"
#include "lps/learners.hpp"
#include "lps/measures.hpp"
#include "lps/neighborhoods.hpp"
#include "lps/structuring.hpp"

namespace {

using namespace lps;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Grid files and neighborhood files share the `two integers` header;
// the body tells them apart: a grid's first data line is a row of
// '.'/'#' cells, a neighborhood file's starts with `V<i>`.
bool looks_like_grid(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t nonempty = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++nonempty;
    if (nonempty < 2) continue;
    return line.find_first_not_of(".#") == std::string::npos;
  }
  return false;
}

NeighborhoodFamily load_family(const std::string& path) {
  const std::string text = slurp(path);
  if (looks_like_grid(text)) return moore_family(parse_grid(text));
  return parse_neighborhood_family(text);
}

void print_number(const char* label, double v) {
  std::cout << label << ": " << detail::format_double(v) << '\n';
}

int cmd_simulate(const std::string& grid_path, const std::string& model_text,
                 std::size_t origin) {
  const Grid g = parse_grid(slurp(grid_path));
  const Dnf q = parse_dnf(model_text);
  const ElementSet burnt = simulate_fire(g, q, origin);
  for (std::size_t r = 0; r < g.height(); ++r) {
    for (std::size_t c = 0; c < g.width(); ++c) {
      const std::size_t x = g.cell(r, c);
      std::cout << (x == origin        ? 'o'
                    : burnt.contains(x) ? '*'
                    : g.obstructed(x)   ? '#'
                                        : '.');
    }
    std::cout << '\n';
  }
  std::cout << origin << ':';
  burnt.for_each([&](std::size_t y) { std::cout << ' ' << y; });
  std::cout << '\n';
  return 0;
}

int cmd_learn(const std::string& input_path, const std::string& structuring_path,
              const LearnerConfig& config) {
  const NeighborhoodFamily family = load_family(input_path);
  const Structuring target = parse_structuring(slurp(structuring_path), family.n());
  const LearnResult result = learn(family, target, config);
  const ExtrinsicScores m = extrinsic_measure(target, result.structuring);
  std::cout << "model: " << model_text(result) << '\n';
  print_number("precision", m.precision);
  print_number("recall", m.recall);
  print_number("f_measure", m.f_measure);
  print_number("intrinsic", intrinsic_measure(target, result.structuring, config.p));
  std::cout << "structuring_calls: " << result.structuring_calls << '\n';
  print_number("wall_time_s", result.wall_time_s);
  return 0;
}

// A clause fires on an instance when every one of its predicates
// held; a DNF when any clause does.
bool dnf_fires(const Dnf& q, const std::vector<bool>& features) {
  for (const Clause& c : q.clauses()) {
    bool all = true;
    for (std::uint16_t i : c.indices()) {
      if (i > features.size() || !features[i - 1]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool bag_fires(const Dnf& q, const Bag& bag) {
  for (const Instance& inst : bag.instances)
    if (dnf_fires(q, inst.features)) return true;
  return false;
}

int cmd_bags(const std::string& input_path, const std::string& structuring_path,
             const std::string& candidate_text, bool oracle) {
  const NeighborhoodFamily family = load_family(input_path);
  const Structuring s_star = parse_structuring(slurp(structuring_path), family.n());
  const big_int total_pos = total_positive_bags(s_star);
  const big_int total_neg = total_negative_bags(s_star);
  std::cout << "B+ = " << total_pos << '\n';
  std::cout << "B- = " << total_neg << '\n';

  std::optional<Dnf> candidate;
  big_int est_pos = 0, exact_neg = 0;
  if (!candidate_text.empty()) {
    candidate = parse_dnf(candidate_text);
    const Structuring s_q = elementary_closures(family, *candidate, s_star.domain());
    est_pos = covered_positive_estimate(s_star, s_q);
    exact_neg = covered_negative(s_star, s_q);
    std::cout << "B+_Q ~ " << est_pos << '\n';
    std::cout << "B-_Q = " << exact_neg << '\n';
  }

  if (!oracle) return 0;
  const std::vector<Bag> bags = generate_bags_bruteforce(family, s_star);
  big_int oracle_pos = 0, oracle_neg = 0;
  for (const Bag& b : bags) (b.positive ? oracle_pos : oracle_neg) += 1;
  std::cout << "oracle B+ = " << oracle_pos << '\n';
  std::cout << "oracle B- = " << oracle_neg << '\n';
  std::cout << "delta B+ = " << total_pos - oracle_pos << '\n';
  std::cout << "delta B- = " << total_neg - oracle_neg << '\n';
  if (candidate) {
    big_int covered_pos = 0, covered_neg = 0;
    for (const Bag& b : bags)
      if (bag_fires(*candidate, b)) (b.positive ? covered_pos : covered_neg) += 1;
    std::cout << "oracle B+_Q = " << covered_pos << '\n';
    std::cout << "oracle B-_Q = " << covered_neg << '\n';
    std::cout << "delta B+_Q = " << est_pos - covered_pos << '\n';
    std::cout << "delta B-_Q = " << exact_neg - covered_neg << '\n';
  }
  return 0;
}

int cmd_gen_grids(const std::string& out_dir, std::size_t width, std::size_t height,
                  const std::vector<double>& percentages, std::uint64_t seed) {
  const ObstacleSeries series = generate_obstacle_series(width, height, percentages, seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create directory '" + out_dir + "': " + ec.message());
  for (std::size_t g = 0; g < series.grids.size(); ++g) {
    const std::string path = out_dir + "/grid_" +
                             detail::format_double(series.percentages[g]) + ".txt";
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    write_grid(out, series.grids[g]);
    if (!out.flush()) throw io_error("writing '" + path + "' failed");
    std::cout << path << '\n';
  }
  return 0;
}

int cmd_experiment(const ExperimentConfig& config) {
  const ExperimentOutput out = run_experiment_to_files(config);
  std::cout << "rows: " << out.records.size() << '\n';
  std::cout << "csv: " << out.csv_path << '\n';
  std::cout << "mean_csv: " << out.mean_csv_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pretopological propagation models: simulate, learn, count, benchmark"};
  app.require_subcommand(1);

  std::string grid_path, input_path, structuring_path, model_text, candidate_text;
  std::string config_path, out_path;
  std::size_t origin = 0;
  std::uint64_t seed = 0;
  std::size_t width = 15, height = 15;
  std::vector<double> percentages = {0, 10, 20, 30, 40, 50, 60};
  bool oracle = false;
  std::size_t beam = 0, pop = 0;
  double pull = 0;

  CLI::App* sim = app.add_subcommand("simulate", "burn one fire and render the grid");
  sim->add_option("grid", grid_path, "grid file")->required();
  sim->add_option("model", model_text, "propagation model, a positive DNF")->required();
  sim->add_option("origin", origin, "origin cell, row-major index")->required();

  CLI::App* gen = app.add_subcommand("gen-grids", "write a nested obstacle series");
  gen->add_option("--out", out_path, "output directory")->required();
  gen->add_option("--width", width, "grid width");
  gen->add_option("--height", height, "grid height");
  gen->add_option("--obstacles", percentages, "obstacle percentages, ascending");
  gen->add_option("--seed", seed, "rng seed");

  CLI::App* lrn = app.add_subcommand("learn", "fit a model to observed closures");
  lrn->add_option("input", input_path, "grid or neighborhood file")->required();
  lrn->add_option("structuring", structuring_path, "observed elementary closures")
      ->required();
  lrn->add_option("--config", config_path, "learner config file");
  lrn->add_option("--beam", beam, "beam width override");
  lrn->add_option("--pop", pop, "genetic population override");
  lrn->add_option("--p", pull, "intrinsic pull parameter override");
  lrn->add_option("--seed", seed, "rng seed override");

  CLI::App* bag = app.add_subcommand("bags", "count learning bags");
  bag->add_option("input", input_path, "grid or neighborhood file")->required();
  bag->add_option("structuring", structuring_path, "observed elementary closures")
      ->required();
  bag->add_option("candidate", candidate_text, "candidate model, a positive DNF");
  bag->add_flag("--oracle", oracle, "also materialize every bag (small universes only)");

  CLI::App* exp = app.add_subcommand("experiment", "run a benchmark config to CSV");
  exp->add_option("--config", config_path, "experiment config file")->required();
  exp->add_option("--out", out_path, "output CSV path override");
  exp->add_option("--seed", seed, "master seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(grid_path, model_text, origin);
    if (gen->parsed()) return cmd_gen_grids(out_path, width, height, percentages, seed);
    if (lrn->parsed()) {
      LearnerConfig config;
      if (!config_path.empty()) config = parse_learner_config(slurp(config_path));
      if (lrn->count("--beam")) config.beam_size = beam;
      if (lrn->count("--pop")) config.initial_pop = pop;
      if (lrn->count("--p")) config.p = pull;
      if (lrn->count("--seed")) config.rng_seed = seed;
      return cmd_learn(input_path, structuring_path, config);
    }
    if (bag->parsed()) return cmd_bags(input_path, structuring_path, candidate_text, oracle);
    if (exp->parsed()) {
      ExperimentConfig config = parse_experiment_config(slurp(config_path));
      if (exp->count("--out")) config.output_path = out_path;
      if (exp->count("--seed")) config.rng_seed = seed;
      return cmd_experiment(config);
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const size_error& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return 4;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
