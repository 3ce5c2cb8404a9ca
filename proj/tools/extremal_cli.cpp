// Command-line front end for the extremal vector library.
//
//   extremal solve --problem p.json
//   extremal sweep-dir --problem p.json --direction 0,2 --grid 0,3,61
//
// Exit status: 0 on success, 2 on validation errors, 3 when a solve fails
// to converge.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "extremal/extremal.hpp"

namespace {

using namespace extremal;

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

struct Options {
  std::string problem_path;
  std::string out_path;
  double tol = SolverConfig{}.tol_residual_rel;
  int max_iter = SolverConfig{}.max_iterations;
  std::string grid;
  bool log_grid = false;
  std::string direction;
  std::uint64_t seed = 7;
  std::int64_t samples = 100000;
  std::string y_list;
  std::string solution_path;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error,
                  std::string(flag) + " has a malformed entry '" + item + "'");
    }
  }
  if (values.empty()) throw Error(ErrorCode::parse_error, std::string(flag) + " is empty");
  return values;
}

/// (start, stop, count), inclusive, uniform or geometric.
std::vector<double> parse_grid(const std::string& text, bool log_spaced) {
  const auto parts = parse_list(text, "--grid");
  if (parts.size() != 3) {
    throw Error(ErrorCode::parse_error, "--grid expects start,stop,count");
  }
  const double start = parts[0];
  const double stop = parts[1];
  const double count_d = parts[2];
  if (count_d < 2 || count_d != std::floor(count_d)) {
    throw Error(ErrorCode::parse_error, "--grid count must be an integer >= 2");
  }
  const auto count = static_cast<int>(count_d);
  if (log_spaced && !(start > 0.0 && stop > 0.0)) {
    throw Error(ErrorCode::parse_error, "--log-grid requires positive start and stop");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    if (i == count - 1) {
      grid.push_back(stop);
    } else if (log_spaced) {
      grid.push_back(start * std::pow(stop / start, f));
    } else {
      grid.push_back(start + (stop - start) * f);
    }
  }
  return grid;
}

template <FieldScalar Scalar>
Vector<Scalar> to_vector(const std::vector<double>& values) {
  Vector<Scalar> v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = Scalar(values[i]);
  }
  return v;
}

template <FieldScalar Scalar>
Vector<Scalar> direction_for(const Options& opt, const Problem<Scalar>& p) {
  if (opt.direction.empty()) {
    throw Error(ErrorCode::parse_error, "--direction is required");
  }
  auto u = to_vector<Scalar>(parse_list(opt.direction, "--direction"));
  if (u.size() != p.x0().size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "--direction has " + std::to_string(u.size()) + " entries, x0 has " +
                    std::to_string(p.x0().size()));
  }
  return u;
}

std::vector<double> required_grid(const Options& opt) {
  if (opt.grid.empty()) throw Error(ErrorCode::parse_error, "--grid is required");
  return parse_grid(opt.grid, opt.log_grid);
}

template <FieldScalar Scalar>
Vector<Scalar> supplied_y(const Options& opt) {
  if (!opt.solution_path.empty()) {
    std::ifstream in(opt.solution_path);
    if (!in) throw Error(ErrorCode::parse_error, "cannot open " + opt.solution_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::parse_error, std::string("solution: ") + e.what());
    }
    if (!doc.contains("y") || !doc["y"].is_array()) {
      throw Error(ErrorCode::parse_error, "solution document has no array 'y'");
    }
    const auto& arr = doc["y"];
    Vector<Scalar> y(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      y(static_cast<Eigen::Index>(i)) =
          detail::parse_scalar<Scalar>(arr[i], "y[" + std::to_string(i) + "]");
    }
    return y;
  }
  if (!opt.y_list.empty()) return to_vector<Scalar>(parse_list(opt.y_list, "--y"));
  throw Error(ErrorCode::parse_error, "verify needs --y or --solution");
}

template <FieldScalar Scalar>
std::string oracle_compare(const Options& opt, const Problem<Scalar>& p,
                           const SolverConfig& config) {
  const auto solved = solve_extremal(p, config);
  const auto& op = p.op();
  std::vector<std::string> entries;
  auto add = [&](const OracleResult<Scalar>& o, double tol) {
    entries.push_back(comparison_json(compare(solved, o, tol), o.y_norm, o.samples_used));
  };
  add(lambda_grid_oracle(op, p.x0(), p.epsilon(), 24), 1e-6);
  if constexpr (!is_complex_v<Scalar>) {
    if (op.rows() == 2 && op.cols() == 2 && op.is_invertible()) {
      add(angle_grid_oracle_2d(op, p.x0(), p.epsilon(), 3600), 1e-6);
    }
  }
  if (op.is_invertible() && op.rows() <= 4) {
    add(boundary_sample_oracle(op, p.x0(), p.epsilon(), opt.samples, opt.seed), 1e-9);
  }
  std::string out = "{\"solver_y_norm\":" + format_number(solved.y.norm()) +
                    ",\"solver_r\":" + format_number(solved.r) + ",\"comparisons\":[";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ',';
    out += entries[i];
  }
  return out + "]}\n";
}

template <FieldScalar Scalar>
std::string run_subcommand(const std::string& name, const Options& opt,
                           const Problem<Scalar>& p) {
  SolverConfig config;
  config.tol_residual_rel = opt.tol;
  config.max_iterations = opt.max_iter;
  config.validate();
  const auto& op = p.op();

  if (name == "solve") return result_json(solve_extremal(p, config));
  if (name == "sweep-eps") {
    return to_csv(sweep_epsilon(op, p.x0(), required_grid(opt), config));
  }
  if (name == "sweep-ray") {
    return to_csv(sweep_ray(op, p.x0(), p.epsilon(), required_grid(opt), config));
  }
  if (name == "sweep-dir") {
    return to_csv(sweep_direction(op, p.x0(), direction_for(opt, p), p.epsilon(),
                                  required_grid(opt), config));
  }
  if (name == "probe-continuity") {
    const auto deltas = opt.grid.empty() ? parse_grid("1e-1,1e-4,10", true)
                                         : parse_grid(opt.grid, opt.log_grid);
    return to_csv(
        continuity_probe(op, p.x0(), direction_for(opt, p), p.epsilon(), deltas, config));
  }
  if (name == "probe-smoothness") {
    const auto hs = opt.grid.empty() ? parse_grid("1e-2,1.25e-3,4", true)
                                     : parse_grid(opt.grid, opt.log_grid);
    return to_csv(smoothness_probe(op, p.x0(), p.epsilon(), hs, config));
  }
  if (name == "verify") {
    return kkt_json(kkt_verify(op, p.x0(), p.epsilon(), supplied_y<Scalar>(opt))) + "\n";
  }
  if (name == "oracle-compare") return oracle_compare(opt, p, config);
  throw Error(ErrorCode::invalid_argument, "unknown subcommand " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-norm extremal vectors: solve, sweep, probe and certify"};
  app.require_subcommand(1, 1);
  Options opt;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "Compute the extremal vector and its multiplier"},
      {"sweep-eps", "Sweep epsilon over --grid"},
      {"sweep-ray", "Sweep t*x0 over --grid"},
      {"sweep-dir", "Sweep x0 + t*u over --grid along --direction"},
      {"probe-continuity", "Shrink perturbations of x0 along --direction"},
      {"probe-smoothness", "Richardson check of d||y||/d(epsilon)"},
      {"verify", "Structural diagnostics of a supplied y"},
      {"oracle-compare", "Certify the solver against brute-force oracles"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--problem", opt.problem_path, "Problem document")->required();
    sub->add_option("--out", opt.out_path, "Output path (default: stdout)");
    sub->add_option("--tol", opt.tol, "Relative boundary tolerance");
    sub->add_option("--max-iter", opt.max_iter, "Maximum secular evaluations");
    sub->add_option("--grid", opt.grid, "start,stop,count");
    sub->add_flag("--log-grid", opt.log_grid, "Geometric grid spacing");
    sub->add_option("--direction", opt.direction, "Comma-separated direction u");
    sub->add_option("--seed", opt.seed, "Sampling oracle seed");
    sub->add_option("--samples", opt.samples, "Sampling oracle sample count");
    if (name == "verify") {
      sub->add_option("--y", opt.y_list, "Comma-separated candidate y");
      sub->add_option("--solution", opt.solution_path, "Output of `solve` to re-verify");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    const AnyProblem problem = load_problem_file(opt.problem_path);
    const std::string document = std::visit(
        [&](const auto& p) { return run_subcommand(name, opt, p); }, problem);
    if (opt.out_path.empty()) {
      std::cout << document;
    } else {
      std::ofstream out(opt.out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << opt.out_path << "\n";
        return kExitValidation;
      }
      out << document;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_validation() ? kExitValidation : kExitConvergence;
  }
  return 0;
}
