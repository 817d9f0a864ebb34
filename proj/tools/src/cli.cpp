#include "bellman_lab/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "bellman_lab/errors.hpp"
#include "bellman_lab/search.hpp"
#include "bellman_lab/serialize.hpp"
#include "bellman_lab/tree_maximal.hpp"
#include "bellman_lab/weak_norms.hpp"

#ifndef BELLMAN_LAB_VERSION
#define BELLMAN_LAB_VERSION "0.0.0"
#endif

namespace bellman_lab::cli {

std::string format_real(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

namespace {

double parse_real(std::string_view text, const char* what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && end[-1] == ' ') --end;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DomainError(std::string("cannot parse ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<double> parse_lambda_grid(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
    throw DomainError("lambda grid must be start:stop:step, got '" + std::string(spec) + "'");
  }
  const double start = parse_real(spec.substr(0, first), "grid start");
  const double stop = parse_real(spec.substr(first + 1, second - first - 1), "grid stop");
  const double step = parse_real(spec.substr(second + 1), "grid step");
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("lambda grid step must be > 0");
  std::vector<double> grid;
  // Index-based so that rounding does not accumulate; points within a tiny
  // relative margin of stop are treated as stop and excluded.
  for (std::uint64_t i = 0;; ++i) {
    const double x = start + static_cast<double>(i) * step;
    if (!(x < stop - 1e-12 * std::max(1.0, std::fabs(stop)))) break;
    grid.push_back(x);
    if (grid.size() > 1000000) throw DomainError("lambda grid has more than 10^6 points");
  }
  if (grid.empty()) throw DomainError("lambda grid '" + std::string(spec) + "' is empty");
  return grid;
}

std::vector<SweepRow> run_sweep(const SweepSettings& settings, const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("empty lambda grid");
  const TreePartition tree = TreePartition::build(settings.arity, settings.depth);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t index = 0; index < grid.size(); ++index) {
    BellmanQuery q = settings.query;
    q.lambda = grid[index];
    const ClosedForm form = closed_form(q);
    SweepRow row;
    row.lambda = q.lambda;
    row.closed_form = form.value;
    row.branch = std::string(to_string(form.branch));
    row.achieved = std::numeric_limits<double>::quiet_NaN();
    row.source = "none";

    SearchConfig config;
    config.query = q;
    config.arity = settings.arity;
    config.depth = settings.depth;
    config.seed = settings.seed;
    config.trials = settings.search_trials;
    config.moves = settings.search_moves;

    bool done = false;
    if (q.lambda <= q.f) {
      // The root average is f >= lambda, so every feasible function attains 1.
      try {
        auto rng = trial_rng(settings.seed, index);
        const StepFunction phi = sample_feasible(config, rng);
        row.achieved = search_objective(phi, q.lambda);
        row.source = "any_feasible";
        done = true;
      } catch (const SamplingError&) {
      }
    }
    if (!done && (form.branch == Branch::power || q.functional == Functional::B1)) {
      try {
        const ExtremalRecipe recipe = extremal_for(q, tree);
        row.achieved = recipe.discrete_metrics.distribution;
        row.source = "recipe";
        done = true;
      } catch (const DomainError&) {
      } catch (const NumericError&) {
      }
    }
    if (!done) {
      const SearchReport report = maximize(config);
      row.achieved = report.best;
      row.source = "search";
    }
    row.gap = row.closed_form - row.achieved;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "lambda,closed_form,achieved,gap,branch,source\n";
  for (const auto& r : rows) {
    os << format_real(r.lambda) << ',' << format_real(r.closed_form) << ','
       << format_real(r.achieved) << ',' << format_real(r.gap) << ',' << r.branch << ','
       << r.source << '\n';
  }
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  file << text;
  if (!file) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

std::vector<std::filesystem::path> emit_plot_data(const std::vector<SweepRow>& rows,
                                                  const std::filesystem::path& dir) {
  if (rows.empty()) throw DomainError("no sweep rows to emit");
  std::ostringstream closed;
  std::ostringstream achieved;
  closed << "lambda,closed_form\n";
  achieved << "lambda,achieved\n";
  for (const auto& r : rows) {
    closed << format_real(r.lambda) << ',' << format_real(r.closed_form) << '\n';
    achieved << format_real(r.lambda) << ',' << format_real(r.achieved) << '\n';
  }
  std::vector<std::filesystem::path> paths{dir / "closed_form.csv", dir / "achieved.csv"};
  write_file(paths[0], closed.str());
  write_file(paths[1], achieved.str());
  return paths;
}

namespace {

struct QueryFlags {
  std::string functional = "B";
  double p = 2.0;
  double f = 0.0;
  double F = 1.0;
  double lambda = 1.0;

  BellmanQuery query() const { return {p, f, F, lambda, parse_functional(functional)}; }
};

void add_query_flags(CLI::App* sub, QueryFlags& q, bool with_lambda) {
  sub->add_option("--functional", q.functional, "B, B1 or B2")->capture_default_str();
  sub->add_option("--p", q.p, "exponent p > 1")->capture_default_str();
  sub->add_option("--f", q.f, "integral of phi")->required();
  sub->add_option("--F", q.F, "norm level F")->capture_default_str();
  if (with_lambda) sub->add_option("--lambda", q.lambda, "level lambda")->required();
}

struct TreeFlags {
  int arity = 2;
  int depth = 10;
};

void add_tree_flags(CLI::App* sub, TreeFlags& t) {
  sub->add_option("--arity", t.arity, "children per node")->capture_default_str();
  sub->add_option("--depth", t.depth, "tree depth")->capture_default_str();
}

struct InputFlags {
  std::string values;
  std::string input;
  int arity = 2;
};

void add_input_flags(CLI::App* sub, InputFlags& in) {
  auto* group = sub->add_option_group("input");
  group->add_option("--values", in.values, "comma-separated leaf values (left to right)");
  group->add_option("--input", in.input, "step function JSON {arity, depth, values}");
  group->require_option(1);
  sub->add_option("--arity", in.arity, "arity for --values")->capture_default_str();
}

StepFunction load_input(const InputFlags& in) {
  if (!in.input.empty()) {
    std::ifstream file(in.input);
    if (!file) throw std::runtime_error("cannot open '" + in.input + "'");
    json doc;
    try {
      doc = json::parse(file);
    } catch (const json::exception& e) {
      throw DomainError("'" + in.input + "' is not valid JSON: " + e.what());
    }
    return step_function_from_json(doc);
  }
  std::vector<double> values;
  std::string_view rest = in.values;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    values.push_back(parse_real(rest.substr(0, comma), "leaf value"));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (in.arity < 2) throw DomainError("arity must be >= 2");
  int depth = 0;
  std::uint64_t count = 1;
  while (count < values.size()) {
    count *= static_cast<std::uint64_t>(in.arity);
    ++depth;
  }
  if (depth < 1 || count != values.size()) {
    throw DomainError("got " + std::to_string(values.size()) +
                      " leaf values; expected arity^depth with depth >= 1 for arity " +
                      std::to_string(in.arity));
  }
  return StepFunction(TreePartition::build(in.arity, depth), std::move(values));
}

struct OutputFlags {
  std::string output;
};

void add_output_flag(CLI::App* sub, OutputFlags& o) {
  sub->add_option("--output", o.output, "write the main output here (default: stdout)");
}

struct Context {
  Context(std::ostream& o, std::ostream& e, std::string name)
      : out(o), err(e), subcommand(std::move(name)) {}

  std::ostream& out;
  std::ostream& err;
  std::string subcommand;
  json parameters = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
  std::chrono::steady_clock::time_point steady_start = std::chrono::steady_clock::now();

  json manifest() const {
    return json{{"tool", "bellman-lab"},
                {"version", BELLMAN_LAB_VERSION},
                {"subcommand", subcommand},
                {"parameters", parameters},
                {"seed", seed}};
  }

  // The main output is deterministic; the wall clock only goes to the
  // sidecar manifest next to a written file.
  void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
      out << text;
      return;
    }
    write_file(path, text);
    outputs.push_back(path);
    json side = manifest();
    side["outputs"] = outputs;
    const std::time_t t = std::chrono::system_clock::to_time_t(started);
    std::tm utc{};
    gmtime_r(&t, &utc);
    std::ostringstream stamp;
    stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - steady_start).count();
    side["wall_clock"] = json{{"started", stamp.str()}, {"elapsed_seconds", elapsed}};
    write_file(path + ".manifest.json", side.dump(2) + "\n");
  }

  void track(const std::string& path) { outputs.push_back(path); }
};

json query_parameters(const BellmanQuery& q, bool with_lambda) {
  json j{{"functional", to_string(q.functional)}, {"p", q.p}, {"f", q.f}, {"F", q.F}};
  if (with_lambda) j["lambda"] = q.lambda;
  return j;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int cmd_closed_form(Context& ctx, const QueryFlags& qf, const OutputFlags& of) {
  const BellmanQuery q = qf.query();
  ctx.parameters = query_parameters(q, true);
  const ClosedForm form = closed_form(q);
  json doc;
  doc["value"] = form.value;
  doc["branch"] = to_string(form.branch);
  doc["thresholds"] = json::array({form.threshold_low, form.threshold_high});
  doc["schema"] = kSchemaId;
  doc["query"] = to_json(q);
  doc["manifest"] = ctx.manifest();
  ctx.emit(dump(doc), of.output);
  return kExitOk;
}

int cmd_extremal(Context& ctx, const QueryFlags& qf, const TreeFlags& tf, const OutputFlags& of,
                 const std::string& values_csv) {
  const BellmanQuery q = qf.query();
  ctx.parameters = query_parameters(q, true);
  ctx.parameters["arity"] = tf.arity;
  ctx.parameters["depth"] = tf.depth;
  const TreePartition tree = TreePartition::build(tf.arity, tf.depth);
  const ExtremalRecipe recipe = extremal_for(q, tree);
  json doc = to_json(recipe);
  doc["manifest"] = ctx.manifest();
  if (!values_csv.empty()) {
    std::ostringstream os;
    os << "leaf,lo,hi,value\n";
    const double h = tree.leaf_measure();
    const auto values = recipe.discretized.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      os << i << ',' << format_real(static_cast<double>(i) * h) << ','
         << format_real(static_cast<double>(i + 1) * h) << ',' << format_real(values[i]) << '\n';
    }
    write_file(values_csv, os.str());
    ctx.track(values_csv);
  }
  ctx.emit(dump(doc), of.output);
  return kExitOk;
}

int cmd_norms(Context& ctx, const InputFlags& in, double p, const OutputFlags& of) {
  const StepFunction phi = load_input(in);
  ctx.parameters = json{{"p", p},
                        {"arity", phi.partition().arity()},
                        {"depth", phi.partition().depth()}};
  if (!in.input.empty()) ctx.parameters["input"] = in.input;
  const NormResult quasi = quasi_norm(phi, p);
  const NormResult equiv = equiv_norm(phi, p);
  json doc;
  doc["schema"] = kSchemaId;
  doc["p"] = p;
  doc["quasi_norm"] = to_json(quasi);
  doc["equiv_norm"] = to_json(equiv);
  const NormComparison cmp = norm_comparison_check(phi, p);
  doc["k"] = cmp.k;
  doc["ratios"] = json{{"equiv_over_quasi", cmp.equiv_over_quasi},
                       {"k_quasi_over_equiv", cmp.k_quasi_over_equiv}};
  doc["integral"] = integral(phi);
  doc["manifest"] = ctx.manifest();
  ctx.emit(dump(doc), of.output);
  return kExitOk;
}

int cmd_maximal(Context& ctx, const InputFlags& in, std::optional<double> lambda,
                const std::string& leaf_output, const OutputFlags& of) {
  const StepFunction phi = load_input(in);
  ctx.parameters = json{{"arity", phi.partition().arity()}, {"depth", phi.partition().depth()}};
  if (!in.input.empty()) ctx.parameters["input"] = in.input;
  if (lambda) ctx.parameters["lambda"] = *lambda;
  const MaximalResult maximal = maximal_function(phi);
  if (lambda) {
    const WeakTypeReport weak = weak_type_check(phi, *lambda);
    ctx.err << "weak type (1,1) at lambda=" << format_real(weak.lambda)
            << ": measure=" << format_real(weak.measure) << " bound=" << format_real(weak.bound)
            << '\n';
  }
  if (!leaf_output.empty()) {
    std::ostringstream os;
    os << "leaf,value,maximal,argmax_level,argmax_index\n";
    for (std::size_t i = 0; i < phi.size(); ++i) {
      os << i << ',' << format_real(phi.value(i)) << ',' << format_real(maximal.values.value(i))
         << ',' << maximal.argmax[i].level << ',' << maximal.argmax[i].index << '\n';
    }
    write_file(leaf_output, os.str());
    ctx.track(leaf_output);
  }
  std::ostringstream os;
  os << "lambda,measure\n";
  for (const auto& point : distribution_curve(maximal)) {
    os << format_real(point.lambda) << ',' << format_real(point.measure) << '\n';
  }
  ctx.emit(os.str(), of.output);
  return kExitOk;
}

struct SearchFlags {
  QueryFlags query;
  TreeFlags tree;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string optimizer;
  std::string mode;
  std::uint64_t moves = 50000;
  unsigned threads = 0;
  std::string certificate;
};

void add_search_flags(CLI::App* sub, SearchFlags& s, const char* default_optimizer) {
  add_query_flags(sub, s.query, true);
  add_tree_flags(sub, s.tree);
  s.optimizer = default_optimizer;
  sub->add_option("--trials", s.trials, "random trials")->capture_default_str();
  sub->add_option("--seed", s.seed, "seed of the sample stream")->capture_default_str();
  sub->add_option("--optimizer", s.optimizer, "random, coordinate_ascent or anneal")
      ->capture_default_str();
  sub->add_option("--mode", s.mode, "norm_le_F, norm_eq_F_quasi or norm_eq_F_equiv");
  sub->add_option("--moves", s.moves, "local-search moves")->capture_default_str();
  sub->add_option("--threads", s.threads, "worker threads (0: BELLMAN_LAB_THREADS or all)");
  sub->add_option("--emit-certificate", s.certificate, "write the best phi as step function JSON");
}

SearchConfig make_config(const SearchFlags& s) {
  SearchConfig config;
  config.query = s.query.query();
  config.arity = s.tree.arity;
  config.depth = s.tree.depth;
  config.trials = s.trials;
  config.seed = s.seed;
  config.optimizer = parse_optimizer(s.optimizer);
  config.moves = s.moves;
  config.threads = s.threads;
  if (!s.mode.empty()) {
    if (s.mode == "norm_le_F") {
      config.mode = ConstraintMode::norm_le_F;
    } else if (s.mode == "norm_eq_F_quasi") {
      config.mode = ConstraintMode::norm_eq_F_quasi;
    } else if (s.mode == "norm_eq_F_equiv") {
      config.mode = ConstraintMode::norm_eq_F_equiv;
    } else {
      throw DomainError("unknown constraint mode '" + s.mode + "'");
    }
  }
  return config;
}

int finish_search(Context& ctx, const SearchFlags& s, const SearchReport& report,
                  const OutputFlags& of) {
  if (!s.certificate.empty()) {
    write_file(s.certificate, dump(to_json(report.best_certificate)));
    ctx.track(s.certificate);
  }
  json doc = to_json(report, false);
  if (report.violation_certificate) {
    doc["violation_certificate"] = to_json(*report.violation_certificate);
  }
  doc["manifest"] = ctx.manifest();
  ctx.emit(dump(doc), of.output);
  const auto& st = report.stats;
  if (report.violations > 0 || st.weak_type_violations > 0 || st.maximal_norm_violations > 0) {
    ctx.err << "invariant violation: " << report.violations << " upper-bound, "
            << st.weak_type_violations << " weak-type, " << st.maximal_norm_violations
            << " maximal-norm violations\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_search(Context& ctx, const SearchFlags& s, const OutputFlags& of, bool verify) {
  const SearchConfig config = make_config(s);
  ctx.parameters = to_json(config);
  ctx.seed = config.seed;
  const SearchReport report = verify ? verify_upper_bound(config) : maximize(config);
  return finish_search(ctx, s, report, of);
}

int cmd_sweep(Context& ctx, const QueryFlags& qf, const TreeFlags& tf, const std::string& grid_spec,
              std::uint64_t seed, std::uint64_t trials, std::uint64_t moves,
              const std::string& plot_dir, const OutputFlags& of) {
  SweepSettings settings;
  settings.query = qf.query();
  settings.arity = tf.arity;
  settings.depth = tf.depth;
  settings.seed = seed;
  settings.search_trials = trials;
  settings.search_moves = moves;
  const std::vector<double> grid = parse_lambda_grid(grid_spec);
  ctx.parameters = query_parameters(settings.query, false);
  ctx.parameters["lambda_grid"] = grid_spec;
  ctx.parameters["arity"] = tf.arity;
  ctx.parameters["depth"] = tf.depth;
  ctx.parameters["search_trials"] = trials;
  ctx.parameters["search_moves"] = moves;
  ctx.seed = seed;
  const auto rows = run_sweep(settings, grid);
  if (!plot_dir.empty()) {
    for (const auto& path : emit_plot_data(rows, plot_dir)) ctx.track(path.string());
  }
  ctx.emit(sweep_csv(rows), of.output);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree maximal operators, weak-L^p norms and Bellman function checks",
               "bellman-lab"};
  app.set_version_flag("--version", BELLMAN_LAB_VERSION);
  app.require_subcommand(1);

  std::function<int(Context&)> action;
  OutputFlags output;

  QueryFlags cf_query;
  auto* closed = app.add_subcommand("closed-form", "closed form of B, B1 or B2");
  add_query_flags(closed, cf_query, true);
  add_output_flag(closed, output);
  closed->callback([&] { action = [&](Context& c) { return cmd_closed_form(c, cf_query, output); }; });

  QueryFlags ex_query;
  TreeFlags ex_tree{2, 14};
  std::string values_csv;
  auto* extremal = app.add_subcommand("extremal", "discretized extremal function and its metrics");
  add_query_flags(extremal, ex_query, true);
  add_tree_flags(extremal, ex_tree);
  extremal->add_option("--values-csv", values_csv, "also write the leaf values as CSV");
  add_output_flag(extremal, output);
  extremal->callback([&] {
    action = [&](Context& c) { return cmd_extremal(c, ex_query, ex_tree, output, values_csv); };
  });

  InputFlags norms_in;
  double norms_p = 2.0;
  auto* norms = app.add_subcommand("norms", "quasi-norm and equivalent norm of a step function");
  add_input_flags(norms, norms_in);
  norms->add_option("--p", norms_p, "exponent p > 1")->capture_default_str();
  add_output_flag(norms, output);
  norms->callback([&] {
    action = [&](Context& c) {
      if (!(norms_p > 1.0)) throw DomainError("p must be > 1");
      return cmd_norms(c, norms_in, norms_p, output);
    };
  });

  InputFlags max_in;
  std::optional<double> max_lambda;
  std::string leaf_output;
  auto* maximal = app.add_subcommand("maximal", "tree maximal function and its distribution curve");
  add_input_flags(maximal, max_in);
  maximal->add_option("--lambda", max_lambda, "also check the weak type (1,1) inequality here");
  maximal->add_option("--leaf-output", leaf_output, "write leaf values of M_T phi as CSV");
  add_output_flag(maximal, output);
  maximal->callback([&] {
    action = [&](Context& c) {
      if (max_lambda && !(*max_lambda > 0.0)) throw DomainError("lambda must be > 0");
      return cmd_maximal(c, max_in, max_lambda, leaf_output, output);
    };
  });

  SearchFlags verify_flags;
  auto* verify = app.add_subcommand("verify-bound", "random feasible samples against the closed form");
  add_search_flags(verify, verify_flags, "random");
  add_output_flag(verify, output);
  verify->callback([&] { action = [&](Context& c) { return cmd_search(c, verify_flags, output, true); }; });

  SearchFlags search_flags;
  auto* search = app.add_subcommand("search", "local search approaching the closed form from below");
  add_search_flags(search, search_flags, "coordinate_ascent");
  add_output_flag(search, output);
  search->callback([&] { action = [&](Context& c) { return cmd_search(c, search_flags, output, false); }; });

  QueryFlags sw_query;
  TreeFlags sw_tree{2, 12};
  std::string grid;
  std::uint64_t sw_seed = 0;
  std::uint64_t sw_trials = 200;
  std::uint64_t sw_moves = 5000;
  std::string plot_dir;
  auto* sweep = app.add_subcommand("sweep", "closed form against achieved values over a lambda grid");
  add_query_flags(sweep, sw_query, false);
  add_tree_flags(sweep, sw_tree);
  sweep->add_option("--lambda-grid", grid, "start:stop:step (stop excluded)")->required();
  sweep->add_option("--seed", sw_seed, "seed for sampled points")->capture_default_str();
  sweep->add_option("--search-trials", sw_trials, "random trials where search is needed")
      ->capture_default_str();
  sweep->add_option("--search-moves", sw_moves, "local-search moves where search is needed")
      ->capture_default_str();
  sweep->add_option("--plot-dir", plot_dir, "write closed_form.csv and achieved.csv here");
  add_output_flag(sweep, output);
  sweep->callback([&] {
    action = [&](Context& c) {
      return cmd_sweep(c, sw_query, sw_tree, grid, sw_seed, sw_trials, sw_moves, plot_dir, output);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Context ctx{out, err, app.get_subcommands().front()->get_name()};
  try {
    return action(ctx);
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace bellman_lab::cli
