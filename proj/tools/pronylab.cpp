#include <prony/prony.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using nlohmann::json;

namespace {

struct Options {
  std::string input;
  std::string output;
  std::uint64_t seed = 1;
  bool seed_given = false;
  double tol_rank = -1.0;  // negative: library default
  double tol_real = -1.0;
  long long samples = -1;  // negative: input field or command default
  bool quiet = false;
};

prony::Tolerances tolerances(const Options& o) {
  prony::Tolerances tol;
  if (o.tol_rank >= 0.0) tol.rank = o.tol_rank;
  if (o.tol_real >= 0.0) tol.real = o.tol_real;
  return tol;
}

std::string read_stream(std::istream& is) {
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// --input accepts a file path or an inline JSON object; stdin otherwise.
json load_input(const Options& o) {
  std::string text;
  if (o.input.empty()) {
    text = read_stream(std::cin);
  } else if (const std::size_t first = o.input.find_first_not_of(" \t\r\n");
             first != std::string::npos && o.input[first] == '{') {
    text = o.input;
  } else {
    std::ifstream in(o.input);
    if (!in)
      throw prony::InvalidArgument("cannot open input file '" + o.input + "'");
    text = read_stream(in);
  }
  return json::parse(text);
}

const json& require_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw prony::InvalidArgument(std::string("missing field '") + key + "'");
  return j.at(key);
}

prony::Vector get_vector(const json& j, const char* key) {
  const json& a = require_field(j, key);
  if (!a.is_array())
    throw prony::InvalidArgument(std::string("field '") + key +
                                 "' must be a numeric array");
  prony::Vector v(static_cast<int>(a.size()));
  int i = 0;
  for (const json& x : a) {
    if (!x.is_number())
      throw prony::InvalidArgument(std::string("field '") + key +
                                   "' must be a numeric array");
    v[i++] = x.get<double>();
  }
  return v;
}

int get_int(const json& j, const char* key) {
  const json& x = require_field(j, key);
  if (!x.is_number_integer())
    throw prony::InvalidArgument(std::string("field '") + key +
                                 "' must be an integer");
  return x.get<int>();
}

double get_double(const json& j, const char* key) {
  const json& x = require_field(j, key);
  if (!x.is_number())
    throw prony::InvalidArgument(std::string("field '") + key +
                                 "' must be a number");
  return x.get<double>();
}

long long resolve_samples(const Options& o, const json& in, const char* key,
                          long long fallback) {
  if (o.samples >= 0) return o.samples;
  if (in.is_object() && in.contains(key)) {
    const json& x = in.at(key);
    if (!x.is_number_integer() || x.get<long long>() < 1)
      throw prony::InvalidArgument(std::string("field '") + key +
                                   "' must be a positive integer");
    return x.get<long long>();
  }
  return fallback;
}

std::uint64_t resolve_seed(const Options& o, const json& in) {
  if (o.seed_given) return o.seed;
  if (in.is_object() && in.contains("seed")) {
    const json& x = in.at("seed");
    if (!x.is_number_integer())
      throw prony::InvalidArgument("field 'seed' must be an integer");
    return x.get<std::uint64_t>();
  }
  return o.seed;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw prony::InvalidArgument("cannot open output file '" + path + "'");
  out << text;
  if (!out.good())
    throw prony::InvalidArgument("failed writing output file '" + path + "'");
}

/// JSON results go to --output when given, to stdout otherwise.
int emit_json(const Options& o, const prony::JsonValue& v, int code) {
  const std::string text = v.dump() + "\n";
  if (!o.output.empty())
    write_text(o.output, text);
  else if (!o.quiet)
    std::cout << text;
  return code;
}

/// Table commands: CSV to --output (mandatory), JSON summary to stdout.
int emit_table(const Options& o, const prony::CsvTable& table,
               const prony::JsonValue& summary, int code) {
  if (o.output.empty())
    throw prony::InvalidArgument(
        "this command writes a CSV table and requires --output");
  std::ostringstream csv;
  prony::write_csv(csv, table);
  write_text(o.output, csv.str());
  if (!o.quiet) std::cout << summary.dump() << "\n";
  return code;
}

const char* status_name(const prony::SolveOutcome& out) {
  if (out.is_real()) return "real";
  if (out.is_complex()) return "complex";
  if (out.is_rank_deficient()) return "rank_deficient";
  return "unsolvable";
}

/// Real solutions (full or reduced) exit 0, complex-only 2, infeasible 3.
int outcome_exit(const prony::SolveOutcome& out) {
  if (out.is_real()) return 0;
  if (out.is_rank_deficient())
    return std::get<prony::RankDeficient>(out.result).reduced ? 0 : 2;
  if (out.is_complex()) return 2;
  return 3;
}

const prony::SpikeSignal* real_representative(const prony::SolveOutcome& out) {
  if (out.is_real()) return &out.signal();
  if (out.is_rank_deficient()) {
    const auto& rd = std::get<prony::RankDeficient>(out.result);
    if (rd.reduced) return &*rd.reduced;
  }
  return nullptr;
}

prony::JsonValue outcome_json(const prony::SolveOutcome& out) {
  prony::JsonValue j = prony::JsonValue::object();
  j["status"] = status_name(out);
  prony::Vector amps, nodes;
  if (const prony::SpikeSignal* sig = real_representative(out)) {
    amps = sig->amplitudes;
    nodes = sig->nodes;
  }
  j["amplitudes"] = prony::JsonValue::array(amps);
  j["nodes"] = prony::JsonValue::array(nodes);
  j["rank"] = out.rank;
  j["condition"] = out.condition;
  j["residual"] = out.residual;
  if (out.is_complex()) {
    const auto& c = std::get<prony::ComplexSolution>(out.result);
    prony::JsonValue re, im, are, aim;
    for (int i = 0; i < c.nodes.size(); ++i) {
      re.push_back(c.nodes[i].real());
      im.push_back(c.nodes[i].imag());
      are.push_back(c.amplitudes[i].real());
      aim.push_back(c.amplitudes[i].imag());
    }
    j["nodes_real"] = std::move(re);
    j["nodes_imag"] = std::move(im);
    j["amplitudes_real"] = std::move(are);
    j["amplitudes_imag"] = std::move(aim);
  }
  if (out.is_unsolvable())
    j["diagnostic"] = std::get<prony::Unsolvable>(out.result).diagnostic;
  return j;
}

prony::SpikeSignal signal_from_input(const json& in) {
  const prony::Vector a = get_vector(in, "amplitudes");
  const prony::Vector x = get_vector(in, "nodes");
  if (a.size() != x.size() || a.size() == 0)
    throw prony::InvalidArgument(
        "'amplitudes' and 'nodes' must have the same nonzero length");
  return prony::SpikeSignal{a, x}.canonical();
}

// ---------------------------------------------------------------- commands

int cmd_solve(const Options& o) {
  const json in = load_input(o);
  const int d = get_int(in, "d");
  const prony::Vector mu = get_vector(in, "moments");
  if (d < 1 || mu.size() != 2 * d)
    throw prony::InvalidArgument("'moments' must hold exactly 2d numbers");
  const prony::SolveOutcome out = prony::prony_solve(mu, d, tolerances(o));
  return emit_json(o, outcome_json(out), outcome_exit(out));
}

int cmd_moments(const Options& o) {
  const json in = load_input(o);
  const prony::SpikeSignal f = signal_from_input(in);
  int count = 2 * f.size();
  if (in.contains("count")) count = get_int(in, "count");
  if (count < 1)
    throw prony::InvalidArgument("'count' must be a positive integer");
  prony::JsonValue j = prony::JsonValue::object();
  j["d"] = f.size();
  j["count"] = count;
  j["moments"] = prony::JsonValue::array(prony::moments(f, count));
  return emit_json(o, j, 0);
}

int cmd_quadrature(const Options& o) {
  const json in = load_input(o);
  const prony::Vector mu = get_vector(in, "moments");
  const prony::Quadrature rule =
      prony::gauss_quadrature_from_moments(mu, tolerances(o));
  prony::JsonValue j = prony::JsonValue::object();
  j["nodes"] = prony::JsonValue::array(rule.nodes);
  j["weights"] = prony::JsonValue::array(rule.weights);
  j["exactness_degree"] = rule.exactness_degree;
  return emit_json(o, j, 0);
}

int cmd_expfit(const Options& o) {
  const json in = load_input(o);
  const prony::Vector samples = get_vector(in, "samples");
  const prony::ExponentialFit fit =
      prony::exponential_fit(samples, tolerances(o));
  prony::JsonValue j = prony::JsonValue::object();
  j["status"] = status_name(fit.outcome);
  j["amplitudes"] = prony::JsonValue::array(fit.amplitudes);
  j["nodes"] = prony::JsonValue::array(fit.nodes);
  prony::JsonValue exps;
  for (const std::optional<double>& z : fit.exponents)
    exps.push_back(z ? prony::JsonValue(*z) : prony::JsonValue());
  if (fit.exponents.empty()) exps = prony::JsonValue::Array{};
  j["exponents"] = std::move(exps);
  j["reduced"] = fit.reduced;
  j["residual"] = fit.residual;
  return emit_json(o, j, outcome_exit(fit.outcome));
}

int cmd_waring(const Options& o) {
  const json in = load_input(o);
  const prony::Vector b = get_vector(in, "coefficients");
  const int d = get_int(in, "d");
  const prony::WaringDecomposition dec =
      prony::waring_decompose(b, d, tolerances(o));
  prony::JsonValue j = prony::JsonValue::object();
  j["degree"] = dec.degree;
  prony::JsonValue weights, points, lambdas;
  for (const prony::WaringForm& form : dec.forms) {
    weights.push_back(form.eta);
    points.push_back(form.xi);
    lambdas.push_back(form.lambda);
  }
  j["weights"] = std::move(weights);
  j["points"] = std::move(points);
  j["lambdas"] = std::move(lambdas);
  j["residual"] = dec.residual;
  return emit_json(o, j, 0);
}

int cmd_variety_trace(const Options& o) {
  const json in = load_input(o);
  const int d = get_int(in, "d");
  const prony::Vector mu = get_vector(in, "moments");
  const double t_min = get_double(in, "t_min");
  const double t_max = get_double(in, "t_max");
  const int steps =
      static_cast<int>(resolve_samples(o, in, "steps", 201));
  const prony::Tolerances tol = tolerances(o);
  const prony::PronyCurve curve = prony::prony_curve(mu, d, tol);
  const prony::CurveTrace trace =
      prony::trace_curve(curve, t_min, t_max, steps, tol);
  const prony::CollisionReport report =
      prony::collision_diagnostics(trace, {}, tol);

  prony::CsvTable table;
  table.header = {"t"};
  for (int i = 0; i < d; ++i) table.header.push_back("c" + std::to_string(i));
  for (int i = 1; i <= d; ++i) table.header.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d; ++i) table.header.push_back("a" + std::to_string(i));
  table.header.insert(table.header.end(),
                      {"hyperbolic", "on_boundary", "amplitudes_defined",
                       "min_gap", "max_abs_amplitude", "moment_residual"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const prony::CurveSample& s : trace.samples) {
    std::vector<double> row{s.t};
    for (int i = 0; i < d; ++i) row.push_back(s.poly.low[i]);
    for (int i = 0; i < d; ++i)
      row.push_back(s.hyperbolic ? s.nodes[i] : nan);
    for (int i = 0; i < d; ++i)
      row.push_back(s.amplitudes_defined ? s.amplitudes[i] : nan);
    row.push_back(s.hyperbolic ? 1.0 : 0.0);
    row.push_back(s.on_boundary ? 1.0 : 0.0);
    row.push_back(s.amplitudes_defined ? 1.0 : 0.0);
    row.push_back(s.min_gap);
    row.push_back(s.max_abs_amplitude);
    row.push_back(s.moment_residual);
    table.rows.push_back(std::move(row));
  }

  prony::JsonValue j = prony::JsonValue::object();
  j["d"] = d;
  j["t_min"] = t_min;
  j["t_max"] = t_max;
  j["steps"] = steps;
  prony::JsonValue crossings = prony::JsonValue::Array{};
  for (const prony::BoundaryCrossing& c : trace.crossings) {
    prony::JsonValue jc = prony::JsonValue::object();
    jc["t_star"] = c.t_star;
    jc["hyperbolic_below"] = c.hyperbolic_below;
    jc["hyperbolic_above"] = c.hyperbolic_above;
    crossings.push_back(std::move(jc));
  }
  j["crossings"] = std::move(crossings);
  prony::JsonValue approaches = prony::JsonValue::Array{};
  for (const prony::CollisionApproach& a : report.approaches) {
    prony::JsonValue ja = prony::JsonValue::object();
    ja["t_star"] = a.t_star;
    ja["side"] = a.side;
    prony::JsonValue offs, gaps, amps;
    for (double v : a.offsets) offs.push_back(v);
    for (double v : a.gaps) gaps.push_back(v);
    for (double v : a.pair_amplitudes) amps.push_back(v);
    ja["offsets"] = std::move(offs);
    ja["gaps"] = std::move(gaps);
    ja["pair_amplitudes"] = std::move(amps);
    ja["amplitude_monotone"] = a.amplitude_monotone;
    approaches.push_back(std::move(ja));
  }
  j["collision_approaches"] = std::move(approaches);
  prony::JsonValue escapes = prony::JsonValue::Array{};
  for (const prony::EscapeCheck& e : report.escapes) {
    prony::JsonValue je = prony::JsonValue::object();
    je["t"] = e.t;
    je["checked"] = e.checked;
    je["exactly_one"] = e.exactly_one;
    je["monotone_growth"] = e.monotone_growth;
    je["escaping_magnitude"] = e.escaping_magnitude;
    je["max_other_magnitude"] = e.max_other_magnitude;
    escapes.push_back(std::move(je));
  }
  j["escape_checks"] = std::move(escapes);
  return emit_table(o, table, j, 0);
}

int cmd_error_scan(const Options& o) {
  const json in = load_input(o);
  const prony::SpikeSignal f = signal_from_input(in);
  const double eps = get_double(in, "epsilon");
  if (!(eps > 0.0))
    throw prony::InvalidArgument("'epsilon' must be positive");
  const long long n = resolve_samples(o, in, "samples", 512);
  const std::uint64_t seed = resolve_seed(o, in);
  const prony::Tolerances tol = tolerances(o);
  const int d = f.size();

  prony::ErrorScanReport report =
      prony::worst_case_errors(f, eps, n, seed, tol);
  const prony::ErrorSamples samples =
      prony::sample_error_set(f, eps, n, seed, tol);
  if (in.contains("delta_q")) {
    const json& qs = in.at("delta_q");
    if (!qs.is_array())
      throw prony::InvalidArgument("'delta_q' must be an array of integers");
    for (const json& qj : qs) {
      if (!qj.is_number_integer())
        throw prony::InvalidArgument("'delta_q' must be an array of integers");
      const int q = qj.get<int>();
      report.delta_q_values.push_back(q);
      report.delta_q_max_distance.push_back(
          prony::delta_q_concentration(f, eps, samples.signals, q, tol));
    }
  }

  prony::CsvTable table;
  table.header = {"index"};
  for (int k = 0; k < 2 * d; ++k)
    table.header.push_back("m" + std::to_string(k));
  for (int i = 1; i <= d; ++i) table.header.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d; ++i) table.header.push_back("a" + std::to_string(i));
  table.header.insert(table.header.end(), {"real", "dist", "dist_A", "dist_X"});
  for (std::size_t idx = 0; idx < samples.signals.size(); ++idx) {
    const prony::SpikeSignal& g = samples.signals[idx];
    const prony::Vector mu_g = prony::moments(g, 2 * d);
    const prony::detail::SignalDeviation dev =
        prony::detail::signal_deviation(g, f);
    std::vector<double> row{static_cast<double>(idx)};
    for (int k = 0; k < 2 * d; ++k) row.push_back(mu_g[k]);
    const prony::SpikeSignal gc = g.canonical();
    for (int i = 0; i < d; ++i) row.push_back(gc.nodes[i]);
    for (int i = 0; i < d; ++i) row.push_back(gc.amplitudes[i]);
    row.push_back(1.0);
    row.push_back(dev.joint());
    row.push_back(dev.amplitudes);
    row.push_back(dev.nodes);
    table.rows.push_back(std::move(row));
  }

  prony::JsonValue j = prony::JsonValue::object();
  j["epsilon"] = report.epsilon;
  j["h"] = report.h;
  j["samples"] = report.n_samples;
  j["discarded"] = report.n_discarded;
  j["seed"] = static_cast<long long>(report.seed);
  j["rho"] = report.rho;
  j["rho_A"] = report.rho_A;
  j["rho_X"] = report.rho_X;
  j["sandwich_inner_violations"] = report.sandwich_inner_violations;
  j["sandwich_outer_violations"] = report.sandwich_outer_violations;
  prony::JsonValue qv = prony::JsonValue::Array{};
  prony::JsonValue qd = prony::JsonValue::Array{};
  for (int q : report.delta_q_values) qv.push_back(q);
  for (double v : report.delta_q_max_distance) qd.push_back(v);
  j["delta_q"] = std::move(qv);
  j["delta_q_max_distance"] = std::move(qd);
  return emit_table(o, table, j, 0);
}

int cmd_scaling(const Options& o) {
  const json in = load_input(o);
  const int d = get_int(in, "d");
  const prony::Vector hs = get_vector(in, "h_list");
  const double p = get_double(in, "p");
  const long long n = resolve_samples(o, in, "samples", 200);
  const std::uint64_t seed = resolve_seed(o, in);
  const std::vector<double> h_list(hs.data(), hs.data() + hs.size());
  const prony::ScalingResult result =
      prony::scaling_experiment(d, h_list, p, n, seed, tolerances(o));

  prony::CsvTable table;
  table.header = {"h", "rho", "rho_A", "rho_X"};
  for (const prony::ScalingRow& row : result.rows)
    table.rows.push_back({row.h, row.rho, row.rho_A, row.rho_X});

  prony::JsonValue j = prony::JsonValue::object();
  j["d"] = result.d;
  j["p"] = result.p;
  j["seed"] = static_cast<long long>(seed);
  j["samples"] = n;
  prony::JsonValue jh, je;
  for (const prony::ScalingRow& row : result.rows) {
    jh.push_back(row.h);
    je.push_back(row.eps);
  }
  j["h"] = std::move(jh);
  j["eps"] = std::move(je);
  j["slope_rho"] = result.slope_rho;
  j["slope_A"] = result.slope_A;
  j["slope_X"] = result.slope_X;
  return emit_table(o, table, j, 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spike-train reconstruction from moments: solvers, variety "
               "traces and error-amplification experiments"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--input", o.input,
                    "input JSON: file path or inline object (default stdin)");
    sub->add_option("--output", o.output, "output file path");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--tol-rank", o.tol_rank, "relative rank threshold")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--tol-real", o.tol_real,
                    "tolerance for treating roots as real")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--samples", o.samples,
                    "sample count (trace steps for variety-trace)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", o.quiet, "suppress the stdout report");
    return sub;
  };

  CLI::App* solve = add_common(
      app.add_subcommand("solve", "recover a spike signal from 2d moments"));
  CLI::App* moments_cmd = add_common(
      app.add_subcommand("moments", "moments of an explicit spike signal"));
  CLI::App* trace = add_common(app.add_subcommand(
      "variety-trace", "scan a moment-constrained curve of denominators"));
  CLI::App* scan = add_common(app.add_subcommand(
      "error-scan", "worst-case reconstruction errors over a moment box"));
  CLI::App* scaling = add_common(app.add_subcommand(
      "scaling", "error amplification exponents across cluster sizes"));
  CLI::App* quadrature = add_common(app.add_subcommand(
      "quadrature", "Gaussian quadrature rule from measure moments"));
  CLI::App* expfit = add_common(app.add_subcommand(
      "expfit", "fit a sum of exponentials to equally spaced samples"));
  CLI::App* waring = add_common(app.add_subcommand(
      "waring", "decompose an odd binary form into powers of linear forms"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  for (const CLI::App* sub :
       {solve, moments_cmd, trace, scan, scaling, quadrature, expfit, waring})
    if (sub->parsed() && sub->count("--seed") > 0) o.seed_given = true;

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (moments_cmd->parsed()) return cmd_moments(o);
    if (trace->parsed()) return cmd_variety_trace(o);
    if (scan->parsed()) return cmd_error_scan(o);
    if (scaling->parsed()) return cmd_scaling(o);
    if (quadrature->parsed()) return cmd_quadrature(o);
    if (expfit->parsed()) return cmd_expfit(o);
    if (waring->parsed()) return cmd_waring(o);
  } catch (const prony::NotRealSolvable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const prony::GenericityFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const prony::NoFeasiblePoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const prony::SingularHankel& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const prony::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error: invalid JSON input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
