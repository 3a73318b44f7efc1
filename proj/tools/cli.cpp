#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "casimir/core.hpp"
#include "casimir/planar.hpp"
#include "casimir/spherical.hpp"
#include "casimir/validation.hpp"
#include "json.hpp"

namespace casimir::cli {
namespace {

using Value = std::variant<double, long long, bool, std::string>;

struct Record {
  std::vector<std::pair<std::string, Value>> fields;
  bool converged = true;

  void add(const std::string& key, Value v) {
    fields.emplace_back(key, std::move(v));
  }
};

// Flag values actually given on the command line, keyed by flag name.
struct Inputs {
  std::map<std::string, double> values;
  double tol = kDefaultTolerance;
  bool with_force = false;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  double get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw InvalidArgument("missing --" + key);
    return it->second;
  }
};

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> flags;
  std::function<Record(const Inputs&)> evaluate;
};

// epsilon plus exactly one screening route: --kappa-eps, the microscopic
// triple (--beta, --q-c, --rho), or a dimensionless product with `length`.
Medium resolve_medium(const Inputs& in, Record& rec,
                      const std::string& dimensionless, double length) {
  const double eps = in.get("epsilon");
  const bool micro = in.has("beta") || in.has("q-c") || in.has("rho");
  const int routes = static_cast<int>(in.has("kappa-eps")) +
                     static_cast<int>(micro) +
                     static_cast<int>(in.has(dimensionless));
  if (routes != 1) {
    throw InvalidArgument("give exactly one of --kappa-eps, --" +
                          dimensionless + ", or --beta/--q-c/--rho");
  }
  rec.add("epsilon", eps);
  double kappa = 0.0;
  if (in.has("kappa-eps")) {
    kappa = in.get("kappa-eps");
  } else if (micro) {
    const MediumInputs mi{in.get("beta"), in.get("q-c"), in.get("rho"), eps};
    kappa = medium_from_inputs(mi).kappa_eps();
    rec.add("beta", mi.beta);
    rec.add("q_c", mi.q_c);
    rec.add("rho", mi.rho);
  } else {
    kappa = in.get(dimensionless) / length;
  }
  const Medium m(eps, kappa);
  rec.add("kappa_eps", m.kappa_eps());
  return m;
}

double resolve_gap(const Inputs& in) {
  if (in.has("gap")) return in.get("gap");
  if (in.has("kappa-a")) return 1.0;
  throw InvalidArgument("give --gap, or --kappa-a for a unit gap");
}

void add_estimate(Record& rec, const Estimate& e, double scale,
                  const std::string& key, const std::string& scaled_key) {
  rec.add(key, e.value);
  rec.add(scaled_key, e.value * scale);
  rec.add("error_estimate", e.abs_error);
  rec.add("evaluations", static_cast<long long>(e.evaluations));
  rec.add("converged", e.converged);
  rec.converged = rec.converged && e.converged;
}

PlanarOptions planar_options(const Inputs& in, bool series) {
  PlanarOptions o;
  o.tol = in.tol;
  o.series_check = series;
  return o;
}

Record plates_force(const Inputs& in) {
  Record rec;
  rec.add("command", std::string("plates-force"));
  const double a = resolve_gap(in);
  const Medium m = resolve_medium(in, rec, "kappa-a", a);
  rec.add("gap_a", a);
  rec.add("kappa_a", m.kappa_eps() * a);
  rec.add("tol", in.tol);
  const PlanarForce f = force_per_area(m, a, planar_options(in, true));
  add_estimate(rec, f, a * a * a, "beta_f", "beta_f_a3");
  rec.add("series_beta_f", f.series.value);
  rec.add("series_terms", static_cast<long long>(f.series.terms_used));
  rec.add("series_converged", f.series.converged);
  return rec;
}

Record plates_energy(const Inputs& in) {
  Record rec;
  rec.add("command", std::string("plates-energy"));
  const double a = resolve_gap(in);
  const Medium m = resolve_medium(in, rec, "kappa-a", a);
  rec.add("gap_a", a);
  rec.add("kappa_a", m.kappa_eps() * a);
  rec.add("tol", in.tol);
  add_estimate(rec, free_energy_per_area(m, a, planar_options(in, false)),
               a * a, "beta_F", "beta_F_a2");
  return rec;
}

Record particle(const Inputs& in, bool force) {
  Record rec;
  rec.add("command",
          std::string(force ? "particle-force" : "particle-potential"));
  const double a = resolve_gap(in);
  const Medium m = resolve_medium(in, rec, "kappa-a", a);
  const double alpha = in.get("alpha");
  rec.add("gap_a", a);
  rec.add("kappa_a", m.kappa_eps() * a);
  rec.add("alpha", alpha);
  rec.add("tol", in.tol);
  const PlanarOptions o = planar_options(in, false);
  if (force) {
    const Estimate e = particle_force(m, alpha, a, o);
    add_estimate(rec, e, alpha > 0.0 ? a * a * a * a / alpha : 0.0,
                 "beta_f", "beta_f_a4_over_alpha");
  } else {
    const Estimate e = particle_potential(m, alpha, a, o);
    add_estimate(rec, e, alpha > 0.0 ? a * a * a / alpha : 0.0, "beta_V",
                 "beta_V_a3_over_alpha");
  }
  return rec;
}

Record spheres_energy(const Inputs& in) {
  Record rec;
  rec.add("command", std::string("spheres-energy"));
  double ra = 0.0, rb = 0.0;
  if (in.has("radius-ratio")) {
    if (in.has("radius-a")) {
      throw InvalidArgument("--radius-ratio and --radius-a are exclusive");
    }
    rb = in.has("radius-b") ? in.get("radius-b") : 1.0;
    ra = in.get("radius-ratio") * rb;
  } else {
    ra = in.get("radius-a");
    rb = in.get("radius-b");
  }
  const Medium m = resolve_medium(in, rec, "kappa-b", rb);
  const SphericalSetup setup(m, ra, rb);
  rec.add("radius_a", ra);
  rec.add("radius_b", rb);
  rec.add("radius_ratio", setup.ratio());
  rec.add("kappa_b", m.kappa_eps() * rb);
  rec.add("tol", in.tol);
  const SphereEnergy e = sphere_free_energy(setup, in.tol);
  rec.add("beta_F", e.value);
  rec.add("L", static_cast<long long>(e.terms));
  rec.add("tail_bound", e.tail_bound);
  if (in.with_force) {
    const SphereForce f = sphere_force(setup, in.tol);
    rec.add("beta_dF_db", f.value);
    rec.add("force_L", static_cast<long long>(f.terms));
    rec.add("fd_step", f.step);
  }
  return rec;
}

Record correlation(const Inputs& in) {
  Record rec;
  rec.add("command", std::string("correlation"));
  const double a = resolve_gap(in);
  const Medium m = resolve_medium(in, rec, "kappa-a", a);
  const double q = in.get("q");
  const double z = in.get("z");
  const double z0 = in.get("z0");
  rec.add("gap_a", a);
  rec.add("kappa_a", m.kappa_eps() * a);
  rec.add("q", q);
  rec.add("z", z);
  rec.add("z0", z0);
  rec.add("h_hat_over_beta_qc2", correlation_hat(m, q, z, z0, a));
  return rec;
}

const std::vector<std::string> kMediumFlags = {"epsilon", "kappa-eps", "beta",
                                               "q-c", "rho"};

std::vector<std::string> with_medium(std::vector<std::string> extra) {
  extra.insert(extra.begin(), kMediumFlags.begin(), kMediumFlags.end());
  return extra;
}

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"plates-force", "Force per area between two half-spaces",
       with_medium({"gap", "kappa-a"}), plates_force},
      {"plates-energy", "Free energy per area between two half-spaces",
       with_medium({"gap", "kappa-a"}), plates_energy},
      {"particle-potential", "Potential of a polarizable particle near a half-space",
       with_medium({"gap", "kappa-a", "alpha"}),
       [](const Inputs& in) { return particle(in, false); }},
      {"particle-force", "Force on a polarizable particle near a half-space",
       with_medium({"gap", "kappa-a", "alpha"}),
       [](const Inputs& in) { return particle(in, true); }},
      {"spheres-energy", "Free energy of a ball inside a spherical cavity",
       with_medium({"radius-a", "radius-b", "radius-ratio", "kappa-b"}),
       spheres_energy},
      {"correlation", "Fourier-space charge correlation across the gap",
       with_medium({"gap", "kappa-a", "q", "z", "z0"}), correlation},
  };
  return table;
}

const Command* find_command(const std::string& name) {
  for (const Command& c : commands()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string describe(const std::string& flag) {
  static const std::map<std::string, std::string> text = {
      {"epsilon", "relative permittivity of the media (>= 1)"},
      {"kappa-eps", "inverse screening length inside the media"},
      {"beta", "inverse temperature 1/(k_B T)"},
      {"q-c", "ionic charge (Gaussian units)"},
      {"rho", "ion number density"},
      {"gap", "vacuum gap width a"},
      {"kappa-a", "dimensionless kappa_eps * a (unit gap unless --gap)"},
      {"kappa-b", "dimensionless kappa_eps * b"},
      {"alpha", "particle polarizability"},
      {"radius-a", "inner ball radius a"},
      {"radius-b", "cavity radius b"},
      {"radius-ratio", "a/b (b = 1 unless --radius-b)"},
      {"q", "transverse wavenumber"},
      {"z", "observation point, z > a"},
      {"z0", "source point, z0 < 0"},
  };
  return text.at(flag);
}

void add_flags(CLI::App* app, const std::vector<std::string>& flags,
               Inputs& in) {
  for (const std::string& flag : flags) {
    app->add_option_function<double>(
        "--" + flag, [&in, flag](double v) { in.values[flag] = v; },
        describe(flag));
  }
  app->add_option("--tol", in.tol, "relative tolerance")
      ->capture_default_str();
}

// --- output ---------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_cell(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          if (x.find_first_of(",\"\n") == std::string::npos) return x;
          std::string quoted = "\"";
          for (char c : x) {
            if (c == '"') quoted += '"';
            quoted += c;
          }
          return quoted + "\"";
        }
      },
      v);
}

nlohmann::ordered_json to_json(const Record& rec) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, v] : rec.fields) {
    std::visit([&j, &key = key](const auto& x) { j[key] = x; }, v);
  }
  return j;
}

void write_csv_header(std::ostream& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? "," : "") << names[i];
  }
  out << '\n';
}

// --- single evaluation ----------------------------------------------------

struct Outcome {
  Record record;
  int code = kOk;
  std::string status = "ok";
  std::string message;
};

Outcome evaluate(const Command& cmd, const Inputs& in) {
  Outcome o;
  try {
    o.record = cmd.evaluate(in);
    if (!o.record.converged) {
      o.code = kNumericalFailure;
      o.status = "not_converged";
      o.message = "integration did not reach the requested tolerance";
    }
  } catch (const InvalidArgument& e) {
    o.code = kBadArguments;
    o.status = "invalid_argument";
    o.message = e.what();
  } catch (const ConvergenceError& e) {
    o.code = kNumericalFailure;
    o.status = "not_converged";
    o.message = e.what();
  } catch (const std::exception& e) {
    o.code = kNumericalFailure;
    o.status = "numerical_error";
    o.message = e.what();
  }
  return o;
}

int emit_single(const Outcome& o, const std::string& format, std::ostream& out,
                std::ostream& err) {
  if (o.code == kBadArguments) {
    err << "error: " << o.message << '\n';
    return o.code;
  }
  if (!o.record.fields.empty()) {
    if (format == "csv") {
      std::vector<std::string> names;
      for (const auto& f : o.record.fields) names.push_back(f.first);
      write_csv_header(out, names);
      for (std::size_t i = 0; i < o.record.fields.size(); ++i) {
        out << (i ? "," : "") << csv_cell(o.record.fields[i].second);
      }
      out << '\n';
    } else {
      out << to_json(o.record).dump() << '\n';
    }
  }
  if (o.code != kOk) err << "error: " << o.message << '\n';
  return o.code;
}

// --- sweep ----------------------------------------------------------------

struct SweepPlan {
  std::string parameter;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  std::string spacing = "linear";
};

std::string sweep_flag(const std::string& parameter) {
  static const std::map<std::string, std::string> flags = {
      {"gap_a", "gap"},
      {"kappa_eps", "kappa-eps"},
      {"epsilon", "epsilon"},
      {"radius_ratio", "radius-ratio"},
  };
  const auto it = flags.find(parameter);
  if (it == flags.end()) {
    throw InvalidArgument(
        "--param must be one of gap_a, kappa_eps, epsilon, radius_ratio");
  }
  return it->second;
}

std::vector<double> sweep_points(const SweepPlan& s) {
  if (!(s.lo < s.hi)) throw InvalidArgument("sweep needs lo < hi");
  if (s.count < 2) throw InvalidArgument("sweep needs count >= 2");
  const bool log_spacing = s.spacing == "log";
  if (log_spacing && !(s.lo > 0.0)) {
    throw InvalidArgument("log spacing needs lo > 0");
  }
  std::vector<double> pts(static_cast<std::size_t>(s.count));
  const double n = s.count - 1;
  for (int i = 0; i < s.count; ++i) {
    const double t = i / n;
    if (log_spacing) {
      pts[i] = std::exp(std::log(s.lo) + t * (std::log(s.hi) - std::log(s.lo)));
    } else {
      pts[i] = s.lo + t * (s.hi - s.lo);
    }
  }
  pts.front() = s.lo;
  pts.back() = s.hi;
  return pts;
}

unsigned thread_count(std::size_t jobs) {
  unsigned n = 0;
  if (const char* env = std::getenv("CASIMIR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) {
      throw InvalidArgument("CASIMIR_THREADS must be a non-negative integer");
    }
    n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

std::vector<Outcome> run_points(const Command& cmd, const Inputs& base,
                                const std::string& flag,
                                const std::vector<double>& pts) {
  std::vector<Outcome> results(pts.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      Inputs in = base;
      in.values[flag] = pts[i];
      results[i] = evaluate(cmd, in);
    }
  };
  const unsigned threads = thread_count(pts.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return results;
}

int emit_sweep(const SweepPlan& plan, const std::vector<double>& pts,
               const std::vector<Outcome>& results, const std::string& format,
               std::ostream& out) {
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      nlohmann::ordered_json j = to_json(results[i].record);
      j[plan.parameter] = pts[i];
      j["status"] = results[i].status;
      if (!results[i].message.empty()) j["message"] = results[i].message;
      arr.push_back(std::move(j));
    }
    out << arr.dump() << '\n';
    return kOk;
  }
  std::vector<std::string> columns;
  for (const Outcome& o : results) {
    if (o.record.fields.empty()) continue;
    for (const auto& f : o.record.fields) {
      if (f.first != plan.parameter) columns.push_back(f.first);
    }
    break;
  }
  std::vector<std::string> header = {plan.parameter};
  header.insert(header.end(), columns.begin(), columns.end());
  header.push_back("status");
  write_csv_header(out, header);
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << format_double(pts[i]);
    const Record& rec = results[i].record;
    for (const std::string& col : columns) {
      out << ',';
      for (const auto& f : rec.fields) {
        if (f.first == col) {
          out << csv_cell(f.second);
          break;
        }
      }
    }
    out << ',' << results[i].status << '\n';
  }
  return kOk;
}

// --- validate -------------------------------------------------------------

int emit_validation(const std::vector<CheckResult>& checks,
                    const std::string& format, std::ostream& out) {
  bool all = true;
  for (const CheckResult& c : checks) all = all && c.passed;
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks) {
      arr.push_back({{"check", c.name},
                     {"passed", c.passed},
                     {"measured", c.measured},
                     {"tolerance", c.tolerance},
                     {"detail", c.detail}});
    }
    out << arr.dump() << '\n';
  } else {
    for (const CheckResult& c : checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%-4s  %-42s  %10.3e  (tol %.0e)  %s\n",
                    c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                    c.tolerance, c.detail.c_str());
      out << line;
    }
    out << (all ? "all checks passed\n" : "some checks FAILED\n");
  }
  return all ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Screened Casimir interactions between charged dielectrics",
               "casimir"};
  app.require_subcommand(1);

  std::map<std::string, Inputs> inputs;
  std::string format;
  for (const Command& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_flags(sub, c.flags, inputs[c.name]);
    sub->add_option("--output", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    if (c.name == "spheres-energy") {
      sub->add_flag("--with-force", inputs[c.name].with_force,
                    "also report d(beta F)/db by central difference");
    }
  }

  Inputs sweep_inputs;
  SweepPlan plan;
  std::string target;
  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate a command over a range");
  sweep->add_option("--target", target, "command to sweep")->required();
  sweep->add_option("--param", plan.parameter,
                    "gap_a, kappa_eps, epsilon or radius_ratio")
      ->required();
  sweep->add_option("--lo", plan.lo, "first value")->required();
  sweep->add_option("--hi", plan.hi, "last value")->required();
  sweep->add_option("--count", plan.count, "number of points")->required();
  sweep->add_option("--spacing", plan.spacing, "linear or log")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
  sweep->add_option("--output", format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}));
  {
    std::vector<std::string> all_flags = kMediumFlags;
    for (const Command& c : commands()) {
      for (const std::string& f : c.flags) {
        if (std::find(all_flags.begin(), all_flags.end(), f) == all_flags.end()) {
          all_flags.push_back(f);
        }
      }
    }
    add_flags(sweep, all_flags, sweep_inputs);
    sweep->add_flag("--with-force", sweep_inputs.with_force,
                    "spheres-energy: also report d(beta F)/db");
  }

  bool quick = false;
  double perturb = 1.0;
  CLI::App* validate = app.add_subcommand("validate", "Run the cross-check battery");
  validate->add_flag("--quick", quick, "reduced parameter grids");
  validate->add_option("--output", format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
  // Hidden sensitivity hook: scales the plate reflection factor.
  validate->add_option("--perturb-reflection", perturb)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kBadArguments;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();

  if (name == "validate") {
    if (!(perturb > 0.0)) {
      err << "error: --perturb-reflection must be positive\n";
      return kBadArguments;
    }
    ValidationOptions vo;
    vo.quick = quick;
    vo.reflection_scale = perturb;
    return emit_validation(run_validation(vo), format.empty() ? "table" : format,
                           out);
  }

  if (name == "sweep") {
    const Command* cmd = find_command(target);
    try {
      if (cmd == nullptr) throw InvalidArgument("unknown --target " + target);
      const std::string flag = sweep_flag(plan.parameter);
      if (std::find(cmd->flags.begin(), cmd->flags.end(), flag) ==
          cmd->flags.end()) {
        throw InvalidArgument(target + " has no parameter " + plan.parameter);
      }
      if (sweep_inputs.has(flag)) {
        throw InvalidArgument("--" + flag + " is set by the sweep");
      }
      for (const auto& kv : sweep_inputs.values) {
        if (std::find(cmd->flags.begin(), cmd->flags.end(), kv.first) ==
            cmd->flags.end()) {
          throw InvalidArgument(target + " does not take --" + kv.first);
        }
      }
      const std::vector<double> pts = sweep_points(plan);
      const std::vector<Outcome> results =
          run_points(*cmd, sweep_inputs, flag, pts);
      return emit_sweep(plan, pts, results, format.empty() ? "csv" : format,
                        out);
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << '\n';
      return kBadArguments;
    }
  }

  const Command* cmd = find_command(name);
  return emit_single(evaluate(*cmd, inputs[name]),
                     format.empty() ? "json" : format, out, err);
}

}  // namespace casimir::cli
