#include "crint/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crint/errors.hpp"
#include "crint/invariant.hpp"

namespace crint::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

double parse_constant(std::string_view text) {
  const Expr e = parse(text);
  if (!e.is_constant_valued()) {
    throw UsageError("coordinate '" + std::string(text) + "' must not mention a variable");
  }
  return eval(e, PhasePoint{});
}

std::string point_text(const PhasePoint& pt) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g, %.17g)", pt.x1, pt.p1, pt.x2, pt.p2);
  return buf;
}

// ---------------------------------------------------------------------------
// Dispatch

std::array<ResidualRow, 4> residual_rows(const ConditionReport& rep) {
  std::array<ResidualRow, 4> rows;
  for (Condition c : kAllConditions) {
    const std::size_t i = static_cast<std::size_t>(c);
    rows[i] = {c, rep.max_abs[i], rep.max_scaled[i], rep.worst_points[i]};
  }
  return rows;
}

std::optional<Expr> try_symbolic(const Expr& h) {
  try {
    return symbolic_invariant(h);
  } catch (const UnsupportedClassError&) {
    return std::nullopt;
  } catch (const NonExactError&) {
    return std::nullopt;
  }
}

InvariantSection invariant_values(const Expr& h, const RunConfig& c, const QuadratureSetting& q) {
  const InvariantFn inv = build_invariant(h, c.base, q);
  InvariantSection s;
  s.base = c.base;
  s.backend = "line_integral";
  if (const auto closed = try_symbolic(h)) s.closed_form = to_string(*closed);
  for (const PhasePoint& pt : c.points) s.values.push_back({pt, inv(pt), inv.error_estimate(pt)});
  return s;
}

// Closed form when the symbolic builder succeeds, otherwise quadrature.
InvariantFn drift_invariant(const Expr& h, const RunConfig& c, const QuadratureSetting& q) {
  if (const auto closed = try_symbolic(h)) return InvariantFn::closed_form(h, *closed, c.base);
  return build_invariant(h, c.base, q);
}

TrajectorySection run_trajectory(const Expr& h, const RunConfig& c,
                                 const std::optional<InvariantFn>& inv) {
  ScalarField field;
  if (inv) field = [&](const PhasePoint& pt) { return (*inv)(pt); };
  const PhasePoint start = c.points.front();
  const Trajectory traj = integrate_flow(h, start, c.T, c.h, c.method, field);
  TrajectorySection s;
  s.start = start;
  s.T = c.T;
  s.h = c.h;
  s.method = c.method;
  s.steps = traj.samples.size() - 1;
  s.max_dH = traj.max_dH;
  s.max_dI = traj.max_dI;
  s.truncated = traj.truncated;
  s.truncation_reason = traj.truncation_reason;
  s.final_point = traj.samples.back().pt;
  return s;
}

IndependenceSection run_independence(const Expr& h, const SampleDomain& dom, std::size_t n) {
  const IndependenceResult res = independence_check(h, dom.draw(n));
  return {res.verdict, res.witness, res.minor, res.columns};
}

void dispatch(const RunConfig& c, Report& r) {
  if (c.points.empty()) throw UsageError("at least one point is required");
  const Expr h = parse(c.hamiltonian);
  const SampleDomain dom{c.domain, c.samples, c.seed};
  const QuadratureSetting q{.segments = c.segments};
  q.validate();

  const ConditionReport rep = check_conditions(h, dom, c.tol, c.tol_mode);
  r.residuals = residual_rows(rep);
  const bool satisfied = rep.verdict == Verdict::satisfied;

  switch (c.command) {
    case Command::check:
      r.verdict = satisfied ? Outcome::satisfied : Outcome::violated;
      break;

    case Command::invariant:
      if (!satisfied) {
        r.verdict = Outcome::violated;
        r.diagnostic = "conditions violated on the sample domain; no invariant constructed";
        break;
      }
      r.invariant = invariant_values(h, c, q);
      r.verdict = Outcome::satisfied;
      break;

    case Command::simulate: {
      std::optional<InvariantFn> inv;
      if (satisfied) inv = drift_invariant(h, c, q);
      r.trajectory = run_trajectory(h, c, inv);
      r.verdict = Outcome::succeeded;
      break;
    }

    case Command::verify: {
      r.independence = run_independence(h, dom, c.independence_points);
      std::optional<InvariantFn> inv;
      if (satisfied) {
        r.invariant = invariant_values(h, c, q);
        inv = drift_invariant(h, c, q);
        const Derivatives d(h);
        BracketSection b;
        for (const PhasePoint& pt : dom.draw(c.bracket_points)) {
          const double res = bracket_residual(d, *inv, pt);
          if (b.points == 0 || res > b.max_residual) {
            b.max_residual = res;
            b.worst_point = pt;
          }
          ++b.points;
        }
        r.bracket = b;
        r.complex_flow_residual = complex_flow_residual(h, c.points.front(), c.T, c.h);
      }
      r.trajectory = run_trajectory(h, c, inv);
      r.verdict = satisfied ? Outcome::satisfied : Outcome::violated;
      if (!satisfied) r.diagnostic = "conditions violated on the sample domain";
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Serialization

Json point_json(const PhasePoint& pt) { return Json::array({pt.x1, pt.p1, pt.x2, pt.p2}); }

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json config_json(const RunConfig& c) {
  Json domain = Json::array();
  for (const Interval& iv : c.domain) domain.push_back(Json::array({iv.lo, iv.hi}));
  Json points = Json::array();
  for (const PhasePoint& pt : c.points) points.push_back(point_json(pt));
  Json j;
  j["command"] = name(c.command);
  j["hamiltonian"] = c.hamiltonian;
  j["hamiltonian_file"] = c.hamiltonian_file.empty() ? Json(nullptr) : Json(c.hamiltonian_file);
  j["domain"] = domain;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["tol_mode"] = c.tol_mode == ToleranceMode::absolute ? "absolute" : "relative";
  j["base"] = point_json(c.base);
  j["points"] = points;
  j["segments"] = c.segments;
  j["T"] = c.T;
  j["h"] = c.h;
  j["method"] = name(c.method);
  j["bracket_points"] = c.bracket_points;
  j["independence_points"] = c.independence_points;
  j["format"] = name(c.format);
  j["out"] = c.out.empty() ? Json(nullptr) : Json(c.out);
  return j;
}

Json report_json(const Report& r) {
  Json j;
  j["config"] = config_json(r.config);
  j["command"] = name(r.config.command);
  j["verdict"] = name(r.verdict);
  j["exit_code"] = r.exit_code();
  j["diagnostic"] = r.diagnostic.empty() ? Json(nullptr) : Json(r.diagnostic);

  j["residuals"] = nullptr;
  if (r.residuals) {
    Json rows = Json::array();
    for (const ResidualRow& row : *r.residuals) {
      Json e;
      e["condition"] = name(row.condition);
      e["max_abs"] = row.max_abs;
      e["max_scaled"] = row.max_scaled;
      e["worst_point"] = point_json(row.worst_point);
      rows.push_back(e);
    }
    j["residuals"] = rows;
  }

  j["invariant"] = nullptr;
  if (r.invariant) {
    Json values = Json::array();
    for (const InvariantValue& v : r.invariant->values) {
      Json e;
      e["point"] = point_json(v.point);
      e["value"] = v.value;
      e["error_estimate"] = v.error_estimate;
      values.push_back(e);
    }
    Json inv;
    inv["base"] = point_json(r.invariant->base);
    inv["backend"] = r.invariant->backend;
    inv["closed_form"] = optional_json(r.invariant->closed_form);
    inv["values"] = values;
    j["invariant"] = inv;
  }

  j["trajectory"] = nullptr;
  if (r.trajectory) {
    const TrajectorySection& t = *r.trajectory;
    Json e;
    e["start"] = point_json(t.start);
    e["T"] = t.T;
    e["h"] = t.h;
    e["method"] = name(t.method);
    e["steps"] = t.steps;
    e["max_dH"] = t.max_dH;
    e["max_dI"] = optional_json(t.max_dI);
    e["truncated"] = t.truncated;
    e["truncation_reason"] = t.truncated ? Json(t.truncation_reason) : Json(nullptr);
    e["final_point"] = point_json(t.final_point);
    j["trajectory"] = e;
  }

  j["independence"] = nullptr;
  if (r.independence) {
    const IndependenceSection& s = *r.independence;
    Json e;
    e["verdict"] = name(s.verdict);
    e["witness_point"] = s.witness_point ? point_json(*s.witness_point) : Json(nullptr);
    e["minor"] = s.minor;
    e["columns"] = Json::array({name(s.columns[0]), name(s.columns[1])});
    j["independence"] = e;
  }

  j["bracket"] = nullptr;
  if (r.bracket) {
    Json e;
    e["points"] = r.bracket->points;
    e["max_residual"] = r.bracket->max_residual;
    e["worst_point"] = point_json(r.bracket->worst_point);
    j["bracket"] = e;
  }

  j["complex_flow_residual"] = optional_json(r.complex_flow_residual);
  j["note"] = ConditionReport::kEvidenceNote;
  return j;
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write_json(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write_json(out, value, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      const bool scalars = std::all_of(j.begin(), j.end(), [](const Json& e) {
        return !e.is_structured();
      });
      if (j.empty()) {
        out += "[]";
      } else if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(out, j[i], depth + 1);
        }
        out += "]";
      } else {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ",\n";
          out += pad;
          write_json(out, j[i], depth + 1);
        }
        out += "\n" + close + "]";
      }
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string number_text(double v) {
  std::string s;
  write_number(s, v);
  return s;
}

std::string emit_text(const Report& r) {
  std::ostringstream os;
  const RunConfig& c = r.config;
  os << "command      " << name(c.command) << "\n";
  os << "hamiltonian  " << c.hamiltonian << "\n";
  os << "verdict      " << name(r.verdict) << " (exit " << r.exit_code() << ")\n";
  if (!r.diagnostic.empty()) os << "diagnostic   " << r.diagnostic << "\n";
  if (r.residuals) {
    os << "\nresiduals over " << c.samples << " samples (seed " << c.seed << ", tol "
       << number_text(c.tol) << ")\n";
    for (const ResidualRow& row : *r.residuals) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "  %-18s %-24s", std::string(name(row.condition)).c_str(),
                    number_text(row.max_abs).c_str());
      os << buf << " worst at " << point_text(row.worst_point) << "\n";
    }
  }
  if (r.invariant) {
    os << "\ninvariant (" << r.invariant->backend << ", zero at "
       << point_text(r.invariant->base) << ")\n";
    if (r.invariant->closed_form) os << "  closed form  " << *r.invariant->closed_form << "\n";
    for (const InvariantValue& v : r.invariant->values) {
      os << "  I" << point_text(v.point) << " = " << number_text(v.value) << "  (+/- "
         << number_text(v.error_estimate) << ")\n";
    }
  }
  if (r.trajectory) {
    const TrajectorySection& t = *r.trajectory;
    os << "\ntrajectory (" << name(t.method) << ", T " << number_text(t.T) << ", h "
       << number_text(t.h) << ", " << t.steps << " steps)\n";
    os << "  start      " << point_text(t.start) << "\n";
    os << "  end        " << point_text(t.final_point) << "\n";
    os << "  max |dH|   " << number_text(t.max_dH) << "\n";
    os << "  max |dI|   " << (t.max_dI ? number_text(*t.max_dI) : "n/a") << "\n";
    if (t.truncated) os << "  truncated  " << t.truncation_reason << "\n";
  }
  if (r.independence) {
    const IndependenceSection& s = *r.independence;
    os << "\nindependence  " << name(s.verdict);
    if (s.witness_point) {
      os << ", minor (" << name(s.columns[0]) << ", " << name(s.columns[1])
         << ") = " << number_text(s.minor) << " at " << point_text(*s.witness_point);
    }
    os << "\n";
  }
  if (r.bracket) {
    os << "bracket       max |{H, I}| = " << number_text(r.bracket->max_residual) << " over "
       << r.bracket->points << " points\n";
  }
  if (r.complex_flow_residual) {
    os << "complex flow  max chart distance = " << number_text(*r.complex_flow_residual) << "\n";
  }
  if (r.residuals) os << "\nnote: " << ConditionReport::kEvidenceNote << "\n";
  return os.str();
}

}  // namespace

std::string_view name(Command c) noexcept {
  switch (c) {
    case Command::check: return "check";
    case Command::invariant: return "invariant";
    case Command::simulate: return "simulate";
    case Command::verify: return "verify";
  }
  return "?";
}

std::string_view name(Format f) noexcept { return f == Format::json ? "json" : "text"; }

std::string_view name(Outcome o) noexcept {
  switch (o) {
    case Outcome::satisfied: return "satisfied";
    case Outcome::violated: return "violated";
    case Outcome::succeeded: return "succeeded";
    case Outcome::usage_error: return "usage_error";
    case Outcome::domain_error: return "domain_error";
  }
  return "?";
}

int exit_code(Outcome o) noexcept {
  switch (o) {
    case Outcome::satisfied:
    case Outcome::succeeded: return 0;
    case Outcome::violated: return 1;
    case Outcome::usage_error: return 2;
    case Outcome::domain_error: return 3;
  }
  return 2;
}

Report run(const RunConfig& config) {
  Report r;
  r.config = config;
  try {
    dispatch(config, r);
  } catch (const ParseError& e) {
    r.verdict = Outcome::usage_error;
    r.diagnostic = std::string(e.what()) + " in \"" + config.hamiltonian + "\"";
  } catch (const UsageError& e) {
    r.verdict = Outcome::usage_error;
    r.diagnostic = e.what();
  } catch (const SeparationError& e) {
    r.verdict = Outcome::usage_error;
    r.diagnostic = e.what();
  } catch (const DomainError& e) {
    r.verdict = Outcome::domain_error;
    r.diagnostic = std::string(e.what()) + " [subexpression " + e.subtree() + "]";
  } catch (const Error& e) {
    r.verdict = Outcome::domain_error;
    r.diagnostic = e.what();
  }
  return r;
}

std::string emit_report(const Report& r, Format format) {
  if (format == Format::text) return emit_text(r);
  std::string out;
  write_json(out, report_json(r), 0);
  out += "\n";
  return out;
}

PhasePoint parse_point(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw UsageError("point '" + std::string(text) + "' needs four comma-separated coordinates");
  }
  return {parse_constant(parts[0]), parse_constant(parts[1]), parse_constant(parts[2]),
          parse_constant(parts[3])};
}

std::vector<PhasePoint> parse_points(std::string_view text) {
  std::vector<PhasePoint> pts;
  for (std::string_view part : split(text, ';')) pts.push_back(parse_point(part));
  return pts;
}

std::array<Interval, 4> parse_domain(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw UsageError("domain '" + std::string(text) + "' needs four lo:hi intervals");
  }
  std::array<Interval, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto ends = split(parts[i], ':');
    if (ends.size() != 2) {
      throw UsageError("interval '" + std::string(parts[i]) + "' must be written lo:hi");
    }
    out[i] = {parse_constant(ends[0]), parse_constant(ends[1])};
    if (!(out[i].lo < out[i].hi)) {
      throw UsageError("interval '" + std::string(parts[i]) + "' must have lo < hi");
    }
  }
  return out;
}

ParsedArgs parse_args(int argc, const char* const* argv) {
  CLI::App app{"Integrability check and invariant construction for two-degree-of-freedom "
               "Hamiltonians",
               "crint"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  std::string domain, base, points, method = "rk4", format = "json", tol_mode = "absolute";
  auto* inline_h = app.add_option("--H", c.hamiltonian, "Hamiltonian in x1, p1, x2, p2");
  auto* file_h = app.add_option("--H-file", c.hamiltonian_file, "read the Hamiltonian from a file");
  inline_h->excludes(file_h);
  app.add_option("--domain", domain, "sample box lo:hi,lo:hi,lo:hi,lo:hi over (x1, p1, x2, p2)");
  app.add_option("--samples", c.samples, "number of sample points")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--tol", c.tol, "residual tolerance");
  app.add_option("--tol-mode", tol_mode, "absolute or relative")
      ->check(CLI::IsMember({"absolute", "relative"}));
  app.add_option("--base", base, "base point a,b,c,d where I vanishes");
  app.add_option("--points", points, "evaluation points a,b,c,d;a,b,c,d;...");
  app.add_option("--T", c.T, "integration time");
  app.add_option("--h", c.h, "integration step");
  app.add_option("--method", method, "rk4 or leapfrog")->check(CLI::IsMember({"rk4", "leapfrog"}));
  app.add_option("--segments", c.segments, "quadrature segments per path");
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", c.out, "write the report to a file");

  auto* check = app.add_subcommand("check", "test the four integrability conditions");
  auto* invariant = app.add_subcommand("invariant", "construct I and evaluate it at --points");
  auto* simulate = app.add_subcommand("simulate", "integrate the flow from the first point");
  auto* verify = app.add_subcommand("verify", "run every check and the dynamical tests");

  ParsedArgs result;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    result.exit_code = 0;
    result.message = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 2;
    result.message = e.what();
    return result;
  }

  if (check->parsed()) c.command = Command::check;
  if (invariant->parsed()) c.command = Command::invariant;
  if (simulate->parsed()) c.command = Command::simulate;
  if (verify->parsed()) c.command = Command::verify;

  try {
    if (!c.hamiltonian_file.empty()) {
      std::ifstream in(c.hamiltonian_file);
      if (!in) throw UsageError("cannot read " + c.hamiltonian_file);
      std::stringstream ss;
      ss << in.rdbuf();
      c.hamiltonian = ss.str();
      while (!c.hamiltonian.empty() && std::isspace(static_cast<unsigned char>(c.hamiltonian.back()))) {
        c.hamiltonian.pop_back();
      }
    }
    if (c.hamiltonian.empty()) throw UsageError("a Hamiltonian is required (--H or --H-file)");
    if (!domain.empty()) c.domain = parse_domain(domain);
    if (!base.empty()) c.base = parse_point(base);
    if (!points.empty()) c.points = parse_points(points);
  } catch (const Error& e) {
    result.exit_code = 2;
    result.message = e.what();
    return result;
  }
  c.method = method == "leapfrog" ? Method::leapfrog : Method::rk4;
  c.format = format == "text" ? Format::text : Format::json;
  c.tol_mode = tol_mode == "relative" ? ToleranceMode::relative_fallback : ToleranceMode::absolute;
  result.config = c;
  return result;
}

int main(int argc, const char* const* argv) {
  const ParsedArgs args = parse_args(argc, argv);
  if (!args.config) {
    (args.exit_code == 0 ? std::cout : std::cerr) << args.message << "\n";
    return args.exit_code;
  }
  const Report r = run(*args.config);
  const std::string text = emit_report(r, args.config->format);
  if (args.config->out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(args.config->out, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "crint: cannot write " << args.config->out << "\n";
      return 2;
    }
  }
  if (!r.diagnostic.empty()) std::cerr << "crint: " << r.diagnostic << "\n";
  return r.exit_code();
}

}  // namespace crint::cli
