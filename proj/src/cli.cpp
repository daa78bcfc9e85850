#include "robba/cli.hpp"

#include <algorithm>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "robba/files.hpp"
#include "robba/text.hpp"

namespace robba {

namespace {

using nlohmann::json;

struct Options {
  std::string mode;
  std::optional<int> prime;
  std::optional<int> abs_prec;
  std::optional<int> trunc;
  std::string ring;
  std::string format = "text";
  std::string input;
  std::string file;
  std::string family;
  std::string section;
  bool bivariate = false;
  std::string fiber_var = "x";
};

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::Usage, msg); }

std::string read_input(const std::string& path_or_text, std::istream& in, bool is_path) {
  if (path_or_text == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  return is_path ? read_text_file(path_or_text) : path_or_text;
}

bool padic_mode(const Options& o) {
  if (o.mode.empty()) return o.prime.has_value();
  if (o.mode == "rational") return false;
  if (o.mode == "p-adic") return true;
  usage("--mode must be rational or p-adic");
}

void check_common(const Options& o) {
  if (o.trunc && *o.trunc < 1) usage("--trunc must be at least 1");
  if (o.format != "text" && o.format != "json") usage("--format must be text or json");
  if (o.prime && !is_prime(*o.prime)) usage("--p must be a prime");
  if (o.abs_prec && *o.abs_prec < 1) usage("--abs-prec must be at least 1");
}

CoeffContext expression_context(const Options& o) {
  check_common(o);
  if (padic_mode(o)) {
    if (!o.prime || !o.abs_prec) usage("p-adic mode needs --p and --abs-prec");
    return CoeffContext::padic(*o.prime, *o.abs_prec);
  }
  if (o.prime || o.abs_prec) usage("--p and --abs-prec belong to p-adic mode");
  return CoeffContext::rational();
}

RingLabel expression_ring(const Options& o, const CoeffContext& ctx, RingLabel rational_default,
                          RingLabel padic_default) {
  const RingLabel ring = o.ring.empty() ? (ctx.kind == CoeffKind::Rational ? rational_default : padic_default)
                                        : parse_ring(o.ring);
  if (coefficient_kind(ring) != ctx.kind) {
    usage("ring " + std::string(ring_name(ring)) + " does not match " +
          (ctx.kind == CoeffKind::Rational ? "rational" : "p-adic") + " mode");
  }
  return ring;
}

// File commands take ring and precision from the file; flags may only refine them.
void check_against_file(const Options& o, RingLabel ring) {
  check_common(o);
  const bool padic = coefficient_kind(ring) == CoeffKind::PAdic;
  if (!o.mode.empty() && padic_mode(o) != padic) usage("--mode contradicts the file's ring");
  if (!padic && (o.prime || o.abs_prec)) usage("--p and --abs-prec belong to p-adic mode");
  if (!o.ring.empty() && parse_ring(o.ring) != ring) usage("--ring contradicts the file's ring");
}

std::string default_var(const CoeffContext& ctx) { return ctx.kind == CoeffKind::Rational ? "t" : "u"; }

struct Expr {
  TruncatedSeries series;
  std::string var;
};

Expr read_series(const Options& o, std::istream& in, RingLabel ring, const CoeffContext& ctx) {
  const std::string text = read_input(o.input, in, false);
  std::string var = detect_variable(text);
  if (var.empty()) var = default_var(ctx);
  TruncatedSeries s = parse_series(text, ring, ctx, var);
  if (o.trunc) {
    if (*o.trunc > s.trunc_order()) {
      throw Error(ErrorCode::InsufficientWindow, "--trunc " + std::to_string(*o.trunc) +
                                                     " exceeds the input window O(" + var + "^" +
                                                     std::to_string(s.trunc_order()) + ")");
    }
    s = s.truncated(*o.trunc);
  }
  return {std::move(s), var};
}

// ---------------------------------------------------------------- rendering

json series_json(const TruncatedSeries& s) {
  json coeffs = json::array();
  for (int k = s.min_degree(); k < s.trunc_order(); ++k) coeffs.push_back(print_coefficient(s.coeff(k)));
  json out = {{"window", {s.min_degree(), s.trunc_order()}},
              {"coeffs", coeffs},
              {"ring", std::string(ring_name(s.ring()))},
              {"p", nullptr}};
  if (s.context().kind == CoeffKind::PAdic) {
    out["p"] = s.context().prime;
    json profile = json::array();
    for (auto [d, v] : valuation_profile(s)) profile.push_back({d, v});
    out["profile"] = profile;
  }
  return out;
}

json biseries_json(const BiSeries& s) {
  json rows = json::array();
  for (int i = 0; i < s.trunc_u(); ++i) {
    json row = json::array();
    for (int j = 0; j < s.trunc_x(); ++j) row.push_back(print_coefficient(s.coeff(i, j)));
    rows.push_back(row);
  }
  json out = {{"window", {s.trunc_u(), s.trunc_x()}},
              {"coeffs", rows},
              {"ring", std::string(ring_name(s.ring()))},
              {"p", nullptr}};
  if (s.context().kind == CoeffKind::PAdic) out["p"] = s.context().prime;
  return out;
}

std::string render_series(const Options& o, const TruncatedSeries& s, const std::string& var) {
  if (o.format == "json") return series_json(s).dump() + "\n";
  return print_series(s, var) + "\n";
}

std::string render_matrix(const Options& o, const char* name, const SeriesMatrix& m, const std::string& var,
                          std::optional<bool> normalized) {
  if (o.format == "json") {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(series_json(m(i, j)));
      rows.push_back(row);
    }
    json out = {{"entries", rows}};
    if (normalized) out["normalized"] = *normalized;
    return out.dump() + "\n";
  }
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      out += std::string(name) + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
             "] = " + print_series(m(i, j), var) + "\n";
    }
  }
  if (normalized) out += std::string("normalized: ") + (*normalized ? "true" : "false") + "\n";
  return out;
}

json error_json(const Error& e) {
  json err = {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}};
  if (const auto* ob = dynamic_cast<const ObstructionError*>(&e)) err["residue"] = ob->residue();
  if (const auto* se = dynamic_cast<const SyntaxError*>(&e)) {
    err["line"] = se->line();
    err["column"] = se->column();
  }
  return {{"error", err}};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax:
    case ErrorCode::MissingOMarker:
    case ErrorCode::ExponentOutOfWindow:
    case ErrorCode::Usage:
    case ErrorCode::Io:
      return 2;
    default:
      return 1;
  }
}

// ---------------------------------------------------------------- commands

std::string cmd_log(const Options& o, std::istream& in) {
  const CoeffContext ctx = expression_context(o);
  if (ctx.kind != CoeffKind::Rational) usage("log is the formal logarithm over Q; use plog in p-adic mode");
  const RingLabel ring = expression_ring(o, ctx, RingLabel::FormalChar0, RingLabel::FormalChar0);
  const Expr e = read_series(o, in, ring, ctx);
  return render_series(o, formal_log(e.series), e.var);
}

std::string cmd_plog(const Options& o, std::istream& in) {
  const CoeffContext ctx = expression_context(o);
  if (ctx.kind != CoeffKind::PAdic) usage("plog needs p-adic mode (--p and --abs-prec)");
  const RingLabel ring = expression_ring(o, ctx, RingLabel::GammaPlus, RingLabel::GammaPlus);
  const Expr e = read_series(o, in, ring, ctx);
  return render_series(o, padic_log_dagger(e.series), e.var);
}

std::string cmd_dlog(const Options& o, std::istream& in) {
  const CoeffContext ctx = expression_context(o);
  const RingLabel ring = expression_ring(o, ctx, RingLabel::FormalLaurentChar0, RingLabel::E);
  const Expr e = read_series(o, in, ring, ctx);
  return render_series(o, dlog(e.series).coefficient_series, e.var);
}

std::string cmd_residue(const Options& o, std::istream& in) {
  const CoeffContext ctx = expression_context(o);
  const RingLabel ring = expression_ring(o, ctx, RingLabel::FormalLaurentChar0, RingLabel::E);
  const Expr e = read_series(o, in, ring, ctx);
  const Coefficient r = residue({e.series});
  if (o.format == "json") {
    json out = {{"value", print_coefficient(r)}, {"ring", std::string(ring_name(ring))}, {"p", nullptr}};
    if (ctx.kind == CoeffKind::PAdic) out["p"] = ctx.prime;
    return out.dump() + "\n";
  }
  return print_coefficient(r) + "\n";
}

ConnectionFile load_connection(const Options& o, std::istream& in) {
  if (o.file.empty()) usage("this command needs --file");
  const ConnectionFile f = parse_connection_file(read_input(o.file, in, true), {o.prime, o.abs_prec});
  check_against_file(o, f.module.ring);
  return f;
}

FamilyFile load_family(const Options& o, std::istream& in) {
  if (o.family.empty()) usage("this command needs --family");
  const FamilyFile f = parse_family_file(read_input(o.family, in, true), {o.prime, o.abs_prec});
  check_against_file(o, f.family.ring);
  return f;
}

int file_trunc(const Options& o, const ConnectionFile& f) {
  if (o.trunc) return *o.trunc;
  int t = std::numeric_limits<int>::max();
  for (const auto& e : f.module.connection.entries()) t = std::min(t, e.coefficient_series.trunc_order());
  return t + 1;
}

std::string cmd_fundsol(const Options& o, std::istream& in) {
  const ConnectionFile f = load_connection(o, in);
  return render_matrix(o, "S", horizontal_basis(f.module, file_trunc(o, f)), f.var, std::nullopt);
}

std::string cmd_trivialize(const Options& o, std::istream& in) {
  const ConnectionFile f = load_connection(o, in);
  return render_matrix(o, "V", trivialize(f.module, file_trunc(o, f)).entries, f.var, std::nullopt);
}

std::string cmd_invariant(const Options& o, std::istream& in) {
  const ConnectionFile f = load_connection(o, in);
  const InvariantRepresentative rep = invariant(f.module, file_trunc(o, f));
  return render_matrix(o, "V", rep.matrix.entries, f.var, rep.normalized);
}

std::string cmd_curvature(const Options& o, std::istream& in) {
  const FamilyFile f = load_family(o, in);
  const Matrix<BiSeries> fm = curvature(f.family);
  bool zero = true;
  for (const auto& e : fm.entries()) zero = zero && e.is_zero();
  if (o.format == "json") {
    json rows = json::array();
    for (int i = 0; i < fm.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < fm.cols(); ++j) row.push_back(biseries_json(fm(i, j)));
      rows.push_back(row);
    }
    return json{{"entries", rows}, {"integrable", zero}}.dump() + "\n";
  }
  std::string out;
  for (int i = 0; i < fm.rows(); ++i) {
    for (int j = 0; j < fm.cols(); ++j) {
      out += "F[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
             "] = " + print_biseries(fm(i, j), f.family.base_var, f.family.fiber_var) + "\n";
    }
  }
  return out + "integrable: " + (zero ? "true" : "false") + "\n";
}

std::string cmd_integrate(const Options& o, std::istream& in) {
  if (o.section.empty()) usage("integrate needs --section");
  if (o.section == "-" && o.family == "-") usage("only one of --family and --section can read stdin");
  const FamilyFile f = load_family(o, in);
  const FramedFamily& fam = f.family;
  const CoeffContext ctx = fam.connection(0, 0).du_part.context();
  const TruncatedSeries v = parse_series(read_input(o.section, in, false), fam.ring, ctx, fam.base_var);
  const InvariantRepresentative rep = line_integral(fam, v, o.trunc ? *o.trunc : v.trunc_order());
  return render_matrix(o, "V", rep.matrix.entries, fam.base_var, rep.normalized);
}

std::string cmd_parse_check(const Options& o, std::istream& in) {
  if (!o.file.empty()) {
    const ConnectionFile f = load_connection(o, in);
    return write_connection_file(f.module, f.var) + "\n";
  }
  if (!o.family.empty()) return write_family_file(load_family(o, in).family) + "\n";
  const CoeffContext ctx = expression_context(o);
  if (o.bivariate) {
    const RingLabel ring = expression_ring(o, ctx, RingLabel::FormalChar0, RingLabel::GammaPlus);
    const std::string text = read_input(o.input, in, false);
    std::string base = detect_variable(text);
    if (base.empty() || base == o.fiber_var) base = default_var(ctx);
    const BiSeries s = parse_biseries(text, ring, ctx, base, o.fiber_var);
    if (o.format == "json") return biseries_json(s).dump() + "\n";
    return print_biseries(s, base, o.fiber_var) + "\n";
  }
  const RingLabel ring = expression_ring(o, ctx, RingLabel::FormalLaurentChar0, RingLabel::E);
  const Expr e = read_series(o, in, ring, ctx);
  return render_series(o, e.series, e.var);
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--mode", o.mode, "rational or p-adic (default: p-adic iff --p is given)");
  sub->add_option("--p", o.prime, "prime for p-adic mode");
  sub->add_option("--abs-prec", o.abs_prec, "absolute p-adic precision N (values known mod p^N)");
  sub->add_option("--trunc", o.trunc, "truncation order");
  sub->add_option("--ring", o.ring,
                  "ring label: formal, formal-laurent, gamma+, e+, gamma, e, dagger, robba+, robba");
  sub->add_option("--format", o.format, "text or json");
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args, std::istream& in) {
  Options o;
  CLI::App app{"Exact truncated series, p-adic logarithms and unipotent connections", "robba"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    std::string (*run)(const Options&, std::istream&);
    int kind;  // 0 expression, 1 connection file, 2 family file, 3 parse-check
  };
  const Sub subs[] = {
      {"log", "formal logarithm of a unit of Q[[t]]", cmd_log, 0},
      {"plog", "p-adic logarithm of a unit of O[[u]] (antiderivative of dlog)", cmd_plog, 0},
      {"dlog", "logarithmic derivative of a unit", cmd_dlog, 0},
      {"residue", "coefficient of u^-1 in a 1-form", cmd_residue, 0},
      {"fundsol", "horizontal sections of a connection over Q[[t]] by the recurrence", cmd_fundsol, 1},
      {"trivialize", "unipotent V with dV = V C by blockwise integration", cmd_trivialize, 1},
      {"invariant", "normalized trivialization of a module over Gamma+ or E+", cmd_invariant, 1},
      {"curvature", "du^dx coefficient of the curvature of a family", cmd_curvature, 2},
      {"integrate", "line integral of a family along the section x = v - 1", cmd_integrate, 2},
      {"parse-check", "parse and reprint a series, bivariate series or file", cmd_parse_check, 3},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> registered;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, o);
    if (s.kind == 0 || s.kind == 3) {
      auto* opt = sub->add_option("input", o.input, "series text, or - for stdin");
      if (s.kind == 0) opt->required();
    }
    if (s.kind == 1 || s.kind == 3) {
      auto* opt = sub->add_option("--file", o.file, "connection file, or - for stdin");
      if (s.kind == 1) opt->required();
    }
    if (s.kind == 2 || s.kind == 3) {
      auto* opt = sub->add_option("--family", o.family, "family file, or - for stdin");
      if (s.kind == 2) opt->required();
    }
    if (std::string(s.name) == "integrate") {
      sub->add_option("--section", o.section, "the unit v, or - for stdin")->required();
    }
    if (s.kind == 3) {
      sub->add_flag("--bivariate", o.bivariate, "read a two-variable series");
      sub->add_option("--fiber-var", o.fiber_var, "fiber variable for --bivariate");
    }
    registered.emplace_back(sub, &s);
  }

  CommandResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      result.out = app.help();
      return result;
    }
    result.exit_code = 2;
    result.err = error_json(Error(ErrorCode::Usage, e.what())).dump() + "\n";
    return result;
  }

  try {
    for (const auto& [sub, s] : registered) {
      if (sub->parsed()) {
        if (s->kind == 3 && o.input.empty() && o.file.empty() && o.family.empty()) {
          usage("parse-check needs an expression, --file or --family");
        }
        result.out = s->run(o, in);
      }
    }
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.err = error_json(e).dump() + "\n";
    result.out.clear();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.err = json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump() + "\n";
    result.out.clear();
  }
  return result;
}

}  // namespace robba
