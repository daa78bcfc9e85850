#include "robba/files.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "robba/text.hpp"

namespace robba {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::Syntax, msg); }

json load(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(ErrorCode::Syntax, "malformed JSON", line, col);
  }
}

int get_int(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) schema_error(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

struct Header {
  Signature signature;
  RingLabel ring;
  CoeffContext ctx;
};

Header header(const json& doc, const PrecisionOverride& over) {
  if (!doc.is_object()) schema_error("expected a JSON object");
  for (const char* key : {"signature", "ring", "connection"}) {
    if (!doc.contains(key)) schema_error(std::string("missing field \"") + key + "\"");
  }
  const auto& sig = doc.at("signature");
  if (!sig.is_array()) schema_error("\"signature\" must be a list of integers");
  std::vector<int> parts;
  for (const auto& x : sig) {
    if (!x.is_number_integer()) schema_error("\"signature\" must be a list of integers");
    parts.push_back(x.get<int>());
  }
  if (!doc.at("ring").is_string()) schema_error("\"ring\" must be a string");
  RingLabel ring;
  try {
    ring = parse_ring(doc.at("ring").get<std::string>());
  } catch (const Error& e) {
    schema_error(e.what());
  }
  CoeffContext ctx = CoeffContext::rational();
  if (coefficient_kind(ring) == CoeffKind::PAdic) {
    const auto lookup = [&](const std::optional<int>& given, const char* key) {
      if (given) return *given;
      if (!doc.contains(key)) throw Error(ErrorCode::Usage, "a p-adic ring needs p and abs_prec");
      return get_int(doc, key);
    };
    const int p = lookup(over.prime, "p");
    const int n = lookup(over.abs_prec, "abs_prec");
    ctx = CoeffContext::padic(p, n);
  }
  return {Signature(std::move(parts)), ring, ctx};
}

const json& square(const json& doc, int r) {
  const auto& c = doc.at("connection");
  if (!c.is_array() || static_cast<int>(c.size()) != r) {
    schema_error("\"connection\" must be a " + std::to_string(r) + "x" + std::to_string(r) + " array");
  }
  for (const auto& row : c) {
    if (!row.is_array() || static_cast<int>(row.size()) != r) {
      schema_error("\"connection\" must be a " + std::to_string(r) + "x" + std::to_string(r) + " array");
    }
  }
  return c;
}

bool is_zero_literal(const json& v) { return v.is_string() && v.get<std::string>() == "0"; }

std::string entry_text(const json& v, const std::string& where) {
  if (!v.is_string()) schema_error(where + " must be a series string");
  return v.get<std::string>();
}

}  // namespace

static ConnectionFile connection_impl(std::string_view json_text, const PrecisionOverride& over) {
  const json doc = load(json_text);
  const Header h = header(doc, over);
  const int r = h.signature.total();
  const json& c = square(doc, r);
  std::optional<int> trunc;
  if (doc.contains("trunc")) trunc = get_int(doc, "trunc");

  std::string var;
  for (const auto& row : c) {
    for (const auto& v : row) {
      if (var.empty() && v.is_string()) var = detect_variable(v.get<std::string>());
    }
  }
  if (var.empty()) var = h.ctx.kind == CoeffKind::Rational ? "t" : "u";

  ConnectionMatrix m(r, r);
  std::vector<std::pair<int, int>> zeros;
  int smallest = std::numeric_limits<int>::max();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const json& v = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const std::string where = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (is_zero_literal(v)) {
        zeros.emplace_back(i, j);
        continue;
      }
      m(i, j) = {parse_series(entry_text(v, where), h.ring, h.ctx, var)};
      smallest = std::min(smallest, m(i, j).coefficient_series.trunc_order());
    }
  }
  if (!zeros.empty()) {
    if (!trunc && smallest == std::numeric_limits<int>::max()) {
      schema_error("every entry is \"0\"; give \"trunc\" to fix the window");
    }
    const int t = trunc ? *trunc : smallest;
    for (auto [i, j] : zeros) m(i, j) = {TruncatedSeries::zero(h.ring, h.ctx, 0, t)};
  }
  return {validate_framed(h.signature, m), var, trunc};
}

static FamilyFile family_impl(std::string_view json_text, const PrecisionOverride& over) {
  const json doc = load(json_text);
  const Header h = header(doc, over);
  if (!is_nonnegative(h.ring)) schema_error("families need a power-series base ring");
  const int r = h.signature.total();
  const json& c = square(doc, r);
  const std::string base = doc.contains("base_var") ? doc.at("base_var").get<std::string>()
                           : h.ctx.kind == CoeffKind::Rational ? "t"
                                                               : "u";
  const std::string fiber = doc.contains("fiber_var") ? doc.at("fiber_var").get<std::string>() : "x";
  std::optional<std::pair<int, int>> trunc;
  if (doc.contains("trunc")) {
    const auto& t = doc.at("trunc");
    if (t.is_number_integer()) {
      trunc = {t.get<int>(), t.get<int>()};
    } else if (t.is_array() && t.size() == 2 && t[0].is_number_integer() && t[1].is_number_integer()) {
      trunc = {t[0].get<int>(), t[1].get<int>()};
    } else {
      schema_error("\"trunc\" must be an integer or a pair of integers");
    }
  }

  Matrix<BiForm> m(r, r);
  std::vector<std::pair<int, int>> zeros;
  std::optional<std::pair<int, int>> smallest;
  auto note = [&](const BiForm& f) {
    const std::pair<int, int> w{f.du_part.trunc_u(), f.du_part.trunc_x()};
    smallest = smallest ? std::pair{std::min(smallest->first, w.first), std::min(smallest->second, w.second)} : w;
  };
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const json& v = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const std::string where = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (is_zero_literal(v)) {
        zeros.emplace_back(i, j);
        continue;
      }
      if (!v.is_object() || (!v.contains("du") && !v.contains("dx"))) {
        schema_error(where + " must be \"0\" or an object with \"du\" and/or \"dx\"");
      }
      std::optional<BiSeries> du;
      std::optional<BiSeries> dx;
      if (v.contains("du")) du = parse_biseries(entry_text(v.at("du"), where), h.ring, h.ctx, base, fiber);
      if (v.contains("dx")) dx = parse_biseries(entry_text(v.at("dx"), where), h.ring, h.ctx, base, fiber);
      const BiSeries& known = du ? *du : *dx;
      const BiSeries zero = BiSeries::zero(h.ring, h.ctx, known.trunc_u(), known.trunc_x());
      m(i, j) = make_biform(du ? *du : zero, dx ? *dx : zero);
      note(m(i, j));
    }
  }
  if (!zeros.empty()) {
    if (!trunc && !smallest) schema_error("every entry is \"0\"; give \"trunc\" to fix the window");
    const auto [tu, tx] = trunc ? *trunc : *smallest;
    const BiSeries zero = BiSeries::zero(h.ring, h.ctx, tu, tx);
    for (auto [i, j] : zeros) m(i, j) = BiForm{zero, zero};
  }
  return {validate_family(h.signature, m, base, fiber)};
}

ConnectionFile parse_connection_file(std::string_view json_text, const PrecisionOverride& over) {
  try {
    return connection_impl(json_text, over);
  } catch (const json::exception& e) {
    schema_error(std::string("bad connection file: ") + e.what());
  }
}

FamilyFile parse_family_file(std::string_view json_text, const PrecisionOverride& over) {
  try {
    return family_impl(json_text, over);
  } catch (const json::exception& e) {
    schema_error(std::string("bad family file: ") + e.what());
  }
}

namespace {

json context_fields(json doc, RingLabel ring, const CoeffContext& ctx) {
  doc["ring"] = std::string(ring_name(ring));
  if (ctx.kind == CoeffKind::PAdic) {
    doc["p"] = ctx.prime;
    doc["abs_prec"] = ctx.abs_prec;
  }
  return doc;
}

}  // namespace

std::string write_connection_file(const FramedNablaModule& module, std::string_view var) {
  json doc;
  doc["signature"] = module.signature.parts();
  const auto& c = module.connection;
  json rows = json::array();
  for (int i = 0; i < c.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < c.cols(); ++j) row.push_back(print_series(c(i, j).coefficient_series, var));
    rows.push_back(row);
  }
  doc["connection"] = rows;
  const CoeffContext ctx = c.rows() > 0 ? c(0, 0).coefficient_series.context() : CoeffContext::rational();
  return context_fields(doc, module.ring, ctx).dump(2);
}

std::string write_family_file(const FramedFamily& family) {
  json doc;
  doc["signature"] = family.signature.parts();
  doc["base_var"] = family.base_var;
  doc["fiber_var"] = family.fiber_var;
  const auto& c = family.connection;
  json rows = json::array();
  for (int i = 0; i < c.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < c.cols(); ++j) {
      row.push_back({{"du", print_biseries(c(i, j).du_part, family.base_var, family.fiber_var)},
                     {"dx", print_biseries(c(i, j).dx_part, family.base_var, family.fiber_var)}});
    }
    rows.push_back(row);
  }
  doc["connection"] = rows;
  const CoeffContext ctx = c.rows() > 0 ? c(0, 0).du_part.context() : CoeffContext::rational();
  return context_fields(doc, family.ring, ctx).dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace robba
