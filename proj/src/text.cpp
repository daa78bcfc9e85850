#include "robba/text.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace robba {

namespace {

constexpr int kMaxExponent = 1'000'000;

struct Term {
  Coefficient value;
  int exps[2] = {0, 0};
  std::size_t pos = 0;
  bool plain_zero = false;  // a bare 0 adds nothing and has no degree to check
};

struct Parsed {
  std::vector<Term> terms;
  std::vector<int> marker;
  std::size_t marker_pos = 0;
};

class Parser {
public:
  Parser(std::string_view text, const CoeffContext& ctx, std::vector<std::string> vars)
      : s_(text), ctx_(ctx), vars_(std::move(vars)) {}

  Parsed run() {
    Parsed out;
    skip();
    bool negative = accept('-');
    if (at_end()) fail(ErrorCode::MissingOMarker, "empty series; expected terms and O(...)");
    for (;;) {
      skip();
      if (at_marker()) {
        if (negative) fail(ErrorCode::Syntax, "O(...) cannot be subtracted");
        out.marker_pos = pos_;
        out.marker = marker();
        skip();
        if (!at_end()) fail(ErrorCode::Syntax, "unexpected input after O(...)");
        return out;
      }
      Term t = term();
      if (negative) t.value = -t.value;
      out.terms.push_back(std::move(t));
      skip();
      if (at_end()) fail(ErrorCode::MissingOMarker, "series must end with an O(...) marker");
      if (accept('+')) {
        negative = false;
      } else if (accept('-')) {
        negative = true;
      } else {
        fail(ErrorCode::Syntax, std::string("expected '+' or '-' but found '") + s_[pos_] + "'");
      }
    }
  }

  Coefficient lone_coefficient() {
    skip();
    const bool negative = accept('-');
    skip();
    if (!at_digit()) fail(ErrorCode::Syntax, "expected a number");
    Coefficient c = coefficient();
    skip();
    if (!at_end()) fail(ErrorCode::Syntax, "unexpected input after the number");
    return negative ? -c : c;
  }

  const std::vector<std::string>& vars() const { return vars_; }

  [[noreturn]] void fail_at(std::size_t at, ErrorCode code, const std::string& msg) const {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(code, msg, line, col);
  }

private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const { fail_at(pos_, code, msg); }

  bool at_end() const { return pos_ >= s_.size(); }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return !at_end() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(ErrorCode::Syntax, std::string("expected '") + c + "'");
  }
  bool at_digit() {
    skip();
    return !at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }
  bool at_letter() {
    skip();
    return !at_end() && std::isalpha(static_cast<unsigned char>(s_[pos_]));
  }
  bool at_marker() {
    if (!peek('O')) return false;
    std::size_t k = pos_ + 1;
    while (k < s_.size() && std::isspace(static_cast<unsigned char>(s_[k]))) ++k;
    return k < s_.size() && s_[k] == '(';
  }

  mpz_class integer() {
    if (!at_digit()) fail(ErrorCode::Syntax, "expected an integer");
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }

  int signed_int() {
    const bool negative = accept('-');
    const std::size_t start = pos_;
    const mpz_class n = integer();
    if (n > kMaxExponent) fail_at(start, ErrorCode::Syntax, "exponent is too large");
    const int v = static_cast<int>(n.get_si());
    return negative ? -v : v;
  }

  std::string ident() {
    if (!at_letter()) fail(ErrorCode::Syntax, "expected a variable");
    const std::size_t start = pos_;
    while (!at_end() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  int var_index(const std::string& name, std::size_t at) {
    if (name == "O" || name == "mod") fail_at(at, ErrorCode::Syntax, "'" + name + "' is not a variable");
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      if (vars_[k].empty()) vars_[k] = name;
      if (vars_[k] == name) return static_cast<int>(k);
    }
    std::string want;
    for (const auto& v : vars_) want += (want.empty() ? "" : " or ") + v;
    fail_at(at, ErrorCode::Syntax, "unexpected variable '" + name + "'; expected " + want);
  }

  int mod_suffix() {
    expect('(');
    const std::size_t at = pos_;
    if (ident() != "mod") fail_at(at, ErrorCode::Syntax, "expected 'mod'");
    const std::size_t pat = pos_;
    if (integer() != ctx_.prime) fail_at(pat, ErrorCode::Syntax, "modulus is not a power of p");
    expect('^');
    const int n = signed_int();
    expect(')');
    return n;
  }

  Coefficient coefficient() {
    const std::size_t start = pos_;
    const mpz_class a = integer();
    const bool padic = ctx_.kind == CoeffKind::PAdic;
    if (peek('^')) {
      if (!padic) fail(ErrorCode::Syntax, "p-adic literal in rational mode");
      if (a != ctx_.prime) fail_at(start, ErrorCode::Syntax, "literal prime does not match p");
      expect('^');
      const int v = signed_int();
      expect('*');
      const std::size_t at = pos_;
      const mpz_class m = integer();
      const int n = mod_suffix();
      if (m == 0) return PAdic::zero(ctx_.prime, n);
      if (n <= v) fail_at(at, ErrorCode::Syntax, "precision must exceed the valuation");
      return PAdic::from_parts(ctx_.prime, v, m, n);
    }
    if (peek('(')) {
      if (!padic || a != 0) fail(ErrorCode::Syntax, "unexpected '('");
      return PAdic::zero(ctx_.prime, mod_suffix());
    }
    mpz_class b = 1;
    if (accept('/')) {
      const std::size_t at = pos_;
      b = integer();
      if (b == 0) fail_at(at, ErrorCode::Syntax, "zero denominator");
    }
    return ctx_.fraction(a, b);
  }

  void monomial(Term& t) {
    bool seen[2] = {false, false};
    for (;;) {
      const std::size_t at = pos_;
      const int k = var_index(ident(), at);
      if (seen[k]) fail_at(at, ErrorCode::Syntax, "variable repeated in one term");
      seen[k] = true;
      t.exps[k] = accept('^') ? signed_int() : 1;
      if (!accept('*')) return;
      if (!at_letter()) fail(ErrorCode::Syntax, "expected a variable after '*'");
    }
  }

  Term term() {
    Term t;
    t.pos = pos_;
    if (at_digit()) {
      t.value = coefficient();
      t.plain_zero = t.value.is_zero() && !(t.value.is_padic() && t.value.padic().abs_prec() != ctx_.abs_prec);
      if (accept('*')) {
        monomial(t);
      } else if (at_letter() && !at_marker()) {
        monomial(t);
      }
    } else if (at_letter() && !at_marker()) {
      t.value = ctx_.integer(1);
      monomial(t);
    } else {
      fail(ErrorCode::Syntax, "expected a term");
    }
    return t;
  }

  std::vector<int> marker() {
    expect('O');
    expect('(');
    std::vector<int> out(vars_.size(), 0);
    if (vars_.size() == 1 && at_digit()) {
      const std::size_t at = pos_;
      if (integer() != 1) fail_at(at, ErrorCode::Syntax, "expected O(1) or O(var^n)");
      expect(')');
      return out;
    }
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      if (k > 0) expect(',');
      const std::size_t at = pos_;
      const int idx = var_index(ident(), at);
      if (idx != static_cast<int>(k)) fail_at(at, ErrorCode::Syntax, "O(...) lists the variables out of order");
      out[k] = accept('^') ? signed_int() : 1;
    }
    expect(')');
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  CoeffContext ctx_;
  std::vector<std::string> vars_;
};

// Adds a term; the first contribution is stored as written so literals keep
// their stated precision.
void deposit(std::vector<Coefficient>& slots, std::vector<bool>& touched, std::size_t k,
             const Coefficient& c) {
  slots[k] = touched[k] ? slots[k] + c : c;
  touched[k] = true;
}

std::string monomial_text(std::string_view var, int e) {
  if (e == 0) return "";
  if (e == 1) return std::string(var);
  return std::string(var) + "^" + std::to_string(e);
}

// Appends c * mono to out; returns false when nothing was written.
bool append_term(std::string& out, const Coefficient& c, const std::string& mono, int ctx_abs) {
  const bool first = out.empty();
  if (c.is_padic()) {
    const PAdic& x = c.padic();
    if (x.is_zero() && x.abs_prec() >= ctx_abs) return false;
    if (!first) out += " + ";
    out += x.str();
    if (!mono.empty()) out += "*" + mono;
    return true;
  }
  const Rational& q = c.rational();
  if (q == 0) return false;
  const bool negative = q < 0;
  const Rational a = abs(q);
  out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
  if (mono.empty()) {
    out += a.get_str();
  } else if (a == 1) {
    out += mono;
  } else {
    out += a.get_str() + "*" + mono;
  }
  return true;
}

}  // namespace

TruncatedSeries parse_series(std::string_view text, RingLabel ring, const CoeffContext& ctx,
                             std::string_view var) {
  if (coefficient_kind(ring) != ctx.kind) {
    throw Error(ErrorCode::InvalidInput, "ring " + std::string(ring_name(ring)) + " does not match the mode");
  }
  Parser parser(text, ctx, {std::string(var)});
  const Parsed p = parser.run();
  const int trunc = p.marker[0];
  const bool nonneg = is_nonnegative(ring);
  if (nonneg && trunc < 0) {
    parser.fail_at(p.marker_pos, ErrorCode::ExponentOutOfWindow,
                   "negative truncation order in " + std::string(ring_name(ring)));
  }
  int lo = nonneg ? 0 : std::min(0, trunc);
  for (const auto& t : p.terms) {
    if (t.plain_zero) continue;
    const int e = t.exps[0];
    if (nonneg && e < 0) {
      parser.fail_at(t.pos, ErrorCode::ExponentOutOfWindow,
                     "negative exponent " + std::to_string(e) + " in " + std::string(ring_name(ring)));
    }
    if (e >= trunc) {
      parser.fail_at(t.pos, ErrorCode::ExponentOutOfWindow,
                     "exponent " + std::to_string(e) + " lies at or beyond O(..^" + std::to_string(trunc) + ")");
    }
    lo = std::min(lo, e);
  }
  const auto n = static_cast<std::size_t>(trunc - lo);
  std::vector<Coefficient> slots(n, ctx.zero());
  std::vector<bool> touched(n, false);
  for (const auto& t : p.terms) {
    if (!t.plain_zero) deposit(slots, touched, static_cast<std::size_t>(t.exps[0] - lo), t.value);
  }
  return TruncatedSeries(ring, ctx, lo, std::move(slots));
}

BiSeries parse_biseries(std::string_view text, RingLabel ring, const CoeffContext& ctx,
                        std::string_view base_var, std::string_view fiber_var) {
  if (coefficient_kind(ring) != ctx.kind) {
    throw Error(ErrorCode::InvalidInput, "ring " + std::string(ring_name(ring)) + " does not match the mode");
  }
  Parser parser(text, ctx, {std::string(base_var), std::string(fiber_var)});
  const Parsed p = parser.run();
  const int tu = p.marker[0];
  const int tx = p.marker[1];
  if (tu < 0 || tx < 0) parser.fail_at(p.marker_pos, ErrorCode::ExponentOutOfWindow, "negative truncation order");
  const auto n = static_cast<std::size_t>(tu * tx);
  std::vector<Coefficient> slots(n, ctx.zero());
  std::vector<bool> touched(n, false);
  for (const auto& t : p.terms) {
    if (t.plain_zero) continue;
    const int i = t.exps[0];
    const int j = t.exps[1];
    if (i < 0 || j < 0) parser.fail_at(t.pos, ErrorCode::ExponentOutOfWindow, "negative exponent in a power series");
    if (i >= tu || j >= tx) parser.fail_at(t.pos, ErrorCode::ExponentOutOfWindow, "term lies outside O(...)");
    deposit(slots, touched, static_cast<std::size_t>(i * tx + j), t.value);
  }
  return BiSeries(ring, ctx, tu, tx, std::move(slots));
}

Coefficient parse_coefficient(std::string_view text, const CoeffContext& ctx) {
  Parser parser(text, ctx, {""});
  return parser.lone_coefficient();
}

std::string detect_variable(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isalpha(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
      const std::string word(text.substr(i, j - i));
      if (word != "O" && word != "mod") return word;
      i = j;
    } else {
      ++i;
    }
  }
  return "";
}

std::string print_coefficient(const Coefficient& c) {
  if (c.is_padic()) return c.padic().str();
  return c.rational().get_str();
}

std::string print_series(const TruncatedSeries& s, std::string_view var) {
  std::string out;
  for (int k = s.min_degree(); k < s.trunc_order(); ++k) {
    append_term(out, s.coeff(k), monomial_text(var, k), s.context().abs_prec);
  }
  if (out.empty()) out = "0";
  return out + " + O(" + std::string(var) + "^" + std::to_string(s.trunc_order()) + ")";
}

std::string print_biseries(const BiSeries& s, std::string_view base_var, std::string_view fiber_var) {
  std::string out;
  for (int i = 0; i < s.trunc_u(); ++i) {
    for (int j = 0; j < s.trunc_x(); ++j) {
      std::string mono = monomial_text(base_var, i);
      const std::string fx = monomial_text(fiber_var, j);
      if (!fx.empty()) mono += (mono.empty() ? "" : "*") + fx;
      append_term(out, s.coeff(i, j), mono, s.context().abs_prec);
    }
  }
  if (out.empty()) out = "0";
  return out + " + O(" + std::string(base_var) + "^" + std::to_string(s.trunc_u()) + ", " +
         std::string(fiber_var) + "^" + std::to_string(s.trunc_x()) + ")";
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::NotIntegral: return "not_integral";
    case ErrorCode::NonUnit: return "non_unit";
    case ErrorCode::IntegralObstruction: return "integral_obstruction";
    case ErrorCode::Integrality: return "integrality";
    case ErrorCode::InsufficientWindow: return "insufficient_window";
    case ErrorCode::CannotDetermineDegree: return "cannot_determine_degree";
    case ErrorCode::DisjointWindows: return "disjoint_windows";
    case ErrorCode::NotFramed: return "not_framed";
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::MissingOMarker: return "missing_o_marker";
    case ErrorCode::ExponentOutOfWindow: return "exponent_out_of_window";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace robba
