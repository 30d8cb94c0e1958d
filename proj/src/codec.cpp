#include "consys/codec.hpp"

#include <algorithm>
#include <cctype>

namespace consys {

bool Context::declared(const std::string &name) const {
  return std::find(constants.begin(), constants.end(), name) != constants.end();
}

void Context::declare(const std::string &name) {
  if (!declared(name))
    constants.push_back(name);
}

namespace {

bool valid_identifier(const std::string &s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class Parser {
public:
  Parser(const std::string &text, const Context &ctx, bool allow_x) : s_(text), ctx_(ctx), allow_x_(allow_x) {}

  RatFunc run() {
    RatFunc v = expr();
    skip();
    if (pos_ != s_.size())
      error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

private:
  [[noreturn]] void error(const std::string &msg) const {
    fail(ErrorKind::InvalidInput, "cannot parse \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  RatFunc term() {
    RatFunc v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        RatFunc d = unary();
        if (d.is_zero())
          error("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  RatFunc unary() {
    if (eat('-'))
      return -unary();
    if (eat('+'))
      return unary();
    return power();
  }
  RatFunc power() {
    RatFunc base = atom();
    if (!eat('^'))
      return base;
    long e = exponent();
    if (e < 0 && base.is_zero())
      error("negative power of zero");
    return base.pow(e);
  }
  long exponent() {
    bool paren = eat('(');
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      error("exponent must be an integer");
    if (pos_ - start > 6)
      error("exponent too large");
    long e = std::stol(s_.substr(start, pos_ - start));
    if (paren && !eat(')'))
      error("missing ')'");
    return neg ? -e : e;
  }
  RatFunc atom() {
    skip();
    if (pos_ >= s_.size())
      error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc v = expr();
      if (!eat(')'))
        error("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
        error("floating-point literals are not accepted");
      return RatFunc(Scalar(Integer(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (name == "x") {
        if (!allow_x_)
          error("x is not allowed in a constant");
        return RatFunc::x();
      }
      if (!ctx_.declared(name))
        error("undeclared constant '" + name + "'");
      return RatFunc(Scalar::generator(name));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const std::string &s_;
  const Context &ctx_;
  bool allow_x_;
  std::size_t pos_ = 0;
};

} // namespace

Context read_context(const json &doc) {
  Context ctx;
  if (!doc.is_object())
    fail(ErrorKind::InvalidInput, "document must be a JSON object");
  if (doc.contains("version") && (!doc["version"].is_number_integer() || doc["version"].get<int>() != kFormatVersion))
    fail(ErrorKind::InvalidInput, "unsupported format version");
  if (doc.contains("constants")) {
    const auto &c = doc["constants"];
    if (!c.is_array())
      fail(ErrorKind::InvalidInput, "\"constants\" must be an array of names");
    for (const auto &n : c) {
      if (!n.is_string() || !valid_identifier(n.get<std::string>()) || n.get<std::string>() == "x")
        fail(ErrorKind::InvalidInput, "invalid constant name " + n.dump());
      ctx.declare(n.get<std::string>());
    }
  }
  return ctx;
}

json make_document(const Context &ctx) {
  json doc = json::object();
  doc["version"] = kFormatVersion;
  doc["constants"] = ctx.constants;
  return doc;
}

RatFunc parse_expression(const std::string &text, const Context &ctx) { return Parser(text, ctx, true).run(); }

Scalar parse_constant(const std::string &text, const Context &ctx) {
  return Parser(text, ctx, false).run().constant_value();
}

Scalar scalar_from_json(const json &j, const Context &ctx) {
  if (j.is_number_integer())
    return Scalar(Integer(j.dump()));
  if (j.is_string())
    return parse_constant(j.get<std::string>(), ctx);
  fail(ErrorKind::InvalidInput, "expected a constant (integer or string), got " + j.dump());
}

Poly poly_from_json(const json &j, const Context &ctx) {
  if (j.is_array()) {
    std::vector<Scalar> c;
    for (const auto &e : j)
      c.push_back(scalar_from_json(e, ctx));
    return Poly(std::move(c));
  }
  if (j.is_string()) {
    RatFunc f = parse_expression(j.get<std::string>(), ctx);
    if (!f.is_polynomial())
      fail(ErrorKind::InvalidInput, "expected a polynomial, got " + j.dump());
    return f.num().scaled(f.den().leading().inverse());
  }
  if (j.is_number_integer())
    return Poly(scalar_from_json(j, ctx));
  fail(ErrorKind::InvalidInput, "expected a polynomial, got " + j.dump());
}

RatFunc ratfunc_from_json(const json &j, const Context &ctx) {
  if (j.is_object()) {
    if (!j.contains("num"))
      fail(ErrorKind::InvalidInput, "rational function object needs \"num\"");
    Poly num = poly_from_json(j["num"], ctx);
    Poly den = j.contains("den") ? poly_from_json(j["den"], ctx) : Poly(Scalar(1));
    if (den.is_zero())
      fail(ErrorKind::InvalidInput, "rational function with zero denominator");
    return RatFunc(num, den);
  }
  if (j.is_string())
    return parse_expression(j.get<std::string>(), ctx);
  return RatFunc(poly_from_json(j, ctx));
}

RatMatrix matrix_from_json(const json &j, const Context &ctx) {
  if (!j.is_array() || j.empty())
    fail(ErrorKind::InvalidInput, "matrix must be a non-empty array of rows");
  std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  RatMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      fail(ErrorKind::InvalidInput, "matrix rows must be arrays of equal length");
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = ratfunc_from_json(j[i][k], ctx);
  }
  return m;
}

ScalarMatrix scalar_matrix_from_json(const json &j, const Context &ctx) {
  RatMatrix m = matrix_from_json(j, ctx);
  if (!is_constant(m))
    fail(ErrorKind::InvalidInput, "expected a constant matrix");
  return constant_part(m);
}

Series series_from_json(const json &j, const Context &ctx) {
  if (!j.is_object() || !j.contains("coeffs"))
    fail(ErrorKind::InvalidInput, "series must be an object with \"coeffs\"");
  long r = j.value("ramification", 1L);
  long v = j.value("valuation", 0L);
  long prec = Series::kExact;
  if (j.contains("prec") && !j["prec"].is_null())
    prec = j["prec"].get<long>();
  std::vector<Scalar> c;
  for (const auto &e : j["coeffs"])
    c.push_back(scalar_from_json(e, ctx));
  if (r < 1)
    fail(ErrorKind::InvalidInput, "series ramification must be positive");
  return Series(r, v, std::move(c), prec);
}

json to_json(const Scalar &s) { return s.str(); }

json to_json(const Poly &p) {
  json a = json::array();
  for (const auto &c : p.coeffs())
    a.push_back(to_json(c));
  return a;
}

json to_json(const RatFunc &f) { return json{{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

json to_json(const RatMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const ScalarMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Series &s) {
  json c = json::array();
  for (const auto &e : s.coeffs())
    c.push_back(to_json(e));
  json out{{"ramification", s.ramification()}, {"valuation", s.is_zero() ? 0 : s.valuation()}, {"coeffs", c}};
  out["prec"] = s.is_exact() ? json(nullptr) : json(s.prec());
  return out;
}

void collect_constants(const Scalar &s, Context &ctx) {
  for (const auto &g : s.generators())
    ctx.declare(g);
}

void collect_constants(const RatFunc &f, Context &ctx) {
  for (const auto &c : f.num().coeffs())
    collect_constants(c, ctx);
  for (const auto &c : f.den().coeffs())
    collect_constants(c, ctx);
}

void collect_constants(const RatMatrix &m, Context &ctx) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      collect_constants(m(i, k), ctx);
}

} // namespace consys
