#include "consys/io.hpp"

namespace consys {

namespace {

const json &field(const json &j, const char *name) {
  if (!j.is_object() || !j.contains(name))
    fail(ErrorKind::InvalidInput, std::string("missing field \"") + name + "\"");
  return j[name];
}

long integer_field(const json &j, const char *name, const Context &ctx) {
  Scalar s = scalar_from_json(field(j, name), ctx);
  if (!s.is_integer())
    fail(ErrorKind::InvalidInput, std::string("field \"") + name + "\" must be an integer");
  return s.rational().get_num().get_si();
}

long ramification_field(const json &j) {
  if (!j.contains("ramification"))
    return 1;
  if (!j["ramification"].is_number_integer() || j["ramification"].get<long>() < 1)
    fail(ErrorKind::InvalidInput, "ramification must be a positive integer");
  return j["ramification"].get<long>();
}

} // namespace

OperatorCase case_from_json(const json &j, const Context &ctx) {
  const json &k = field(j, "kind");
  if (!k.is_string())
    fail(ErrorKind::InvalidInput, "case kind must be a string");
  std::string kind = k.get<std::string>();
  if (kind == "S")
    return OperatorCase::S();
  if (kind == "Q")
    return OperatorCase::Q(scalar_from_json(field(j, "q"), ctx));
  if (kind == "M")
    return OperatorCase::M(integer_field(j, "q", ctx));
  if (kind == "2S")
    return OperatorCase::TwoS(scalar_from_json(field(j, "alpha"), ctx), j.value("irrational", false));
  if (kind == "2Q")
    return OperatorCase::TwoQ(scalar_from_json(field(j, "q1"), ctx), scalar_from_json(field(j, "q2"), ctx));
  if (kind == "2M")
    return OperatorCase::TwoM(integer_field(j, "q1", ctx), integer_field(j, "q2", ctx));
  fail(ErrorKind::InvalidInput, "unknown case kind \"" + kind + "\"");
}

json to_json(const OperatorCase &c) {
  switch (c.kind()) {
  case CaseKind::S:
    return {{"kind", "S"}};
  case CaseKind::Q:
    return {{"kind", "Q"}, {"q", to_json(c.param(1))}};
  case CaseKind::M:
    return {{"kind", "M"}, {"q", c.mahler_power(1)}};
  case CaseKind::TwoS: {
    json j{{"kind", "2S"}, {"alpha", to_json(c.param(2))}};
    if (c.irrational_marker())
      j["irrational"] = true;
    return j;
  }
  case CaseKind::TwoQ:
    return {{"kind", "2Q"}, {"q1", to_json(c.param(1))}, {"q2", to_json(c.param(2))}};
  case CaseKind::TwoM:
    return {{"kind", "2M"}, {"q1", c.mahler_power(1)}, {"q2", c.mahler_power(2)}};
  }
  fail(ErrorKind::Internal, "unknown case kind");
}

ScalarOperator operator_from_json(const json &j, const Context &ctx) {
  OperatorCase c = case_from_json(field(j, "case"), ctx);
  std::string kind = field(j, "kind").is_string() ? j["kind"].get<std::string>() : "";
  OpKind k;
  if (kind == "delta")
    k = OpKind::Delta;
  else if (kind == "sigma1" || kind == "sigma")
    k = OpKind::Sigma1;
  else if (kind == "sigma2")
    k = OpKind::Sigma2;
  else
    fail(ErrorKind::InvalidInput, "operator kind must be delta, sigma1 or sigma2");
  const json &cj = field(j, "coeffs");
  if (!cj.is_array())
    fail(ErrorKind::InvalidInput, "operator coeffs must be an array");
  std::vector<RatFunc> coeffs;
  for (const auto &e : cj)
    coeffs.push_back(ratfunc_from_json(e, ctx));
  return make_operator(c, k, std::move(coeffs));
}

json to_json(const ScalarOperator &op) {
  json coeffs = json::array();
  for (const auto &c : op.coeffs)
    coeffs.push_back(to_json(c));
  const char *kind = op.kind == OpKind::Delta ? "delta" : op.kind == OpKind::Sigma1 ? "sigma1" : "sigma2";
  return {{"case", to_json(op.cs)}, {"kind", kind}, {"coeffs", coeffs}};
}

AnySystem system_from_json(const json &j, const Context &ctx) {
  OperatorCase c = case_from_json(field(j, "case"), ctx);
  long r = ramification_field(j);
  if (c.has_delta())
    return make_dd_system(c, matrix_from_json(field(j, "A"), ctx), matrix_from_json(field(j, "B"), ctx), r);
  return make_ss_system(c, matrix_from_json(field(j, "B1"), ctx), matrix_from_json(field(j, "B2"), ctx), r);
}

json to_json(const DDSystem &s) {
  json j{{"case", to_json(s.cs)}, {"A", to_json(s.A)}, {"B", to_json(s.B)}};
  if (s.ramification != 1)
    j["ramification"] = s.ramification;
  return j;
}

json to_json(const SigmaSigmaSystem &s) {
  json j{{"case", to_json(s.cs)}, {"B1", to_json(s.B1)}, {"B2", to_json(s.B2)}};
  if (s.ramification != 1)
    j["ramification"] = s.ramification;
  return j;
}

json to_json(const AnySystem &s) {
  return std::visit([](const auto &x) { return to_json(x); }, s);
}

DDCertificate dd_certificate_from_json(const json &j, const Context &ctx) {
  auto src = system_from_json(field(j, "source"), ctx), dst = system_from_json(field(j, "target"), ctx);
  if (!std::holds_alternative<DDSystem>(src) || !std::holds_alternative<DDSystem>(dst))
    fail(ErrorKind::InvalidInput, "certificate endpoints must be delta-sigma systems");
  return {matrix_from_json(field(j, "G"), ctx), std::get<DDSystem>(src), std::get<DDSystem>(dst)};
}

SSCertificate ss_certificate_from_json(const json &j, const Context &ctx) {
  auto src = system_from_json(field(j, "source"), ctx), dst = system_from_json(field(j, "target"), ctx);
  if (!std::holds_alternative<SigmaSigmaSystem>(src) || !std::holds_alternative<SigmaSigmaSystem>(dst))
    fail(ErrorKind::InvalidInput, "certificate endpoints must be two-sigma systems");
  return {matrix_from_json(field(j, "G"), ctx), std::get<SigmaSigmaSystem>(src), std::get<SigmaSigmaSystem>(dst)};
}

json to_json(const DDCertificate &c) {
  return {{"G", to_json(c.G)}, {"source", to_json(c.source)}, {"target", to_json(c.target)}};
}

json to_json(const SSCertificate &c) {
  return {{"G", to_json(c.G)}, {"source", to_json(c.source)}, {"target", to_json(c.target)}};
}

void collect_constants(const OperatorCase &c, Context &ctx) {
  collect_constants(c.param(1), ctx);
  collect_constants(c.param(2), ctx);
}

void collect_constants(const ScalarOperator &op, Context &ctx) {
  collect_constants(op.cs, ctx);
  for (const auto &c : op.coeffs)
    collect_constants(c, ctx);
}

void collect_constants(const DDSystem &s, Context &ctx) {
  collect_constants(s.cs, ctx);
  collect_constants(s.A, ctx);
  collect_constants(s.B, ctx);
}

void collect_constants(const SigmaSigmaSystem &s, Context &ctx) {
  collect_constants(s.cs, ctx);
  collect_constants(s.B1, ctx);
  collect_constants(s.B2, ctx);
}

json document(const Context &ctx, const json &body) {
  json doc = make_document(ctx);
  for (auto it = body.begin(); it != body.end(); ++it)
    doc[it.key()] = it.value();
  return doc;
}

} // namespace consys
