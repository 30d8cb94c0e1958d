#pragma once

// Text and JSON encodings for exact-core values.
//
// Scalars are strings ("3", "-1/2", "q^2 + 1") or JSON integers, polynomials
// are ascending coefficient arrays, rational functions are {"num", "den"},
// matrices are row-major nested arrays. Symbolic generators must be declared
// in the document header {"constants": [...]}; anything else is rejected.

#include "consys/matrix.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace consys {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct Context {
  std::vector<std::string> constants;
  bool declared(const std::string &name) const;
  void declare(const std::string &name);
};

// Reads the header fields ("version", "constants") of a document.
Context read_context(const json &doc);
// Document skeleton carrying the version and declared constants.
json make_document(const Context &ctx);

// Expression in x and declared constants: + - * / ^integer, parentheses.
RatFunc parse_expression(const std::string &text, const Context &ctx);
Scalar parse_constant(const std::string &text, const Context &ctx);

Scalar scalar_from_json(const json &j, const Context &ctx);
Poly poly_from_json(const json &j, const Context &ctx);
RatFunc ratfunc_from_json(const json &j, const Context &ctx);
RatMatrix matrix_from_json(const json &j, const Context &ctx);
ScalarMatrix scalar_matrix_from_json(const json &j, const Context &ctx);
Series series_from_json(const json &j, const Context &ctx);

json to_json(const Scalar &s);
json to_json(const Poly &p);
json to_json(const RatFunc &f);
json to_json(const RatMatrix &m);
json to_json(const ScalarMatrix &m);
json to_json(const Series &s);

// Every generator name used by a value, for header construction.
void collect_constants(const Scalar &s, Context &ctx);
void collect_constants(const RatFunc &f, Context &ctx);
void collect_constants(const RatMatrix &m, Context &ctx);

} // namespace consys
