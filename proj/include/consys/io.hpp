#pragma once

// JSON documents for cases, operators, systems and gauge certificates.
//
//   case:        {"kind": "S"} | {"kind": "Q", "q": c} | {"kind": "M", "q": n}
//                {"kind": "2S", "alpha": c, "irrational": bool}
//                {"kind": "2Q", "q1": c, "q2": c} | {"kind": "2M", "q1": n, "q2": n}
//   operator:    {"case", "kind": "delta" | "sigma1" | "sigma2", "coeffs": [RatFunc]}
//   system:      {"case", "A", "B"} or {"case", "B1", "B2"}, optional "ramification"
//   certificate: {"G", "source": system, "target": system}
//
// Documents carry the header {"version", "constants"}; values nested in a
// document use the document's constants.

#include "consys/codec.hpp"
#include "consys/systems.hpp"

#include <variant>

namespace consys {

OperatorCase case_from_json(const json &j, const Context &ctx);
json to_json(const OperatorCase &c);

ScalarOperator operator_from_json(const json &j, const Context &ctx);
json to_json(const ScalarOperator &op);

using AnySystem = std::variant<DDSystem, SigmaSigmaSystem>;
AnySystem system_from_json(const json &j, const Context &ctx);
json to_json(const DDSystem &s);
json to_json(const SigmaSigmaSystem &s);
json to_json(const AnySystem &s);

DDCertificate dd_certificate_from_json(const json &j, const Context &ctx);
SSCertificate ss_certificate_from_json(const json &j, const Context &ctx);
json to_json(const DDCertificate &c);
json to_json(const SSCertificate &c);

void collect_constants(const OperatorCase &c, Context &ctx);
void collect_constants(const ScalarOperator &op, Context &ctx);
void collect_constants(const DDSystem &s, Context &ctx);
void collect_constants(const SigmaSigmaSystem &s, Context &ctx);

// Header plus the fields of `body`, constants collected by the caller.
json document(const Context &ctx, const json &body);

} // namespace consys
