#pragma once

#include <json.hpp>

#include "gkcert/chartab.hpp"
#include "gkcert/feasibility.hpp"
#include "gkcert/linform.hpp"
#include "gkcert/matrix.hpp"
#include "gkcert/restriction.hpp"

namespace gkcert {

// insertion-ordered so that serialized artifacts are byte-stable
using Json = nlohmann::ordered_json;

Rat rat_from_json(const Json& j);
Json rat_to_json(const Rat& q);

// {"rat": "p/q"} | {"quad": {"a","b","D"}} | {"zeta": n, "coeffs": [[e,"p/q"],...]},
// with a bare string/number accepted as a rational shorthand
CycValue cyc_from_json(const Json& j);
Json cyc_to_json(const CycValue& v);

// {"const": enc, "<param>": enc, ...}
LinRat lin_rat_from_json(const Json& j);
Json lin_rat_to_json(const LinRat& f);
LinCyc lin_cyc_from_json(const Json& j);
Json lin_cyc_to_json(const LinCyc& f);

RatMatrix rat_matrix_from_json(const Json& j);
Json rat_matrix_to_json(const RatMatrix& m);
CycMatrix cyc_matrix_from_json(const Json& j);
Json cyc_matrix_to_json(const CycMatrix& m);

CharTableSlice slice_from_json(const Json& j);   // validates
FusionMap fusion_from_json(const Json& j);
OrderList orders_from_json(const Json& j);       // validates

ParamSystem system_from_json(const Json& j);
Json system_to_json(const ParamSystem& s);

Json farkas_to_json(const FarkasCert& c);
FarkasCert farkas_from_json(const Json& j);

Json step_to_json(const DeductionStep& s);
DeductionStep step_from_json(const Json& j);
Json propagate_result_to_json(const PropagateResult& r);
PropagateResult propagate_result_from_json(const Json& j);

Json built_system_to_json(const BuiltSystem& s);

// FNV-1a 64-bit over the compact dump; pins report inputs to exact bytes
std::string content_hash(const Json& j);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace gkcert
