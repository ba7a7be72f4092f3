#pragma once

#include <string>

#include "gkcert/json_io.hpp"

namespace gkcert {

// fixture directory: GKCERT_FIXTURES env var, else the bundled default
std::string fixtures_dir();
std::string fixture_path(const std::string& rel);

// "co1" -> "co1_p2" etc.; unknown names pass through
std::string canonical_case_name(const std::string& name);

Json load_case_spec(const std::string& name);

// Executes the case pipeline: prime-graph checks, fixed-point-free
// filtering, restriction-system building, cyclotomic splitting, reduction,
// propagation and feasibility, recording every artifact and check.  A stage
// that fails an expectation marks the report not-ok instead of throwing.
Json run_case(const Json& spec);

// Re-checks a report against its case spec without re-solving: fixture
// hashes, matrix equality claims, Farkas certificates, deduction chains,
// witness substitutions, and fact dataflow (facts used by a stage must be
// produced by an earlier one).
bool verify_report(const Json& report, const Json& spec, std::string* why = nullptr);

}  // namespace gkcert
