#pragma once

#include "gkcert/chartab.hpp"
#include "gkcert/feasibility.hpp"
#include "gkcert/linform.hpp"
#include "gkcert/matrix.hpp"

namespace gkcert {

// A target Brauer character constrained on parent classes (values linear in
// parameters) restricted through a fusion map to a subgroup slice.
struct RestrictionScenario {
    std::string parent;
    const CharTableSlice* sub = nullptr;
    FusionMap fusion;
    std::vector<int> allowed;                 // candidate constituent ids
    std::map<std::string, LinCyc> targets;    // parent class -> constrained value

    void validate() const;
};

// One equation per (subgroup class, constrained parent class) fusion
// incidence: sum over allowed of x_i * rho_i(class) = target(parent class).
// Columns follow the slice's character-id order, rows the fixture class
// order.
struct BuiltSystem {
    CycMatrix lhs;
    std::vector<LinCyc> rhs;
    std::vector<std::string> row_classes;  // subgroup class per row
    std::vector<int> col_ids;              // character id per column
    std::vector<std::string> params;
};

BuiltSystem build_system(const RestrictionScenario& sc);

struct CycEquation {
    std::vector<CycValue> coeffs;
    LinCyc rhs;
};
struct RatEquation {
    std::vector<Rat> coeffs;
    LinRat rhs;
};

// One rational equation per primitive-basis exponent of Q(zeta_n), n prime;
// duplicates removed keeping first-occurrence order.  exponent_row[e-1]
// reports which output equation exponent e produced (for round-trip checks).
struct SplitResult {
    std::vector<RatEquation> equations;
    std::vector<std::size_t> exponent_row;
};

SplitResult split_cyclotomic(const CycEquation& eq, long n);

// Whole-system split: rational rows pass through unchanged (deduplicated the
// same way), cyclotomic rows expand over the given prime.
ParamSystem split_system(const BuiltSystem& sys, long n);

// Rational cast for systems that never left Q.
ParamSystem rational_system(const BuiltSystem& sys);

// Multiplicities of the allowed constituents as linear forms in parameters.
struct ResolvedRestriction {
    std::map<int, LinRat> multiplicities;
};

// sum multiplicity_i * rho_i(subgroup class) over a parent class, checked to
// agree across every subgroup class fusing there; no rationality requirement.
LinCyc evaluate_restriction(const RestrictionScenario& sc, const ResolvedRestriction& resolved,
                            const std::string& parent_class);

// evaluate_restriction + the requirement that the cyclotomic parts cancel.
LinRat pin_values(const RestrictionScenario& sc, const ResolvedRestriction& resolved,
                  const std::string& parent_class);

// Coefficient row of sum x_i (rho_i(class1) - rho_i(class2)) = 0; entries
// must come out rational.
RatEquation equal_fusion_constraint(const CharTableSlice& slice, const std::vector<int>& allowed,
                                    const std::string& class1, const std::string& class2);

}  // namespace gkcert
