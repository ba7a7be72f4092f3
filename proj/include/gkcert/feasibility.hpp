#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gkcert/linform.hpp"
#include "gkcert/matrix.hpp"

namespace gkcert {

// Ax = b with the right-hand side linear in named non-negative integer
// parameters (k, or k2/k3).  A pure numeric system has no parameters.
struct ParamSystem {
    RatMatrix a;
    std::vector<LinRat> rhs;
    std::vector<std::string> params;
    bool params_not_all_zero = false;  // at least one parameter is positive
    bool nontrivial = false;           // only x != 0 counts as a solution

    std::size_t vars() const { return a.cols(); }
    std::size_t rows() const { return a.rows(); }
};

using Instantiation = std::map<std::string, Rat>;

std::pair<RatMatrix, std::vector<Rat>> instantiate(const ParamSystem& s,
                                                   const Instantiation& values);

// Dual vector certifying that {Ax = b, x >= 0} is empty:
// y^T A >= 0 componentwise and y^T b < 0.
struct FarkasCert {
    std::vector<Rat> y;
};

bool verify_farkas(const RatMatrix& a, const std::vector<Rat>& b, const FarkasCert& cert);

struct Feasible {
    std::vector<Rat> x;
};
struct InfeasibleRat {
    FarkasCert cert;
};
using RatVerdict = std::variant<Feasible, InfeasibleRat>;

// Exact phase-one simplex (Bland's rule).  The verdict is certificate-backed
// either way: witnesses re-check by substitution, certificates by
// verify_farkas, both asserted before returning.
RatVerdict nonneg_rational_feasible(const ParamSystem& s, const Instantiation& values);

// "Not all of x zero" variant: solves the x_j >= 1 strengthening for every
// variable; infeasibility comes with one Farkas certificate per variable.
struct InfeasibleNontrivial {
    std::vector<FarkasCert> per_var;  // cert for {Ax = b, x >= 0, x_j >= 1}
};
using NontrivialVerdict = std::variant<Feasible, InfeasibleNontrivial>;
NontrivialVerdict nonneg_rational_nontrivial(const ParamSystem& s, const Instantiation& values);

struct FeasibleInt {
    std::vector<long> x;
};
struct InfeasibleInt {
    std::string reason;
};
using IntVerdict = std::variant<FeasibleInt, InfeasibleInt>;

// Exhaustive search over the box cut out by bound_row (a row with all
// positive coefficients, e.g. the dimension row).  Honors s.nontrivial.
IntVerdict nonneg_integer_feasible(const ParamSystem& s, const Instantiation& values,
                                   std::size_t bound_row);

// k = 1 instantiation of a system whose rhs is homogeneous in one parameter.
// Witnesses scale linearly in k, so this preserves non-negative rational
// feasibility for every k > 0.
ParamSystem scale_reduce(const ParamSystem& s);

// ---- propagation engine ------------------------------------------------

enum class Rule { ForcedZero, ForcedEquality, ForcedBound, Contradiction };

std::string rule_name(Rule r);
Rule rule_from_name(const std::string& s);

// One machine-checkable deduction.  `row` indexes the RREF'd system; steps
// about parameters only carry `form`.
struct DeductionStep {
    Rule rule;
    std::optional<std::size_t> row;
    std::vector<std::size_t> vars;       // affected variables
    std::optional<LinRat> value;         // pinned value (ForcedEquality/Zero)
    std::optional<Rat> lower;            // ForcedBound payloads
    std::optional<Rat> upper;
    std::optional<std::string> param;    // substituted parameter
    std::optional<LinRat> form;          // param fact / substitution form
    std::string note;
};

using DeductionChain = std::vector<DeductionStep>;

struct PropagateResult {
    // system actually propagated on: canonical RREF of [a | rhs]
    RatMatrix reduced;
    std::vector<LinRat> reduced_rhs;
    DeductionChain chain;
    bool contradiction = false;
    std::map<std::size_t, LinRat> pinned;       // var -> exact value
    std::map<std::string, LinRat> param_subs;   // derived parameter equalities
    std::vector<LinRat> param_facts;            // derived forms >= 0
    std::vector<std::size_t> residual_rows;     // rows not fully discharged
};

// Fixpoint iteration of sound sign/bound rules on the RREF rows, replaying
// hand sign-chain arguments as checkable steps.  May stop inconclusive;
// callers fall back to the LP for completeness.
PropagateResult propagate(const ParamSystem& s);

// Independent replay of a chain against the system it claims to reduce.
bool check_chain(const ParamSystem& s, const PropagateResult& result, std::string* why = nullptr);

// Canonical RREF of [a | rhs], pivots restricted to the a-columns; the
// right-hand-side forms ride along as row payload.
void rref_of_system(const ParamSystem& s, RatMatrix& ra, std::vector<LinRat>& rrhs);

}  // namespace gkcert
