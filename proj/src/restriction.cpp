#include "gkcert/restriction.hpp"

#include <algorithm>
#include <set>

namespace gkcert {

void RestrictionScenario::validate() const {
    if (!sub) throw Error("restriction scenario has no subgroup slice");
    std::set<int> ids;
    for (const auto& ch : sub->characters) ids.insert(ch.id);
    for (int id : allowed) {
        if (!ids.count(id))
            throw Error("allowed id " + std::to_string(id) + " not in slice " + sub->group_name);
    }
    for (const auto& [pcls, form] : targets) {
        (void)form;
        bool hit = false;
        for (const auto& [from, to] : fusion.map) {
            (void)from;
            if (to == pcls) hit = true;
        }
        if (!hit)
            throw Error("target class " + pcls + " of " + parent + " is not hit by the fusion");
    }
}

BuiltSystem build_system(const RestrictionScenario& sc) {
    sc.validate();
    BuiltSystem out;
    std::set<std::string> params;
    for (const auto& [pcls, form] : sc.targets) {
        (void)pcls;
        for (const auto& [k, v] : form.coeffs) {
            (void)v;
            params.insert(k);
        }
    }
    out.params.assign(params.begin(), params.end());
    out.col_ids = sc.allowed;

    std::vector<std::pair<std::string, LinCyc>> rows;
    for (const auto& cls : sc.sub->classes) {
        auto it = sc.fusion.map.find(cls.name);
        if (it == sc.fusion.map.end()) continue;  // class not fused: skipped
        auto target = sc.targets.find(it->second);
        if (target == sc.targets.end()) continue;  // unconstrained: skipped
        rows.emplace_back(cls.name, target->second);
    }
    out.lhs = CycMatrix(rows.size(), sc.allowed.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.row_classes.push_back(rows[r].first);
        out.rhs.push_back(rows[r].second);
        for (std::size_t c = 0; c < sc.allowed.size(); ++c)
            out.lhs.at(r, c) = sc.sub->value(sc.allowed[c], rows[r].first);
    }
    return out;
}

SplitResult split_cyclotomic(const CycEquation& eq, long n) {
    if (!is_prime(n)) throw Error("split_cyclotomic: n must be prime");
    // Every coefficient splits into a rational part plus a vector over the
    // primitive basis zeta^1..zeta^(n-1); matching coefficients of each basis
    // root gives one rational equation per exponent.  A rational constant r
    // contributes -r at every root (the all-roots relation), so exponent e
    // yields:  sum_j (basis_e(c_j) ) x_j = basis_e(rhs).
    const std::size_t m = eq.coeffs.size();
    std::vector<std::vector<Rat>> lhs_exp(m);
    for (std::size_t j = 0; j < m; ++j) lhs_exp[j] = expand_primitive_basis(eq.coeffs[j], n);
    std::vector<Rat> rhs_const = expand_primitive_basis(eq.rhs.constant, n);
    std::map<std::string, std::vector<Rat>> rhs_params;
    for (const auto& [k, v] : eq.rhs.coeffs) rhs_params[k] = expand_primitive_basis(v, n);

    SplitResult out;
    out.exponent_row.assign(static_cast<std::size_t>(n - 1), 0);
    for (long e = 1; e < n; ++e) {
        RatEquation row;
        row.coeffs.resize(m);
        for (std::size_t j = 0; j < m; ++j) row.coeffs[j] = lhs_exp[j][e - 1];
        row.rhs.constant = rhs_const[e - 1];
        for (const auto& [k, v] : rhs_params) row.rhs.coeffs[k] = v[e - 1];
        row.rhs.normalize();
        // drop identically-zero rows, dedup the rest preserving first sight
        bool zero_row = row.rhs.is_zero() &&
                        std::all_of(row.coeffs.begin(), row.coeffs.end(),
                                    [](const Rat& c) { return c == 0; });
        if (zero_row) {
            out.exponent_row[e - 1] = static_cast<std::size_t>(-1);
            continue;
        }
        std::size_t found = out.equations.size();
        for (std::size_t i = 0; i < out.equations.size(); ++i) {
            if (out.equations[i].coeffs == row.coeffs && out.equations[i].rhs == row.rhs) {
                found = i;
                break;
            }
        }
        if (found == out.equations.size()) out.equations.push_back(row);
        out.exponent_row[e - 1] = found;
    }
    return out;
}

namespace {
ParamSystem pack(const std::vector<RatEquation>& rows, const std::vector<std::string>& params,
                 std::size_t cols) {
    ParamSystem s;
    s.params = params;
    s.a = RatMatrix(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) s.a.at(r, c) = rows[r].coeffs[c];
        s.rhs.push_back(rows[r].rhs);
    }
    return s;
}
}  // namespace

ParamSystem split_system(const BuiltSystem& sys, long n) {
    std::vector<RatEquation> rows;
    auto push_dedup = [&](const RatEquation& row) {
        bool zero_row = row.rhs.is_zero() &&
                        std::all_of(row.coeffs.begin(), row.coeffs.end(),
                                    [](const Rat& c) { return c == 0; });
        if (zero_row) return;
        for (const auto& r : rows)
            if (r.coeffs == row.coeffs && r.rhs == row.rhs) return;
        rows.push_back(row);
    };
    for (std::size_t r = 0; r < sys.lhs.rows(); ++r) {
        CycEquation eq;
        for (std::size_t c = 0; c < sys.lhs.cols(); ++c) eq.coeffs.push_back(sys.lhs.at(r, c));
        eq.rhs = sys.rhs[r];
        bool rational = eq.rhs.constant.is_rational();
        for (const auto& [k, v] : eq.rhs.coeffs) {
            (void)k;
            if (!v.is_rational()) rational = false;
        }
        for (const auto& c : eq.coeffs)
            if (!c.is_rational()) rational = false;
        if (rational) {
            RatEquation row;
            for (const auto& c : eq.coeffs) row.coeffs.push_back(c.as_rational());
            row.rhs = lin_rat_of(eq.rhs);
            push_dedup(row);
        } else {
            for (const auto& row : split_cyclotomic(eq, n).equations) push_dedup(row);
        }
    }
    return pack(rows, sys.params, sys.lhs.cols());
}

ParamSystem rational_system(const BuiltSystem& sys) {
    ParamSystem s;
    s.params = sys.params;
    s.a = rat_matrix_of(sys.lhs);
    for (const auto& f : sys.rhs) s.rhs.push_back(lin_rat_of(f));
    return s;
}

LinCyc evaluate_restriction(const RestrictionScenario& sc, const ResolvedRestriction& resolved,
                            const std::string& parent_class) {
    for (int id : sc.allowed) {
        if (!resolved.multiplicities.count(id))
            throw Error("resolved restriction lacks multiplicity for id " + std::to_string(id));
    }
    std::optional<LinCyc> common;
    for (const auto& cls : sc.sub->classes) {
        auto it = sc.fusion.map.find(cls.name);
        if (it == sc.fusion.map.end() || it->second != parent_class) continue;
        LinCyc total;
        for (int id : sc.allowed) {
            const LinRat& mult = resolved.multiplicities.at(id);
            if (mult.is_zero()) continue;
            total = total + lin_cyc_of(mult) * sc.sub->value(id, cls.name);
        }
        if (common && *common != total)
            throw Error("restriction value differs across subgroup classes fusing to " +
                        parent_class + " (" + common->str() + " vs " + total.str() + ")");
        common = total;
    }
    if (!common)
        throw Error("no subgroup class of " + sc.sub->group_name + " fuses to " + parent_class);
    return *common;
}

LinRat pin_values(const RestrictionScenario& sc, const ResolvedRestriction& resolved,
                  const std::string& parent_class) {
    LinCyc v = evaluate_restriction(sc, resolved, parent_class);
    if (!v.constant.is_rational())
        throw Error("pinned value at " + parent_class + " has an irrational residue: " + v.str());
    for (const auto& [k, c] : v.coeffs) {
        if (!c.is_rational())
            throw Error("pinned value at " + parent_class + " has an irrational " + k +
                        "-coefficient: " + v.str());
    }
    return lin_rat_of(v);
}

RatEquation equal_fusion_constraint(const CharTableSlice& slice, const std::vector<int>& allowed,
                                    const std::string& class1, const std::string& class2) {
    RatEquation eq;
    for (int id : allowed) {
        CycValue d = slice.value(id, class1) - slice.value(id, class2);
        if (!d.is_rational())
            throw Error("equal-fusion difference is irrational for character " +
                        std::to_string(id));
        eq.coeffs.push_back(d.as_rational());
    }
    eq.rhs = LinRat(Rat(0));
    return eq;
}

}  // namespace gkcert
