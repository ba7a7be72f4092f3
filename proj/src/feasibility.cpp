#include "gkcert/feasibility.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace gkcert {

std::pair<RatMatrix, std::vector<Rat>> instantiate(const ParamSystem& s,
                                                   const Instantiation& values) {
    for (const auto& p : s.params) {
        if (!values.count(p)) throw Error("instantiate: parameter not assigned: " + p);
    }
    std::vector<Rat> b;
    b.reserve(s.rhs.size());
    for (const auto& f : s.rhs) b.push_back(f.eval(values));
    return {s.a, b};
}

bool verify_farkas(const RatMatrix& a, const std::vector<Rat>& b, const FarkasCert& cert) {
    if (cert.y.size() != a.rows() || b.size() != a.rows())
        throw Error("verify_farkas: dimension mismatch");
    for (std::size_t j = 0; j < a.cols(); ++j) {
        Rat s = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += cert.y[i] * a.at(i, j);
        if (s < 0) return false;
    }
    Rat yb = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) yb += cert.y[i] * b[i];
    return yb < 0;
}

namespace {

bool check_witness(const RatMatrix& a, const std::vector<Rat>& b, const std::vector<Rat>& x) {
    for (const auto& v : x)
        if (v < 0) return false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Rat s = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a.at(i, j) * x[j];
        if (s != b[i]) return false;
    }
    return true;
}

// Phase-one simplex over exact rationals, Bland's rule throughout.
RatVerdict phase_one(const RatMatrix& a, const std::vector<Rat>& b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m == 0) return Feasible{std::vector<Rat>(n, Rat(0))};

    std::vector<int> sign(m, 1);
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<Rat>> t(m + 1, std::vector<Rat>(cols, Rat(0)));
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) sign[i] = -1;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = sign[i] * a.at(i, j);
        t[i][n + i] = 1;
        t[i][cols - 1] = sign[i] * b[i];
    }
    // reduced costs for min sum(artificials), artificials basic
    for (std::size_t j = 0; j < n; ++j) {
        Rat s = 0;
        for (std::size_t i = 0; i < m; ++i) s += t[i][j];
        t[m][j] = -s;
    }
    {
        Rat s = 0;
        for (std::size_t i = 0; i < m; ++i) s += t[i][cols - 1];
        t[m][cols - 1] = -s;  // negative of current objective
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    for (;;) {
        std::size_t enter = cols - 1;
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (t[m][j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == cols - 1) break;  // optimal
        std::size_t leave = m;
        Rat best = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > 0) {
                Rat ratio = t[i][cols - 1] / t[i][enter];
                if (leave == m || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave == m) throw Error("phase-one simplex unbounded (internal)");
        // pivot at (leave, enter)
        Rat inv = Rat(1) / t[leave][enter];
        for (std::size_t j = 0; j < cols; ++j) t[leave][j] *= inv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            if (t[i][enter] == 0) continue;
            Rat f = t[i][enter];
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    Rat z = -t[m][cols - 1];
    if (z > 0) {
        FarkasCert cert;
        cert.y.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            Rat yprime = Rat(1) - t[m][n + i];
            cert.y[i] = -yprime * sign[i];
        }
        if (!verify_farkas(a, b, cert))
            throw Error("internal: emitted Farkas certificate failed verification");
        return InfeasibleRat{cert};
    }
    std::vector<Rat> x(n, Rat(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) x[basis[i]] = t[i][cols - 1];
    }
    if (!check_witness(a, b, x))
        throw Error("internal: simplex witness failed substitution check");
    return Feasible{x};
}

}  // namespace

RatVerdict nonneg_rational_feasible(const ParamSystem& s, const Instantiation& values) {
    auto [a, b] = instantiate(s, values);
    return phase_one(a, b);
}

NontrivialVerdict nonneg_rational_nontrivial(const ParamSystem& s, const Instantiation& values) {
    auto [a, b] = instantiate(s, values);
    const std::size_t n = a.cols();
    InfeasibleNontrivial out;
    for (std::size_t j = 0; j < n; ++j) {
        // substitute x_j = 1 + x_j' ; feasibility of the shifted system means
        // a solution with x_j >= 1 exists
        std::vector<Rat> shifted(b);
        for (std::size_t i = 0; i < a.rows(); ++i) shifted[i] -= a.at(i, j);
        RatVerdict v = phase_one(a, shifted);
        if (auto* f = std::get_if<Feasible>(&v)) {
            std::vector<Rat> x = f->x;
            x[j] += 1;
            return Feasible{x};
        }
        out.per_var.push_back(std::get<InfeasibleRat>(v).cert);
    }
    return out;
}

namespace {
long rat_floor(const Rat& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!r.fits_slong_p()) throw Error("integer box bound too large");
    return r.get_si();
}
}  // namespace

IntVerdict nonneg_integer_feasible(const ParamSystem& s, const Instantiation& values,
                                   std::size_t bound_row) {
    auto [a, b] = instantiate(s, values);
    const std::size_t m = a.rows(), n = a.cols();
    if (bound_row >= m) throw Error("nonneg_integer_feasible: bound_row out of range");
    for (std::size_t j = 0; j < n; ++j) {
        if (a.at(bound_row, j) <= 0)
            throw Error("nonneg_integer_feasible: bound row must have all-positive coefficients");
    }
    std::vector<long> box(n);
    for (std::size_t j = 0; j < n; ++j) {
        Rat u = b[bound_row] / a.at(bound_row, j);
        box[j] = u < 0 ? -1 : rat_floor(u);
        if (box[j] < 0)
            return InfeasibleInt{"bound row forces an empty box (negative right-hand side)"};
    }
    // suffix min/max contribution of variables j..n-1 per row
    std::vector<std::vector<Rat>> smin(m, std::vector<Rat>(n + 1, Rat(0)));
    std::vector<std::vector<Rat>> smax(m, std::vector<Rat>(n + 1, Rat(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = n; j-- > 0;) {
            Rat c = a.at(i, j);
            smin[i][j] = smin[i][j + 1] + (c < 0 ? c * box[j] : Rat(0));
            smax[i][j] = smax[i][j + 1] + (c > 0 ? c * box[j] : Rat(0));
        }
    }
    std::vector<long> x(n, 0);
    std::vector<Rat> partial(m, Rat(0));
    bool want_nontrivial = s.nontrivial;

    std::function<bool(std::size_t, bool)> dfs = [&](std::size_t j, bool all_zero) -> bool {
        for (std::size_t i = 0; i < m; ++i) {
            if (partial[i] + smin[i][j] > b[i]) return false;
            if (partial[i] + smax[i][j] < b[i]) return false;
        }
        if (j == n) return !(want_nontrivial && all_zero);
        for (long v = 0; v <= box[j]; ++v) {
            x[j] = v;
            for (std::size_t i = 0; i < m; ++i) partial[i] += a.at(i, j) * v;
            if (dfs(j + 1, all_zero && v == 0)) return true;
            for (std::size_t i = 0; i < m; ++i) partial[i] -= a.at(i, j) * v;
        }
        x[j] = 0;
        return false;
    };
    if (dfs(0, true)) {
        std::vector<Rat> xr(x.begin(), x.end());
        if (!check_witness(a, b, xr)) throw Error("internal: integer witness failed recheck");
        return FeasibleInt{x};
    }
    std::ostringstream why;
    why << "exhaustive search over the box from row " << bound_row << " found no "
        << (want_nontrivial ? "non-trivial " : "") << "solution";
    return InfeasibleInt{why.str()};
}

ParamSystem scale_reduce(const ParamSystem& s) {
    if (s.params.empty()) {
        for (const auto& f : s.rhs) {
            if (!f.is_zero()) throw Error("scale_reduce: parameter-free rhs must be zero");
        }
        return s;
    }
    if (s.params.size() != 1)
        throw Error("scale_reduce: system must have exactly one parameter");
    ParamSystem out;
    out.a = s.a;
    out.nontrivial = s.nontrivial;
    for (const auto& f : s.rhs) {
        if (f.constant != 0)
            throw Error("scale_reduce: rhs is not homogeneous in " + s.params[0]);
        out.rhs.push_back(LinRat(f.coeff(s.params[0])));
    }
    return out;
}

// ---- propagation engine -------------------------------------------------

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::ForcedZero: return "ForcedZero";
        case Rule::ForcedEquality: return "ForcedEquality";
        case Rule::ForcedBound: return "ForcedBound";
        case Rule::Contradiction: return "Contradiction";
    }
    throw Error("bad rule");
}

Rule rule_from_name(const std::string& s) {
    if (s == "ForcedZero") return Rule::ForcedZero;
    if (s == "ForcedEquality") return Rule::ForcedEquality;
    if (s == "ForcedBound") return Rule::ForcedBound;
    if (s == "Contradiction") return Rule::Contradiction;
    throw Error("bad rule name: " + s);
}

namespace {

// Canonical RREF of [a | rhs] pivoting on the a-columns only; the forms ride
// along as row payload.
void rref_param(const RatMatrix& a, const std::vector<LinRat>& rhs, RatMatrix& ra,
                std::vector<LinRat>& rrhs) {
    ra = a;
    rrhs = rhs;
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t pr = 0;
    for (std::size_t c = 0; c < n && pr < m; ++c) {
        std::size_t sel = pr;
        while (sel < m && ra.at(sel, c) == 0) ++sel;
        if (sel == m) continue;
        if (sel != pr) {
            for (std::size_t j = 0; j < n; ++j) std::swap(ra.at(sel, j), ra.at(pr, j));
            std::swap(rrhs[sel], rrhs[pr]);
        }
        Rat inv = Rat(1) / ra.at(pr, c);
        for (std::size_t j = c; j < n; ++j) ra.at(pr, j) *= inv;
        rrhs[pr] = rrhs[pr] * inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == pr || ra.at(r, c) == 0) continue;
            Rat f = ra.at(r, c);
            for (std::size_t j = c; j < n; ++j) ra.at(r, j) -= f * ra.at(pr, j);
            rrhs[r] = rrhs[r] - rrhs[pr] * f;
        }
        ++pr;
    }
}

bool always_nonneg(const LinRat& f) {
    if (f.constant < 0) return false;
    for (const auto& [k, v] : f.coeffs)
        if (v < 0) return false;
    return true;
}
bool always_nonpos(const LinRat& f) {
    if (f.constant > 0) return false;
    for (const auto& [k, v] : f.coeffs)
        if (v > 0) return false;
    return true;
}

struct PropState {
    const RatMatrix* a = nullptr;
    const std::vector<LinRat>* rhs = nullptr;
    std::map<std::size_t, LinRat> pinned;
    std::vector<Rat> lower;
    std::vector<std::optional<Rat>> upper;
    std::map<std::string, LinRat> param_subs;
    std::vector<LinRat> param_facts;
    bool contradiction = false;

    LinRat apply_subs(LinRat f) const {
        for (const auto& [p, g] : param_subs) f = f.substituted(p, g);
        return f;
    }
    bool has_fact(const LinRat& f) const {
        for (const auto& g : param_facts)
            if (g == f) return true;
        return false;
    }

    // row after substituting pinned variables and parameter equalities:
    // coefficients over unpinned variables, and the moved right-hand side
    void reduced_row(std::size_t r, std::map<std::size_t, Rat>& coeffs, LinRat& f) const {
        coeffs.clear();
        f = apply_subs((*rhs)[r]);
        for (std::size_t j = 0; j < a->cols(); ++j) {
            Rat c = a->at(r, j);
            if (c == 0) continue;
            auto it = pinned.find(j);
            if (it != pinned.end()) {
                f = f - apply_subs(it->second) * c;
            } else {
                coeffs[j] = c;
            }
        }
        f.normalize();
    }

    void add_sub(const std::string& p, const LinRat& value) {
        LinRat v = apply_subs(value);
        for (auto& [q, g] : param_subs) g = g.substituted(p, v);
        param_subs[p] = v;
        for (auto& [j, g] : pinned) g = g.substituted(p, v);
        for (auto& g : param_facts) g = g.substituted(p, v);
    }
};

LinRat solve_for(const LinRat& f, const std::string& param) {
    // f = 0 solved for `param`
    Rat c = f.coeff(param);
    if (c == 0) throw Error("solve_for: parameter absent from form");
    LinRat rest = f;
    rest.coeffs.erase(param);
    return rest * (Rat(-1) / c);
}

std::string last_param_of(const LinRat& f) {
    if (f.coeffs.empty()) throw Error("no parameter in form");
    return f.coeffs.rbegin()->first;
}

std::string vars_note(const std::vector<std::size_t>& vars) {
    std::ostringstream os;
    for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? "," : "") << "x" << (vars[i] + 1);
    return os.str();
}

// Validates `step` against `st` and applies it.  The engine and the chain
// checker share this function, so a recorded chain replays exactly or not at
// all.
bool apply_step(PropState& st, const DeductionStep& step, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t n = st.a->cols();

    auto pin_var = [&](std::size_t j, const LinRat& v) { st.pinned[j] = st.apply_subs(v); };

    switch (step.rule) {
        case Rule::ForcedZero:
        case Rule::ForcedEquality: {
            if (step.param) {
                // parameter equality: form = 0 must be justified, then solved
                if (!step.form || !step.value) return fail("param step missing form/value");
                LinRat f = st.apply_subs(*step.form);
                bool justified = false;
                if (step.row) {
                    std::map<std::size_t, Rat> coeffs;
                    LinRat g;
                    st.reduced_row(*step.row, coeffs, g);
                    justified = coeffs.empty() && g == f;
                } else {
                    LinRat neg = -f;
                    bool pos = st.has_fact(f), negf = st.has_fact(neg);
                    justified = (pos && negf) || (pos && always_nonpos(f)) ||
                                (negf && always_nonneg(f));
                }
                if (!justified) return fail("parameter equality not justified");
                LinRat solved = solve_for(f, *step.param);
                if (st.apply_subs(*step.value) != solved) return fail("solved form mismatch");
                st.add_sub(*step.param, solved);
                return true;
            }
            if (!step.row) return fail("variable pin without row");
            std::map<std::size_t, Rat> coeffs;
            LinRat f;
            st.reduced_row(*step.row, coeffs, f);
            if (step.vars.size() == 1 && coeffs.size() == 1 &&
                coeffs.count(step.vars[0])) {
                // single free variable: x_j = f / a
                std::size_t j = step.vars[0];
                LinRat v = f * (Rat(1) / coeffs.at(j));
                if (!step.value || st.apply_subs(*step.value) != v) return fail("pin value mismatch");
                if (v.is_constant()) {
                    if (v.constant < st.lower[j]) return fail("pin below lower bound (should be contradiction)");
                    if (st.upper[j] && v.constant > *st.upper[j])
                        return fail("pin above upper bound (should be contradiction)");
                } else {
                    LinRat slack = v - LinRat(st.lower[j]);
                    if (!always_nonneg(slack) && !st.has_fact(slack)) st.param_facts.push_back(slack);
                }
                pin_var(j, v);
                return true;
            }
            // multi-variable pin at the row minimum
            bool flip = false;
            for (const auto& [j, c] : coeffs) {
                (void)j;
                if (c < 0) flip = true;
            }
            std::map<std::size_t, Rat> cc = coeffs;
            LinRat ff = f;
            if (flip) {
                for (auto& [j, c] : cc) {
                    (void)j;
                    c = -c;
                }
                ff = -f;
            }
            for (const auto& [j, c] : cc) {
                (void)j;
                if (c <= 0) return fail("multi pin needs one-signed row");
            }
            if (!ff.is_constant()) return fail("multi pin needs constant rhs");
            Rat msum = 0;
            for (const auto& [j, c] : cc) msum += c * st.lower[j];
            if (ff.constant != msum) return fail("row minimum does not meet rhs");
            std::vector<std::size_t> expect;
            for (const auto& [j, c] : cc) {
                (void)c;
                expect.push_back(j);
            }
            if (expect != step.vars) return fail("pinned variable set mismatch");
            for (std::size_t j : expect) pin_var(j, LinRat(st.lower[j]));
            return true;
        }
        case Rule::ForcedBound: {
            if (step.form) {
                // parameter fact: rhs form minus the row minimum is >= 0
                if (!step.row) return fail("param fact without row");
                std::map<std::size_t, Rat> coeffs;
                LinRat f;
                st.reduced_row(*step.row, coeffs, f);
                bool flip = false;
                for (const auto& [j, c] : coeffs) {
                    (void)j;
                    if (c < 0) flip = true;
                }
                if (flip) {
                    for (auto& [j, c] : coeffs) {
                        (void)j;
                        c = -c;
                    }
                    f = -f;
                }
                for (const auto& [j, c] : coeffs) {
                    (void)j;
                    if (c <= 0) return fail("param fact needs one-signed row");
                }
                Rat msum = 0;
                for (const auto& [j, c] : coeffs) msum += c * st.lower[j];
                LinRat fact = f - LinRat(msum);
                if (st.apply_subs(*step.form) != fact) return fail("param fact mismatch");
                if (!st.has_fact(fact)) st.param_facts.push_back(fact);
                return true;
            }
            if (!step.row || step.vars.size() != 1) return fail("bound step needs row and var");
            std::size_t jj = step.vars[0];
            std::map<std::size_t, Rat> coeffs;
            LinRat f;
            st.reduced_row(*step.row, coeffs, f);
            if (!f.is_constant()) return fail("bound step needs constant rhs");
            if (!coeffs.count(jj)) return fail("bound variable not in row");
            // interval of sum_{i != j} a_i x_i
            Rat lo = 0, hi = 0;
            bool lo_inf = false, hi_inf = false;
            for (const auto& [j, c] : coeffs) {
                if (j == jj) continue;
                if (c > 0) {
                    lo += c * st.lower[j];
                    if (st.upper[j]) hi += c * *st.upper[j];
                    else hi_inf = true;
                } else {
                    hi += c * st.lower[j];
                    if (st.upper[j]) lo += c * *st.upper[j];
                    else lo_inf = true;
                }
            }
            Rat aj = coeffs.at(jj);
            std::optional<Rat> new_lo, new_hi;
            if (aj > 0) {
                if (!hi_inf) new_lo = (f.constant - hi) / aj;
                if (!lo_inf) new_hi = (f.constant - lo) / aj;
            } else {
                if (!hi_inf) new_hi = (f.constant - hi) / aj;
                if (!lo_inf) new_lo = (f.constant - lo) / aj;
            }
            if (step.lower) {
                if (!new_lo || *new_lo != *step.lower) return fail("derived lower bound mismatch");
                if (*step.lower <= st.lower[jj]) return fail("lower bound does not tighten");
                st.lower[jj] = *step.lower;
            } else if (step.upper) {
                if (!new_hi || *new_hi != *step.upper) return fail("derived upper bound mismatch");
                if (st.upper[jj] && *step.upper >= *st.upper[jj]) return fail("upper bound does not tighten");
                st.upper[jj] = *step.upper;
            } else {
                return fail("bound step without payload");
            }
            if (st.upper[jj] && st.lower[jj] > *st.upper[jj])
                return fail("bounds crossed (should be contradiction)");
            return true;
        }
        case Rule::Contradiction: {
            if (step.form) {
                LinRat f = st.apply_subs(*step.form);
                if (!st.has_fact(f)) return fail("contradiction fact not derived");
                if (always_nonpos(f) && !f.is_zero() && f.is_constant() && f.constant < 0) {
                    st.contradiction = true;
                    return true;
                }
                if (f.is_constant() && f.constant < 0) {
                    st.contradiction = true;
                    return true;
                }
                return fail("fact is not always negative");
            }
            if (!step.row) return fail("contradiction needs row or form");
            std::map<std::size_t, Rat> coeffs;
            LinRat f;
            st.reduced_row(*step.row, coeffs, f);
            if (coeffs.empty()) {
                if (f.is_constant() && f.constant != 0) {
                    st.contradiction = true;
                    return true;
                }
                return fail("empty row is consistent");
            }
            if (coeffs.size() == 1) {
                std::size_t j = coeffs.begin()->first;
                LinRat v = f * (Rat(1) / coeffs.begin()->second);
                if (v.is_constant() &&
                    (v.constant < st.lower[j] || (st.upper[j] && v.constant > *st.upper[j]))) {
                    st.contradiction = true;
                    return true;
                }
            }
            bool flip = false;
            for (const auto& [j, c] : coeffs) {
                (void)j;
                if (c < 0) flip = true;
            }
            std::map<std::size_t, Rat> cc = coeffs;
            LinRat ff = f;
            if (flip) {
                for (auto& [j, c] : cc) {
                    (void)j;
                    c = -c;
                }
                ff = -f;
            }
            bool onesign = true;
            for (const auto& [j, c] : cc) {
                (void)j;
                if (c <= 0) onesign = false;
            }
            if (onesign && ff.is_constant()) {
                Rat msum = 0;
                for (const auto& [j, c] : cc) msum += c * st.lower[j];
                if (ff.constant < msum) {
                    st.contradiction = true;
                    return true;
                }
            }
            return fail("row does not witness a contradiction");
        }
    }
    return fail("unknown rule");
}

std::optional<DeductionStep> find_step(const PropState& st) {
    const std::size_t m = st.a->rows();
    // pass 1: contradictions, equalities and pins
    for (std::size_t r = 0; r < m; ++r) {
        std::map<std::size_t, Rat> coeffs;
        LinRat f;
        st.reduced_row(r, coeffs, f);
        if (coeffs.empty()) {
            if (f.is_zero()) continue;
            if (f.is_constant()) {
                DeductionStep s{Rule::Contradiction, r, {}, {}, {}, {}, {}, {}, ""};
                std::ostringstream os;
                os << "row " << (r + 1) << " reduces to 0 = " << rat_str(f.constant);
                s.note = os.str();
                return s;
            }
            // 0 = f: parameter relation
            std::string p = last_param_of(f);
            DeductionStep s{Rule::ForcedEquality, r, {}, {}, {}, {}, p, f, ""};
            s.value = solve_for(f, p);
            s.note = "row " + std::to_string(r + 1) + " forces " + p + " = " + s.value->str();
            return s;
        }
        if (coeffs.size() == 1) {
            std::size_t j = coeffs.begin()->first;
            LinRat v = f * (Rat(1) / coeffs.begin()->second);
            if (v.is_constant()) {
                if (v.constant < st.lower[j] || (st.upper[j] && v.constant > *st.upper[j])) {
                    DeductionStep s{Rule::Contradiction, r, {j}, {}, {}, {}, {}, {}, ""};
                    std::ostringstream os;
                    os << "row " << (r + 1) << " pins x" << (j + 1) << " = " << rat_str(v.constant)
                       << " outside [" << rat_str(st.lower[j]) << ", "
                       << (st.upper[j] ? rat_str(*st.upper[j]) : "inf") << "]";
                    s.note = os.str();
                    return s;
                }
            }
            DeductionStep s{v.is_zero() ? Rule::ForcedZero : Rule::ForcedEquality,
                            r, {j}, v, {}, {}, {}, {}, ""};
            s.note = "row " + std::to_string(r + 1) + " pins x" + std::to_string(j + 1) +
                     " = " + v.str();
            return s;
        }
        // one-signed rows
        bool flip = false;
        for (const auto& [j, c] : coeffs) {
            (void)j;
            if (c < 0) flip = true;
        }
        std::map<std::size_t, Rat> cc = coeffs;
        LinRat ff = f;
        if (flip) {
            for (auto& [j, c] : cc) {
                (void)j;
                c = -c;
            }
            ff = -f;
        }
        bool onesign = true;
        for (const auto& [j, c] : cc) {
            (void)j;
            if (c <= 0) {
                onesign = false;
                break;
            }
        }
        if (onesign) {
            Rat msum = 0;
            for (const auto& [j, c] : cc) msum += c * st.lower[j];
            if (ff.is_constant()) {
                if (ff.constant < msum) {
                    DeductionStep s{Rule::Contradiction, r, {}, {}, {}, {}, {}, {}, ""};
                    std::ostringstream os;
                    os << "row " << (r + 1) << ": minimum of one-signed left side is "
                       << rat_str(msum) << " > " << rat_str(ff.constant);
                    s.note = os.str();
                    return s;
                }
                if (ff.constant == msum) {
                    std::vector<std::size_t> vars;
                    bool all_zero = true;
                    for (const auto& [j, c] : cc) {
                        (void)c;
                        vars.push_back(j);
                        if (st.lower[j] != 0) all_zero = false;
                    }
                    DeductionStep s{all_zero ? Rule::ForcedZero : Rule::ForcedEquality,
                                    r, vars, {}, {}, {}, {}, {}, ""};
                    s.note = "row " + std::to_string(r + 1) + " meets its minimum; " +
                             vars_note(vars) + " pinned at lower bounds";
                    return s;
                }
            } else {
                LinRat fact = ff - LinRat(msum);
                if (!st.has_fact(fact) && !always_nonneg(fact)) {
                    DeductionStep s{Rule::ForcedBound, r, {}, {}, {}, {}, {}, fact, ""};
                    s.note = "row " + std::to_string(r + 1) + " forces " + fact.str() + " >= 0";
                    return s;
                }
            }
        }
    }
    // pass 2: parameter relations from accumulated facts
    for (const auto& f : st.param_facts) {
        if (f.coeffs.empty()) {
            if (f.constant < 0) {
                DeductionStep s{Rule::Contradiction, {}, {}, {}, {}, {}, {}, f, ""};
                s.note = "derived fact " + f.str() + " >= 0 is false";
                return s;
            }
            continue;
        }
        LinRat neg = -f;
        if (st.has_fact(neg) || always_nonpos(f)) {
            std::string p = last_param_of(f);
            DeductionStep s{Rule::ForcedEquality, {}, {}, {}, {}, {}, p, f, ""};
            s.value = solve_for(f, p);
            s.note = "facts force " + f.str() + " = 0, so " + p + " = " + s.value->str();
            return s;
        }
    }
    // pass 3: interval bound updates
    for (std::size_t r = 0; r < m; ++r) {
        std::map<std::size_t, Rat> coeffs;
        LinRat f;
        st.reduced_row(r, coeffs, f);
        if (coeffs.size() < 2 || !f.is_constant()) continue;
        for (const auto& [jj, aj] : coeffs) {
            Rat lo = 0, hi = 0;
            bool lo_inf = false, hi_inf = false;
            for (const auto& [j, c] : coeffs) {
                if (j == jj) continue;
                if (c > 0) {
                    lo += c * st.lower[j];
                    if (st.upper[j]) hi += c * *st.upper[j];
                    else hi_inf = true;
                } else {
                    hi += c * st.lower[j];
                    if (st.upper[j]) lo += c * *st.upper[j];
                    else lo_inf = true;
                }
            }
            std::optional<Rat> new_lo, new_hi;
            if (aj > 0) {
                if (!hi_inf) new_lo = (f.constant - hi) / aj;
                if (!lo_inf) new_hi = (f.constant - lo) / aj;
            } else {
                if (!hi_inf) new_hi = (f.constant - hi) / aj;
                if (!lo_inf) new_lo = (f.constant - lo) / aj;
            }
            if (new_lo && *new_lo > st.lower[jj]) {
                if (st.upper[jj] && *new_lo > *st.upper[jj]) {
                    DeductionStep s{Rule::Contradiction, r, {jj}, {}, {}, {}, {}, {}, ""};
                    s.note = "row " + std::to_string(r + 1) + " forces x" + std::to_string(jj + 1) +
                             " above its upper bound";
                    return s;
                }
                DeductionStep s{Rule::ForcedBound, r, {jj}, {}, *new_lo, {}, {}, {}, ""};
                s.note = "row " + std::to_string(r + 1) + " forces x" + std::to_string(jj + 1) +
                         " >= " + rat_str(*new_lo);
                return s;
            }
            if (new_hi && (!st.upper[jj] || *new_hi < *st.upper[jj])) {
                if (*new_hi < st.lower[jj]) {
                    DeductionStep s{Rule::Contradiction, r, {jj}, {}, {}, {}, {}, {}, ""};
                    s.note = "row " + std::to_string(r + 1) + " forces x" + std::to_string(jj + 1) +
                             " below its lower bound";
                    return s;
                }
                DeductionStep s{Rule::ForcedBound, r, {jj}, {}, {}, *new_hi, {}, {}, ""};
                s.note = "row " + std::to_string(r + 1) + " forces x" + std::to_string(jj + 1) +
                         " <= " + rat_str(*new_hi);
                return s;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

void rref_of_system(const ParamSystem& s, RatMatrix& ra, std::vector<LinRat>& rrhs) {
    rref_param(s.a, s.rhs, ra, rrhs);
}

PropagateResult propagate(const ParamSystem& s) {
    PropagateResult out;
    rref_param(s.a, s.rhs, out.reduced, out.reduced_rhs);

    PropState st;
    st.a = &out.reduced;
    st.rhs = &out.reduced_rhs;
    st.lower.assign(s.vars(), Rat(0));
    st.upper.assign(s.vars(), std::nullopt);

    const std::size_t step_cap = 2000;
    while (out.chain.size() < step_cap) {
        auto step = find_step(st);
        if (!step) break;
        std::string why;
        if (!apply_step(st, *step, &why))
            throw Error("internal: propagation step failed its own check: " + why);
        out.chain.push_back(*step);
        if (st.contradiction) break;
    }
    out.contradiction = st.contradiction;
    out.pinned = st.pinned;
    out.param_subs = st.param_subs;
    out.param_facts = st.param_facts;
    for (std::size_t r = 0; r < out.reduced.rows(); ++r) {
        std::map<std::size_t, Rat> coeffs;
        LinRat f;
        st.reduced_row(r, coeffs, f);
        if (!coeffs.empty() || !f.is_zero()) out.residual_rows.push_back(r);
    }
    return out;
}

bool check_chain(const ParamSystem& s, const PropagateResult& result, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    RatMatrix ra;
    std::vector<LinRat> rrhs;
    rref_param(s.a, s.rhs, ra, rrhs);
    if (ra != result.reduced) return fail("recorded RREF does not match recomputation");
    for (std::size_t i = 0; i < rrhs.size(); ++i) {
        if (rrhs[i] != result.reduced_rhs[i]) return fail("recorded RREF rhs mismatch");
    }
    PropState st;
    st.a = &ra;
    st.rhs = &rrhs;
    st.lower.assign(s.vars(), Rat(0));
    st.upper.assign(s.vars(), std::nullopt);
    for (std::size_t i = 0; i < result.chain.size(); ++i) {
        if (st.contradiction) return fail("steps continue past a contradiction");
        std::string m;
        if (!apply_step(st, result.chain[i], &m))
            return fail("step " + std::to_string(i + 1) + ": " + m);
    }
    if (st.contradiction != result.contradiction) return fail("contradiction flag mismatch");
    if (st.pinned != result.pinned) return fail("pinned-variable state mismatch");
    if (st.param_subs != result.param_subs) return fail("parameter substitution mismatch");
    return true;
}

}  // namespace gkcert
