#include "gkcert/json_io.hpp"

#include <fstream>

namespace gkcert {

Rat rat_from_json(const Json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>());
    throw Error("expected rational string, got: " + j.dump());
}

Json rat_to_json(const Rat& q) { return Json(rat_str(q)); }

CycValue cyc_from_json(const Json& j) {
    if (j.is_string() || j.is_number_integer()) return CycValue(rat_from_json(j));
    if (!j.is_object()) throw Error("bad CycValue encoding: " + j.dump());
    if (j.contains("rat")) return CycValue(rat_from_json(j.at("rat")));
    if (j.contains("quad")) {
        const Json& q = j.at("quad");
        QuadSpec spec;
        spec.a = rat_from_json(q.at("a"));
        spec.b = rat_from_json(q.at("b"));
        spec.d = q.at("D").get<long>();
        return CycValue::from_quad(spec);
    }
    if (j.contains("zeta")) {
        long n = j.at("zeta").get<long>();
        CycValue v;
        for (const auto& pair : j.at("coeffs")) {
            long e = pair.at(0).get<long>();
            Rat c = rat_from_json(pair.at(1));
            v += CycValue::zeta(n, e) * CycValue(c);
        }
        return v;
    }
    throw Error("bad CycValue encoding: " + j.dump());
}

Json cyc_to_json(const CycValue& v) {
    if (v.is_rational()) {
        Json j;
        j["rat"] = rat_str(v.as_rational());
        return j;
    }
    Json j;
    j["zeta"] = v.conductor();
    Json coeffs = Json::array();
    for (const auto& [e, c] : v.coeffs()) coeffs.push_back(Json::array({e, rat_str(c)}));
    j["coeffs"] = coeffs;
    return j;
}

namespace {
template <class T, class FromJson>
LinForm<T> lin_from_json(const Json& j, FromJson from) {
    LinForm<T> f;
    if (j.is_string() || j.is_number_integer()) {
        f.constant = from(j);
        return f;
    }
    if (!j.is_object()) throw Error("bad linear form: " + j.dump());
    for (const auto& [k, v] : j.items()) {
        if (k == "const") f.constant = from(v);
        else f.coeffs[k] = from(v);
    }
    f.normalize();
    return f;
}
}  // namespace

LinRat lin_rat_from_json(const Json& j) {
    return lin_from_json<Rat>(j, [](const Json& x) { return rat_from_json(x); });
}

Json lin_rat_to_json(const LinRat& f) {
    Json j;
    for (const auto& [k, v] : f.coeffs) j[k] = rat_str(v);
    j["const"] = rat_str(f.constant);
    return j;
}

LinCyc lin_cyc_from_json(const Json& j) {
    return lin_from_json<CycValue>(j, [](const Json& x) { return cyc_from_json(x); });
}

Json lin_cyc_to_json(const LinCyc& f) {
    Json j;
    for (const auto& [k, v] : f.coeffs) j[k] = cyc_to_json(v);
    j["const"] = cyc_to_json(f.constant);
    return j;
}

RatMatrix rat_matrix_from_json(const Json& j) {
    if (!j.is_array()) throw Error("matrix must be an array of rows");
    std::size_t rows = j.size();
    std::size_t cols = rows ? j.at(0).size() : 0;
    RatMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j.at(r).size() != cols) throw Error("ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rat_from_json(j.at(r).at(c));
    }
    return m;
}

Json rat_matrix_to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rat_str(m.at(r, c)));
        rows.push_back(row);
    }
    return rows;
}

CycMatrix cyc_matrix_from_json(const Json& j) {
    if (!j.is_array()) throw Error("matrix must be an array of rows");
    std::size_t rows = j.size();
    std::size_t cols = rows ? j.at(0).size() : 0;
    CycMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j.at(r).size() != cols) throw Error("ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = cyc_from_json(j.at(r).at(c));
    }
    return m;
}

Json cyc_matrix_to_json(const CycMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const CycValue& v = m.at(r, c);
            if (v.is_rational()) row.push_back(rat_str(v.as_rational()));
            else row.push_back(cyc_to_json(v));
        }
        rows.push_back(row);
    }
    return rows;
}

CharTableSlice slice_from_json(const Json& j) {
    CharTableSlice s;
    s.group_name = j.at("group").get<std::string>();
    s.characteristic = j.at("characteristic").get<long>();
    for (const auto& c : j.at("classes")) {
        ClassInfo ci;
        ci.name = c.at("name").get<std::string>();
        ci.order = c.at("order").get<long>();
        s.classes.push_back(ci);
    }
    if (j.contains("power_maps")) {
        for (const auto& [k, pm] : j.at("power_maps").items()) {
            long r = std::stol(k);
            for (const auto& [from, to] : pm.items())
                s.power_maps[r][from] = to.get<std::string>();
        }
    }
    for (const auto& c : j.at("characters")) {
        Character ch;
        ch.id = c.at("id").get<int>();
        ch.degree = rat_from_json(c.at("degree"));
        for (const auto& [cls, v] : c.at("values").items()) ch.values[cls] = cyc_from_json(v);
        s.characters.push_back(ch);
    }
    if (j.contains("provenance")) s.provenance = j.at("provenance").get<std::string>();
    s.validate();
    return s;
}

FusionMap fusion_from_json(const Json& j) {
    FusionMap f;
    f.sub = j.at("sub").get<std::string>();
    f.parent = j.at("parent").get<std::string>();
    for (const auto& [from, to] : j.at("map").items()) {
        if (to.is_string()) {
            f.map[from] = to.get<std::string>();
        } else if (to.is_array() && to.size() == 1) {
            f.map[from] = to.at(0).get<std::string>();
        } else {
            throw Error("fusion image of " + from + " must name one parent class");
        }
    }
    return f;
}

OrderList orders_from_json(const Json& j) {
    OrderList o;
    o.group_name = j.at("group").get<std::string>();
    for (const auto& v : j.at("orders")) o.element_orders.insert(v.get<long>());
    o.validate();
    return o;
}

ParamSystem system_from_json(const Json& j) {
    ParamSystem s;
    s.a = rat_matrix_from_json(j.at("matrix"));
    for (const auto& f : j.at("rhs")) s.rhs.push_back(lin_rat_from_json(f));
    if (s.rhs.size() != s.a.rows()) throw Error("system rhs length != row count");
    if (j.contains("params"))
        for (const auto& p : j.at("params")) s.params.push_back(p.get<std::string>());
    if (j.contains("params_not_all_zero")) s.params_not_all_zero = j.at("params_not_all_zero").get<bool>();
    if (j.contains("nontrivial")) s.nontrivial = j.at("nontrivial").get<bool>();
    return s;
}

Json system_to_json(const ParamSystem& s) {
    Json j;
    j["matrix"] = rat_matrix_to_json(s.a);
    Json rhs = Json::array();
    for (const auto& f : s.rhs) rhs.push_back(lin_rat_to_json(f));
    j["rhs"] = rhs;
    j["params"] = s.params;
    j["params_not_all_zero"] = s.params_not_all_zero;
    j["nontrivial"] = s.nontrivial;
    return j;
}

Json farkas_to_json(const FarkasCert& c) {
    Json y = Json::array();
    for (const auto& v : c.y) y.push_back(rat_str(v));
    return y;
}

FarkasCert farkas_from_json(const Json& j) {
    FarkasCert c;
    for (const auto& v : j) c.y.push_back(rat_from_json(v));
    return c;
}

Json step_to_json(const DeductionStep& s) {
    Json j;
    j["rule"] = rule_name(s.rule);
    if (s.row) j["row"] = *s.row;
    if (!s.vars.empty()) j["vars"] = s.vars;
    if (s.value) j["value"] = lin_rat_to_json(*s.value);
    if (s.lower) j["lower"] = rat_str(*s.lower);
    if (s.upper) j["upper"] = rat_str(*s.upper);
    if (s.param) j["param"] = *s.param;
    if (s.form) j["form"] = lin_rat_to_json(*s.form);
    j["note"] = s.note;
    return j;
}

DeductionStep step_from_json(const Json& j) {
    DeductionStep s;
    s.rule = rule_from_name(j.at("rule").get<std::string>());
    if (j.contains("row")) s.row = j.at("row").get<std::size_t>();
    if (j.contains("vars"))
        for (const auto& v : j.at("vars")) s.vars.push_back(v.get<std::size_t>());
    if (j.contains("value")) s.value = lin_rat_from_json(j.at("value"));
    if (j.contains("lower")) s.lower = rat_from_json(j.at("lower"));
    if (j.contains("upper")) s.upper = rat_from_json(j.at("upper"));
    if (j.contains("param")) s.param = j.at("param").get<std::string>();
    if (j.contains("form")) s.form = lin_rat_from_json(j.at("form"));
    if (j.contains("note")) s.note = j.at("note").get<std::string>();
    return s;
}

Json propagate_result_to_json(const PropagateResult& r) {
    Json j;
    j["reduced"] = rat_matrix_to_json(r.reduced);
    Json rhs = Json::array();
    for (const auto& f : r.reduced_rhs) rhs.push_back(lin_rat_to_json(f));
    j["reduced_rhs"] = rhs;
    Json chain = Json::array();
    for (const auto& s : r.chain) chain.push_back(step_to_json(s));
    j["chain"] = chain;
    j["contradiction"] = r.contradiction;
    Json pins;
    for (const auto& [v, f] : r.pinned) pins[std::to_string(v)] = lin_rat_to_json(f);
    j["pinned"] = pins;
    Json subs;
    for (const auto& [p, f] : r.param_subs) subs[p] = lin_rat_to_json(f);
    j["param_subs"] = subs;
    Json facts = Json::array();
    for (const auto& f : r.param_facts) facts.push_back(lin_rat_to_json(f));
    j["param_facts"] = facts;
    j["residual_rows"] = r.residual_rows;
    return j;
}

PropagateResult propagate_result_from_json(const Json& j) {
    PropagateResult r;
    r.reduced = rat_matrix_from_json(j.at("reduced"));
    for (const auto& f : j.at("reduced_rhs")) r.reduced_rhs.push_back(lin_rat_from_json(f));
    for (const auto& s : j.at("chain")) r.chain.push_back(step_from_json(s));
    r.contradiction = j.at("contradiction").get<bool>();
    for (const auto& [k, f] : j.at("pinned").items())
        r.pinned[static_cast<std::size_t>(std::stoul(k))] = lin_rat_from_json(f);
    for (const auto& [k, f] : j.at("param_subs").items()) r.param_subs[k] = lin_rat_from_json(f);
    for (const auto& f : j.at("param_facts")) r.param_facts.push_back(lin_rat_from_json(f));
    for (const auto& v : j.at("residual_rows")) r.residual_rows.push_back(v.get<std::size_t>());
    return r;
}

Json built_system_to_json(const BuiltSystem& s) {
    Json j;
    j["matrix"] = cyc_matrix_to_json(s.lhs);
    Json rhs = Json::array();
    for (const auto& f : s.rhs) rhs.push_back(lin_cyc_to_json(f));
    j["rhs"] = rhs;
    j["row_classes"] = s.row_classes;
    j["col_ids"] = s.col_ids;
    j["params"] = s.params;
    return j;
}

std::string content_hash(const Json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("parse error in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(1) << "\n";
}

}  // namespace gkcert
