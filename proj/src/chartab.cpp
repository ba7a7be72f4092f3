#include "gkcert/chartab.hpp"

#include <numeric>
#include <sstream>

namespace gkcert {

const ClassInfo& CharTableSlice::class_info(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return c;
    throw Error(group_name + ": unknown class " + name);
}

bool CharTableSlice::has_class(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return true;
    return false;
}

const Character& CharTableSlice::character(int id) const {
    for (const auto& ch : characters)
        if (ch.id == id) return ch;
    throw Error(group_name + ": unknown character id " + std::to_string(id));
}

const CycValue& CharTableSlice::value(int char_id, const std::string& class_name) const {
    const Character& ch = character(char_id);
    auto it = ch.values.find(class_name);
    if (it == ch.values.end())
        throw Error(group_name + ": character " + std::to_string(char_id) +
                    " has no recorded value on class " + class_name);
    return it->second;
}

void CharTableSlice::validate() const {
    std::set<std::string> names;
    std::string identity;
    for (const auto& c : classes) {
        if (!names.insert(c.name).second)
            throw Error(group_name + ": duplicate class " + c.name);
        if (c.order < 1) throw Error(group_name + ": class " + c.name + " has order < 1");
        if (characteristic > 0 && c.order % characteristic == 0)
            throw Error(group_name + ": class " + c.name + " is not " +
                        std::to_string(characteristic) + "-regular");
        if (c.order == 1) identity = c.name;
    }
    if (identity.empty()) throw Error(group_name + ": no identity class");
    std::set<int> ids;
    for (const auto& ch : characters) {
        if (!ids.insert(ch.id).second)
            throw Error(group_name + ": duplicate character id " + std::to_string(ch.id));
        auto it = ch.values.find(identity);
        if (it == ch.values.end())
            throw Error(group_name + ": character " + std::to_string(ch.id) +
                        " lacks a value at the identity class");
        if (!it->second.is_rational() || it->second.as_rational() != ch.degree)
            throw Error(group_name + ": character " + std::to_string(ch.id) +
                        " has identity value != degree");
        for (const auto& [cls, v] : ch.values) {
            (void)v;
            if (!names.count(cls))
                throw Error(group_name + ": character " + std::to_string(ch.id) +
                            " carries a value on unknown class " + cls);
        }
    }
    for (const auto& [r, pm] : power_maps) {
        if (!is_prime(r))
            throw Error(group_name + ": power map key " + std::to_string(r) + " is not prime");
        for (const auto& [from, to] : pm) {
            const ClassInfo& cf = class_info(from);
            const ClassInfo& ct = class_info(to);
            long expect = cf.order / std::gcd(cf.order, r);
            if (ct.order != expect) {
                std::ostringstream os;
                os << group_name << ": power map " << r << " sends " << from << " (order "
                   << cf.order << ") to " << to << " (order " << ct.order << "), expected order "
                   << expect;
                throw Error(os.str());
            }
        }
    }
}

void OrderList::validate() const {
    if (element_orders.empty()) throw Error(group_name + ": empty order list");
    if (!element_orders.count(1)) throw Error(group_name + ": order list lacks 1");
    for (long o : element_orders) {
        for (long d = 1; d * d <= o; ++d) {
            if (o % d == 0) {
                if (!element_orders.count(d) || !element_orders.count(o / d))
                    throw Error(group_name + ": order list is not divisor-closed at " +
                                std::to_string(o));
            }
        }
    }
}

namespace {
template <class GetOrder>
FusionDiagnostics validate_fusion_impl(const FusionMap& f, const CharTableSlice& sub,
                                       GetOrder parent_order) {
    FusionDiagnostics d;
    for (const auto& [from, to] : f.map) {
        if (!sub.has_class(from)) {
            d.ok = false;
            d.problems.push_back("subgroup class " + from + " not in slice " + sub.group_name);
            continue;
        }
        long so = sub.class_info(from).order;
        std::optional<long> po = parent_order(to);
        if (!po) {
            d.ok = false;
            d.problems.push_back("parent class " + to + " unresolved");
            continue;
        }
        if (so != *po) {
            std::ostringstream os;
            os << "fusion " << from << " -> " << to << " changes element order (" << so << " vs "
               << *po << ")";
            d.ok = false;
            d.problems.push_back(os.str());
        }
    }
    return d;
}
}  // namespace

FusionDiagnostics validate_fusion(const FusionMap& f, const CharTableSlice& sub,
                                  const CharTableSlice& parent) {
    return validate_fusion_impl(f, sub, [&](const std::string& cls) -> std::optional<long> {
        if (!parent.has_class(cls)) return std::nullopt;
        return parent.class_info(cls).order;
    });
}

FusionDiagnostics validate_fusion(const FusionMap& f, const CharTableSlice& sub,
                                  const OrderList& parent) {
    // An order list cannot resolve class names; it can still certify that the
    // mapped element order occurs in the parent group.  ATLAS labels start
    // with the element order, which pins the order of the named parent class.
    return validate_fusion_impl(f, sub, [&](const std::string& cls) -> std::optional<long> {
        std::size_t i = 0;
        while (i < cls.size() && cls[i] >= '0' && cls[i] <= '9') ++i;
        if (i == 0) return std::nullopt;
        long o = std::stol(cls.substr(0, i));
        if (!parent.element_orders.count(o)) return std::nullopt;
        return o;
    });
}

Rat fixed_point_count(const CharTableSlice& slice, int char_id, const std::string& class_name) {
    const ClassInfo& cls = slice.class_info(class_name);
    const long o = cls.order;
    if (slice.characteristic > 0 && std::gcd(o, slice.characteristic) != 1)
        throw Error(slice.group_name + ": order of " + class_name +
                    " is not coprime to the characteristic");
    // class of g^e for every exponent e mod o, by closing the power maps
    // multiplicatively starting from g^1
    std::string identity;
    for (const auto& c : slice.classes)
        if (c.order == 1) identity = c.name;
    std::map<long, std::string> at;  // exponent -> class name
    at[1 % o] = (o == 1) ? identity : class_name;
    if (o > 1) at[0] = identity;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [r, pm] : slice.power_maps) {
            for (const auto& [e, cname] : std::map<long, std::string>(at)) {
                long e2 = (e * r) % o;
                auto it = pm.find(cname);
                if (it == pm.end()) continue;
                if (!at.count(e2)) {
                    at[e2] = it->second;
                    grew = true;
                }
            }
        }
    }
    for (long e = 0; e < o; ++e) {
        if (!at.count(e))
            throw Error(slice.group_name + ": power maps cannot resolve the class of g^" +
                        std::to_string(e) + " for g in " + class_name);
    }
    CycValue total;
    for (long e = 0; e < o; ++e) total += slice.value(char_id, at[e]);
    if (!total.is_rational())
        throw Error(slice.group_name + ": character sum over <g> is irrational (bad fixture)");
    Rat count = total.as_rational() / Rat(o);
    if (count < 0)
        throw Error(slice.group_name + ": negative fixed-point count (bad fixture)");
    return count;
}

std::vector<int> fpf_filter(const CharTableSlice& slice, long order) {
    std::vector<std::string> targets;
    for (const auto& c : slice.classes)
        if (c.order == order) targets.push_back(c.name);
    if (targets.empty())
        throw Error(slice.group_name + ": no class of order " + std::to_string(order));
    std::vector<int> ids;
    for (const auto& ch : slice.characters) {
        bool fpf = true;
        for (const auto& cls : targets) {
            if (fixed_point_count(slice, ch.id, cls) != 0) {
                fpf = false;
                break;
            }
        }
        if (fpf) ids.push_back(ch.id);
    }
    return ids;
}

}  // namespace gkcert
