#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gkcert/cyclotomic.hpp"

namespace gkcert {

struct ClassInfo {
    std::string name;  // ATLAS-style label, e.g. "31A"
    long order = 1;
};

// One irreducible (Brauer) character restricted to the classes the fixture
// carries.  Value maps may be partial; operations that need a missing value
// say so.
struct Character {
    int id = 0;
    Rat degree;
    std::map<std::string, CycValue> values;
};

// A partial ordinary or p-modular character table: the fixture layer feeding
// every case.
class CharTableSlice {
public:
    std::string group_name;
    long characteristic = 0;  // 0 or the prime p
    std::vector<ClassInfo> classes;
    // prime r -> (class -> class of r-th powers); may be partial
    std::map<long, std::map<std::string, std::string>> power_maps;
    std::vector<Character> characters;
    std::string provenance;

    const ClassInfo& class_info(const std::string& name) const;
    bool has_class(const std::string& name) const;
    const Character& character(int id) const;
    const CycValue& value(int char_id, const std::string& class_name) const;

    // checks every slice invariant, throwing with coordinates on failure
    void validate() const;
};

struct FusionMap {
    std::string sub;
    std::string parent;
    std::map<std::string, std::string> map;  // subgroup class -> parent class
};

struct OrderList {
    std::string group_name;
    std::set<long> element_orders;

    void validate() const;  // divisor closure
};

struct FusionDiagnostics {
    bool ok = true;
    std::vector<std::string> problems;
};

// Order preservation of every mapped class, against a parent slice or a bare
// order list.
FusionDiagnostics validate_fusion(const FusionMap& f, const CharTableSlice& sub,
                                  const CharTableSlice& parent);
FusionDiagnostics validate_fusion(const FusionMap& f, const CharTableSlice& sub,
                                  const OrderList& parent);

// Dimension of the fixed space of <g> on the module with Brauer character
// chi: (1/o) * sum_{j=0}^{o-1} chi(g^j), locating the class of g^j through
// the power maps.
Rat fixed_point_count(const CharTableSlice& slice, int char_id, const std::string& class_name);

// Ids of characters whose fixed_point_count vanishes on every class of the
// given element order.
std::vector<int> fpf_filter(const CharTableSlice& slice, long order);

}  // namespace gkcert
