#pragma once
// Deterministic report serialization: keys sorted (nlohmann::json's map
// ordering), every float printed with 17 significant digits, complex values
// as {re, im} objects.

#include <znt/curve.hpp>

#include <json.hpp>

#include <cstdio>
#include <string>

namespace znt {

using json = nlohmann::json;

inline json complex_to_json(cplx z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void emit_rec(const json& j, std::string& out, int indent, int depth) {
    std::string pad(depth * indent, ' ');
    std::string pad1((depth + 1) * indent, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad1 + json(it.key()).dump() + ": ";
                emit_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad1;
                emit_rec(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += fmt17(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace detail

inline std::string emit_json(const json& j) {
    std::string out;
    detail::emit_rec(j, out, 2, 0);
    out += "\n";
    return out;
}

}  // namespace znt
