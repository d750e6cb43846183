#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pass/region.hpp"

namespace pass::harness {

/// Shortest round-trip decimal form of v.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Frontier vertices as CSV with header R1,R2, from the R2 intercept to the R1 intercept.
inline std::string region_csv(const RateRegion& r) {
    std::string out = "R1,R2\n";
    for (const auto& p : r.frontier()) {
        out += format_number(p.r1);
        out += ',';
        out += format_number(p.r2);
        out += '\n';
    }
    return out;
}

inline nlohmann::json region_json(const RateRegion& r, const std::string& tag) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& p : r.vertices()) v.push_back({p.r1, p.r2});
    return {{"tag", tag}, {"vertices", v}};
}

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

} // namespace pass::harness
