#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace intermap {

struct ReportRow {
    std::string experiment;
    std::string metric;
    std::string params;
    double value = 0;
    double tolerance = 0; // pre-registered half-width / bound
    double reference = 0; // NaN when no reference is defined
    bool pass = false;
};

std::uint64_t fnv1a_hash(const std::string& s);

bool all_pass(const std::vector<ReportRow>& rows);

/// Writes <dir>/<name>.csv (fixed column order) and <dir>/<name>.json;
/// both carry the config hash and seed.
void emit_report(const std::vector<ReportRow>& rows, const std::string& dir,
                 const std::string& name, const std::string& config_text,
                 std::uint64_t seed);

} // namespace intermap
