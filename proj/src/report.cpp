#include "intermap/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace intermap {

std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool all_pass(const std::vector<ReportRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

namespace {

std::string hex64(std::uint64_t x) {
    std::ostringstream s;
    s << std::hex << std::setfill('0') << std::setw(16) << x;
    return s.str();
}

std::string num(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

} // namespace

void emit_report(const std::vector<ReportRow>& rows, const std::string& dir,
                 const std::string& name, const std::string& config_text,
                 std::uint64_t seed) {
    if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
    std::filesystem::create_directories(dir);
    const std::string hash = hex64(fnv1a_hash(config_text));

    const auto csv_path = (std::filesystem::path(dir) / (name + ".csv")).string();
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("emit_report: cannot open " + csv_path);
    csv << "experiment,metric,params,value,tolerance,reference,pass,seed,config_hash\n";
    for (const auto& r : rows)
        csv << r.experiment << "," << r.metric << "," << r.params << "," << num(r.value)
            << "," << num(r.tolerance) << "," << num(r.reference) << ","
            << (r.pass ? "true" : "false") << "," << seed << "," << hash << "\n";
    if (!csv) throw std::runtime_error("emit_report: write failed on " + csv_path);

    nlohmann::json j;
    j["config_hash"] = hash;
    j["seed"] = seed;
    j["all_pass"] = all_pass(rows);
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row;
        row["experiment"] = r.experiment;
        row["metric"] = r.metric;
        row["params"] = r.params;
        row["value"] = r.value;
        row["tolerance"] = r.tolerance;
        row["reference"] = r.reference;
        row["pass"] = r.pass;
        j["rows"].push_back(row);
    }
    const auto json_path = (std::filesystem::path(dir) / (name + ".json")).string();
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("emit_report: cannot open " + json_path);
    js << j.dump(2) << "\n";
    if (!js) throw std::runtime_error("emit_report: write failed on " + json_path);
}

} // namespace intermap
