#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fogmatch {

inline constexpr const char* kToolVersion = "0.1.0";

// Deterministic experiment snapshot written as '#'-prefixed comment lines at
// the top of every CSV. Wall-clock and paths are runtime metadata and go to
// the log, never into the file, so a rerun is byte-identical.
struct RunManifest {
    std::string experiment;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config; // insertion order kept

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    std::string header_comment() const;
};

struct CsvRow {
    double gamma_db = 0;
    int user = 0;
    std::string source; // mc | analytic_high | analytic_low | dmr_asymptote | exponent_*
    double value = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    long long trials = 0;
};

// Schema: gamma_db,user,source,value,ci_lo,ci_hi,trials (user is 1-based).
std::string csv_document(const RunManifest& manifest, const std::vector<CsvRow>& rows);
void write_file(const std::string& path, const std::string& content);

std::string format_double(double v);

} // namespace fogmatch
