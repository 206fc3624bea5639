#include "fogmatch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fogmatch/errors.hpp"

namespace fogmatch {

void RunManifest::set(const std::string& key, const std::string& value) {
    for (auto& kv : config)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    config.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) { set(key, format_double(value)); }

void RunManifest::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

std::string RunManifest::header_comment() const {
    std::ostringstream os;
    os << "# fogmatch " << kToolVersion << '\n';
    os << "# experiment=" << experiment << '\n';
    os << "# seed=" << seed << '\n';
    for (const auto& [k, v] : config) os << "# " << k << '=' << v << '\n';
    return os.str();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_document(const RunManifest& manifest, const std::vector<CsvRow>& rows) {
    std::ostringstream os;
    os << manifest.header_comment();
    os << "gamma_db,user,source,value,ci_lo,ci_hi,trials\n";
    for (const auto& r : rows) {
        os << format_double(r.gamma_db) << ',' << (r.user + 1) << ',' << r.source << ','
           << format_double(r.value) << ',' << format_double(r.ci_lo) << ','
           << format_double(r.ci_hi) << ',' << r.trials << '\n';
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + path);
    out << content;
    if (!out) throw DomainError("failed writing output file: " + path);
}

} // namespace fogmatch
