#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "network.hpp"
#include "sweeps.hpp"

namespace gctec {

struct CsvRow {
    double frequency_hz;
    std::string path;
    double gain_db;
    double phase_deg;
    std::string param_name;   // empty for plain gain runs
    double param_value = 0.0;
    bool has_param = false;
};

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

inline std::string render_csv(const std::vector<CsvRow>& rows) {
    std::string out = "frequency_hz,path,gain_db,phase_deg,param_name,param_value\n";
    for (const auto& r : rows) {
        out += csv_num(r.frequency_hz);
        out += ',';
        out += r.path;
        out += ',';
        out += csv_num(r.gain_db);
        out += ',';
        out += csv_num(r.phase_deg);
        out += ',';
        out += r.param_name;
        out += ',';
        if (r.has_param) out += csv_num(r.param_value);
        out += '\n';
    }
    return out;
}

inline std::vector<CsvRow> csv_rows(const std::vector<GainPoint>& points) {
    std::vector<CsvRow> rows;
    for (const auto& p : points)
        rows.push_back({p.frequency, p.path, p.gain_db, p.phase_deg, "", 0.0, false});
    return rows;
}

inline std::vector<CsvRow> csv_rows(const SweepResult& result) {
    std::vector<CsvRow> rows;
    const std::string pname = sweep_param_name(result.param);
    for (const auto& r : result.records)
        rows.push_back({r.point.frequency, r.point.path, r.point.gain_db, r.point.phase_deg,
                        pname, r.value, true});
    return rows;
}

inline void write_csv(const std::vector<CsvRow>& rows, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open '" + file + "' for writing");
    out << render_csv(rows);
    if (!out) throw IoError("write failed on '" + file + "'");
}

} // namespace gctec
