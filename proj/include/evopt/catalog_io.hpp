#pragma once

// Loaders for the line-oriented key-value catalog files and the measurement
// CSVs, plus the deterministic formatting helpers the report writers use.
// All physical keys carry unit suffixes (_V, _A, _W, _cm2, ...) so a value
// in the wrong unit is a parse error, not a silent factor.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "evopt/cable.hpp"
#include "evopt/device_loss.hpp"
#include "evopt/errors.hpp"
#include "evopt/mission.hpp"
#include "evopt/optimizer.hpp"
#include "evopt/thermal.hpp"

namespace evopt {

namespace io {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct KvPair {
    std::string key;
    std::string value;
    int line = 0;
};

struct KvBlock {
    std::string name;
    int line = 0;
    std::vector<KvPair> pairs;

    [[nodiscard]] const KvPair* find(const std::string& key) const {
        for (const auto& p : pairs)
            if (p.key == key) return &p;
        return nullptr;
    }
};

/// A parsed key-value file: header pairs before the first block, then one
/// record per [block] header.
struct KvFile {
    std::string path;
    std::vector<KvPair> header;
    std::vector<KvBlock> blocks;
};

inline KvFile parse_kv_text(std::istream& in, const std::string& path) {
    KvFile file;
    file.path = path;
    std::string raw;
    int line_no = 0;
    KvBlock* current = nullptr;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(path, line_no, "malformed block header '" + line + "'");
            file.blocks.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            current = &file.blocks.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, line_no, "expected 'key = value', got '" + line + "'");
        KvPair pair{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (pair.key.empty()) throw ParseError(path, line_no, "empty key");
        if (current)
            current->pairs.push_back(std::move(pair));
        else
            file.header.push_back(std::move(pair));
    }
    return file;
}

inline KvFile parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return parse_kv_text(in, path);
}

inline double parse_number(const KvFile& file, const KvPair& pair) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(pair.value.c_str(), &end);
    if (end == pair.value.c_str() || *end != '\0' || errno == ERANGE)
        throw ParseError(file.path, pair.line,
                         "key '" + pair.key + "': not a number: '" + pair.value + "'");
    return value;
}

/// Pulls typed values out of one block and rejects unknown keys with their
/// line numbers.
class BlockReader {
public:
    BlockReader(const KvFile& file, const KvBlock& block) : file_(file), block_(block) {}

    double number(const std::string& key) {
        const KvPair* pair = require(key);
        return parse_number(file_, *pair);
    }

    double number_or(const std::string& key, double fallback) {
        const KvPair* pair = block_.find(key);
        if (!pair) {
            known_.push_back(key);
            return fallback;
        }
        known_.push_back(key);
        return parse_number(file_, *pair);
    }

    std::string text(const std::string& key) { return require(key)->value; }

    /// Call after reading all expected keys.
    void reject_unknown() const {
        for (const auto& p : block_.pairs) {
            bool ok = false;
            for (const auto& k : known_)
                if (k == p.key) ok = true;
            if (!ok)
                throw ParseError(file_.path, p.line,
                                 "unknown key '" + p.key + "' in [" + block_.name + "]");
        }
    }

private:
    const KvPair* require(const std::string& key) {
        const KvPair* pair = block_.find(key);
        if (!pair)
            throw ParseError(file_.path, block_.line,
                             "missing key '" + key + "' in [" + block_.name + "]");
        known_.push_back(key);
        return pair;
    }

    const KvFile& file_;
    const KvBlock& block_;
    std::vector<std::string> known_;
};

/// Deterministic shortest-roundtrip-ish formatting for report CSVs.
inline std::string format_g(double value, int precision = 10) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    return buf;
}

}  // namespace io

inline DeviceCatalog load_device_catalog(const std::string& path) {
    const io::KvFile file = io::parse_kv_file(path);
    for (const auto& p : file.header)
        throw ParseError(path, p.line, "unknown key '" + p.key + "' outside a [device] block");
    DeviceCatalog catalog;
    for (const auto& block : file.blocks) {
        if (block.name != "device")
            throw ParseError(path, block.line, "expected [device], got [" + block.name + "]");
        io::BlockReader r(file, block);
        SicDevice d;
        d.part_id = r.text("part_id");
        d.v_dss_V = r.number("v_dss_V");
        d.i_d_A = r.number("i_d_A");
        d.r_ds_on_Ohm = r.number("r_ds_on_mOhm") * 1e-3;
        d.e_on_off_J = r.number("e_on_off_uJ") * 1e-6;
        d.v_ref_V = r.number("v_ref_V");
        d.k_v = r.number_or("k_v", kDefaultKv);
        r.reject_unknown();
        catalog.devices.push_back(std::move(d));
    }
    catalog.validate();
    return catalog;
}

inline CableCatalog load_cable_catalog(const std::string& path) {
    const io::KvFile file = io::parse_kv_file(path);
    CableCatalog catalog;
    for (const auto& p : file.header) {
        if (p.key == "derating_factor")
            catalog.derating_factor = io::parse_number(file, p);
        else
            throw ParseError(path, p.line, "unknown header key '" + p.key + "'");
    }
    for (const auto& block : file.blocks) {
        if (block.name != "cable")
            throw ParseError(path, block.line, "expected [cable], got [" + block.name + "]");
        io::BlockReader r(file, block);
        CableEntry e;
        e.a_cu_cm2 = r.number("a_cu_cm2");
        e.ampacity_A = r.number("ampacity_A");
        r.reject_unknown();
        catalog.entries.push_back(e);
    }
    catalog.validate();
    return catalog;
}

inline void save_cable_catalog(const std::string& path, const CableCatalog& catalog) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "derating_factor = " << io::format_g(catalog.derating_factor, 17) << "\n";
    for (const auto& e : catalog.entries) {
        out << "\n[cable]\n";
        out << "a_cu_cm2 = " << io::format_g(e.a_cu_cm2, 17) << "\n";
        out << "ampacity_A = " << io::format_g(e.ampacity_A, 17) << "\n";
    }
}

inline MotorSpec load_motor(const std::string& path) {
    const io::KvFile file = io::parse_kv_file(path);
    for (const auto& p : file.header)
        throw ParseError(path, p.line, "unknown key '" + p.key + "' outside a [motor] block");
    if (file.blocks.size() != 1 || file.blocks.front().name != "motor")
        throw ConfigError(path + ": expected exactly one [motor] block");
    io::BlockReader r(file, file.blocks.front());
    MotorSpec m;
    m.p_mech_W = r.number("p_mech_W");
    m.omega_m_rad_s = r.number("omega_m_rad_s");
    m.k_t_Nm_A = r.number("k_t_Nm_per_A");
    m.eta_motor = r.number("eta_motor");
    m.i_m_A = r.number("i_m_A");
    m.cos_phi = r.number_or("cos_phi", 0.95);
    m.pole_pairs = static_cast<int>(r.number_or("pole_pairs", 1));
    r.reject_unknown();
    m.validate();
    return m;
}

struct MissionLoadResult {
    MissionProfile profile;
    std::vector<std::string> warnings;
};

inline MissionLoadResult load_mission(const std::string& path) {
    const io::KvFile file = io::parse_kv_file(path);
    for (const auto& p : file.header)
        throw ParseError(path, p.line, "unknown key '" + p.key + "' outside a [segment] block");
    MissionLoadResult result;
    for (const auto& block : file.blocks) {
        if (block.name != "segment")
            throw ParseError(path, block.line, "expected [segment], got [" + block.name + "]");
        io::BlockReader r(file, block);
        MissionSegment seg;
        const std::string phase = r.text("phase");
        const auto parsed = parse_flight_phase(phase);
        if (!parsed)
            throw ParseError(path, block.line, "unknown phase '" + phase + "'");
        seg.phase = *parsed;
        seg.duration_s = r.number("duration_s");
        seg.torque_Nm = r.number("torque_Nm");
        seg.speed_rad_s = r.number("speed_rad_s");
        r.reject_unknown();
        result.profile.segments.push_back(seg);
    }
    result.warnings = result.profile.validate();
    return result;
}

inline ReconfigurablePack load_pack(const std::string& path) {
    const io::KvFile file = io::parse_kv_file(path);
    for (const auto& p : file.header)
        throw ParseError(path, p.line, "unknown key '" + p.key + "' outside a [pack] block");
    if (file.blocks.size() != 1 || file.blocks.front().name != "pack")
        throw ConfigError(path + ": expected exactly one [pack] block");
    io::BlockReader r(file, file.blocks.front());
    ReconfigurablePack pack;
    pack.n_cells_total = static_cast<int>(r.number("n_cells_total"));
    pack.cell_capacity_Ah = r.number("cell_capacity_Ah");
    pack.ocv_full_V = r.number("ocv_full_V");
    pack.ocv_empty_V = r.number("ocv_empty_V");
    pack.r_cell_Ohm = r.number("r_cell_Ohm");
    pack.soc = r.number_or("soc", 1.0);
    pack.cells_per_module = static_cast<int>(r.number_or("cells_per_module", 1));
    r.reject_unknown();
    pack.validate();
    return pack;
}

namespace io {

/// Minimal CSV reader: first row is the header, fields map by column name.
struct CsvTable {
    std::string path;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw ConfigError(path + ": missing column '" + name + "'");
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    CsvTable table;
    table.path = path;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(trimmed);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (table.columns.empty()) {
            table.columns = fields;
            continue;
        }
        if (fields.size() != table.columns.size())
            throw ParseError(path, line_no, "expected " + std::to_string(table.columns.size()) +
                                                " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0' || errno == ERANGE)
                throw ParseError(path, line_no, "not a number: '" + f + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw ConfigError(path + ": empty CSV");
    return table;
}

}  // namespace io

/// Measurement CSV columns: v_dc_V, m, t_case_C, t_amb_C, f_sw_Hz, i_m_A, cos_phi.
inline std::vector<ThermalMeasurement> load_thermal_measurements(const std::string& path) {
    const io::CsvTable t = io::read_csv(path);
    const auto c_v = t.column("v_dc_V");
    const auto c_m = t.column("m");
    const auto c_tc = t.column("t_case_C");
    const auto c_ta = t.column("t_amb_C");
    const auto c_f = t.column("f_sw_Hz");
    const auto c_i = t.column("i_m_A");
    const auto c_p = t.column("cos_phi");
    std::vector<ThermalMeasurement> out;
    for (const auto& row : t.rows) {
        ThermalMeasurement m;
        m.v_dc_V = row[c_v];
        m.m = row[c_m];
        m.t_case_C = row[c_tc];
        m.t_amb_C = row[c_ta];
        m.f_sw_Hz = row[c_f];
        m.i_m_A = row[c_i];
        m.cos_phi = row[c_p];
        m.validate();
        out.push_back(m);
    }
    return out;
}

/// Calibration CSV columns: i_a_A, i_b_A, i_c_A, t_case_C, t_amb_C. The
/// shared r_ds_on and r_jc come from flags or defaults.
inline std::vector<ConductionCalibrationTest> load_calibration_tests(const std::string& path,
                                                                     double r_ds_on_Ohm,
                                                                     double r_jc_C_per_W) {
    const io::CsvTable t = io::read_csv(path);
    const auto c_a = t.column("i_a_A");
    const auto c_b = t.column("i_b_A");
    const auto c_c = t.column("i_c_A");
    const auto c_tc = t.column("t_case_C");
    const auto c_ta = t.column("t_amb_C");
    std::vector<ConductionCalibrationTest> out;
    for (const auto& row : t.rows) {
        ConductionCalibrationTest test;
        test.i_a_rms_A = row[c_a];
        test.i_b_rms_A = row[c_b];
        test.i_c_rms_A = row[c_c];
        test.t_case_C = row[c_tc];
        test.t_amb_C = row[c_ta];
        test.r_ds_on_Ohm = r_ds_on_Ohm;
        test.r_jc_C_per_W = r_jc_C_per_W;
        test.validate();
        out.push_back(test);
    }
    return out;
}

/// Directory holding the shipped catalog and fixture files: the
/// EVTOL_OPT_CATALOG_DIR environment variable when set, otherwise the
/// build-time default.
inline std::string default_data_dir() {
    if (const char* env = std::getenv("EVTOL_OPT_CATALOG_DIR"); env && *env) return env;
#ifdef EVOPT_DEFAULT_DATA_DIR
    return EVOPT_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

}  // namespace evopt
