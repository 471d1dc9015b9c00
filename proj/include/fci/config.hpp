#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fci/model.hpp"

namespace fci {

/// Floats in CSV output carry 12 significant digits.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void raw(const std::string& line);

private:
    struct Impl;
    Impl* impl_;
};

/// Two-column CSV reader (header line optional) for the fit pipelines.
std::vector<std::pair<double, double>> read_xy_csv(const std::string& path);
/// Three-column variant: L_y, chi, S.
std::vector<std::array<double, 3>> read_xyz_csv(const std::string& path);

/// Flat key/value text with [section] headers, '#' comments, key = value
/// lines.  Consumers mark keys as they read them; unread keys are rejected.
class ConfigFile {
public:
    static ConfigFile parse(std::istream& in);
    static ConfigFile parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    double number(const std::string& section, const std::string& key, double fallback) const;
    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
    /// Every key that was never read; empty when the config is fully consumed.
    std::vector<std::string> unread_keys() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    mutable std::set<std::string> read_;
};

/// Table-I defaults with overrides from the [model] section (keys: delta,
/// cutoff, ta_nn/ta_nnn/ta_nnnn, tb_*, omega_*, v_XY_* with X,Y in {0,a,b}).
CouplingSet couplings_from_config(const ConfigFile& cfg);

/// [effective] section: tb, zeta, lambda.
EffectiveParams effective_from_config(const ConfigFile& cfg);

}  // namespace fci
