#include "fci/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("cli", code, msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) fail("IoError", "cannot open output file " + path);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        impl_->out << (i ? "," : "") << names[i];
    impl_->out << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << (i ? "," : "") << format_double(values[i]);
    impl_->out << "\n";
}

void CsvWriter::raw(const std::string& line) { impl_->out << line << "\n"; }

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, int ncols) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot open input file " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::stringstream ls(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(trim(cell), &used);
                vals.push_back(v);
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) continue;  // header line
        if (static_cast<int>(vals.size()) < ncols)
            fail("ParseError", "expected " + std::to_string(ncols) + " columns in " + path);
        rows.push_back(vals);
    }
    if (rows.empty()) fail("ParseError", "no data rows in " + path);
    return rows;
}

}  // namespace

std::vector<std::pair<double, double>> read_xy_csv(const std::string& path) {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : read_numeric_csv(path, 2)) out.emplace_back(r[0], r[1]);
    return out;
}

std::vector<std::array<double, 3>> read_xyz_csv(const std::string& path) {
    std::vector<std::array<double, 3>> out;
    for (const auto& r : read_numeric_csv(path, 3)) out.push_back({r[0], r[1], r[2]});
    return out;
}

ConfigFile ConfigFile::parse(std::istream& in) {
    ConfigFile cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail("ConfigParse", "bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("ConfigParse", "expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("ConfigParse", "empty key at line " + std::to_string(lineno));
        if (cfg.sections_[section].count(key))
            fail("ConfigParse", "duplicate key '" + key + "' at line " + std::to_string(lineno));
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("ConfigParse", "cannot open config file " + path);
    return parse(in);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

double ConfigFile::number(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    read_.insert(section + "." + key);
    const std::string& v = sections_.at(section).at(key);
    try {
        return std::stod(v);
    } catch (...) {
        fail("ConfigParse", "key " + section + "." + key + " is not a number: " + v);
    }
}

std::string ConfigFile::text(const std::string& section, const std::string& key,
                             const std::string& fallback) const {
    if (!has(section, key)) return fallback;
    read_.insert(section + "." + key);
    return sections_.at(section).at(key);
}

std::vector<std::string> ConfigFile::unread_keys() const {
    std::vector<std::string> out;
    for (const auto& [sec, kv] : sections_)
        for (const auto& [key, value] : kv)
            if (!read_.count(sec + "." + key)) out.push_back(sec + "." + key);
    return out;
}

CouplingSet couplings_from_config(const ConfigFile& cfg) {
    CouplingSet c = default_couplings();
    c.splitting = cfg.number("model", "delta", c.splitting);
    c.cutoff_l = cfg.number("model", "cutoff", c.cutoff_l);
    const char* cls_name[3] = {"nn", "nnn", "nnnn"};
    for (int cl = 0; cl < 3; ++cl) {
        c.hop_a[cl] = cfg.number("model", std::string("ta_") + cls_name[cl], c.hop_a[cl]);
        c.hop_b[cl] = cfg.number("model", std::string("tb_") + cls_name[cl], c.hop_b[cl]);
        c.flip_abs[cl] =
            cfg.number("model", std::string("omega_") + cls_name[cl], c.flip_abs[cl]);
    }
    const char flavor_name[3] = {'0', 'a', 'b'};
    const Flavor flavors[3] = {Flavor::vac, Flavor::plus, Flavor::minus};
    for (int x = 0; x < 3; ++x) {
        for (int y = x; y < 3; ++y) {
            for (int cl = 0; cl < 3; ++cl) {
                const std::string key = std::string("v_") + flavor_name[x] + flavor_name[y] +
                                        "_" + cls_name[cl];
                if (cfg.has("model", key))
                    c.set_density_coupling(
                        flavors[x], flavors[y], static_cast<DistanceClass>(cl),
                        cfg.number("model", key, 0.0));
            }
        }
    }
    c.validate();
    return c;
}

EffectiveParams effective_from_config(const ConfigFile& cfg) {
    EffectiveParams e;
    e.hop_b = cfg.number("effective", "tb", e.hop_b);
    e.zeta = cfg.number("effective", "zeta", e.zeta);
    e.lambda = cfg.number("effective", "lambda", e.lambda);
    return e;
}

}  // namespace fci
