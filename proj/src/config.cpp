#include "sldg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "sldg/error.hpp"

namespace sldg {

namespace {

const std::map<std::string, std::string>& key_sections() {
    static const std::map<std::string, std::string> keys = {
        {"scenario", "scenario"},   {"initial", "scenario"},      {"alpha", "scenario"},
        {"wavenumber", "scenario"}, {"perturbation", "scenario"}, {"velocity_x", "scenario"},
        {"velocity_y", "scenario"}, {"limiter", "scenario"},      {"nx", "mesh"},
        {"ny", "mesh"},             {"k", "mesh"},                {"mode", "mesh"},
        {"x_min", "mesh"},          {"x_max", "mesh"},            {"y_min", "mesh"},
        {"y_max", "mesh"},          {"tableau", "time"},          {"cfl", "time"},
        {"cfl_min", "time"},        {"cfl_max", "time"},          {"T", "time"},
        {"adaptive", "time"},       {"delta_max", "time"},        {"delta_min", "time"},
        {"max_restarts", "time"},   {"trace_substeps", "time"},   {"dir", "output"},
        {"dump_every", "output"},   {"seed", "output"},           {"meshes", "convergence"},
        {"cfls", "convergence"},    {"reference", "convergence"}, {"reference_cfl", "convergence"},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;  // 0 for command-line overrides
};

std::string where(const Entry& e) { return e.line > 0 ? " (line " + std::to_string(e.line) + ")" : " (override)"; }

double to_double(const std::string& key, const Entry& e) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ValidationError(key, "'" + e.value + "' is not a number" + where(e));
    return v;
}

long to_long(const std::string& key, const Entry& e) {
    long v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ValidationError(key, "'" + e.value + "' is not an integer" + where(e));
    return v;
}

int to_int(const std::string& key, const Entry& e) {
    const long v = to_long(key, e);
    if (v < -1000000000L || v > 1000000000L) throw ValidationError(key, "out of range" + where(e));
    return static_cast<int>(v);
}

bool to_bool(const std::string& key, const Entry& e) {
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ValidationError(key, "'" + e.value + "' is not a boolean" + where(e));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

using Entries = std::map<std::string, Entry>;

Entries parse_entries(const std::string& text) {
    Entries entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "mesh" && section != "time" && section != "output" &&
                section != "convergence")
                throw ParseError("unknown section [" + section + "]", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", line_no);
        if (section.empty()) throw ParseError("key '" + key + "' outside any section", line_no);
        const auto it = key_sections().find(key);
        if (it == key_sections().end()) throw ParseError("unknown key '" + key + "'", line_no);
        if (it->second != section)
            throw ParseError("key '" + key + "' belongs to [" + it->second + "], not [" + section + "]", line_no);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
        if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        entries[key] = {value, line_no};
    }
    return entries;
}

void apply_override(Entries& entries, const std::string& ov) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ValidationError(ov, "override must be key=value");
    std::string key = trim(ov.substr(0, eq));
    const std::string value = trim(ov.substr(eq + 1));
    std::string section;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
        section = key.substr(0, dot);
        key = key.substr(dot + 1);
    }
    const auto it = key_sections().find(key);
    if (it == key_sections().end()) throw ValidationError(key, "unknown key");
    if (!section.empty() && section != it->second)
        throw ValidationError(key, "belongs to [" + it->second + "], not [" + section + "]");
    if (value.empty()) throw ValidationError(key, "empty override value");
    entries[key] = {value, 0};
}

Scenario parse_scenario(const Entry& e) {
    const std::string& v = e.value;
    if (v == "vp" || v == "vlasov_poisson") return Scenario::VlasovPoisson;
    if (v == "gc" || v == "guiding_center") return Scenario::GuidingCenter;
    if (v == "burgers") return Scenario::Burgers;
    if (v == "advection" || v == "linear_advection") return Scenario::LinearAdvection;
    throw ValidationError("scenario", "unknown scenario '" + v + "'" + where(e));
}

std::pair<int, int> parse_mesh_size(const std::string& item, const Entry& e) {
    const auto x = item.find('x');
    Entry a{item.substr(0, x), e.line};
    Entry b{x == std::string::npos ? item : item.substr(x + 1), e.line};
    return {to_int("meshes", a), to_int("meshes", b)};
}

RunManifest build(const Entries& entries) {
    auto get = [&](const std::string& key) -> const Entry* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    for (const char* req : {"scenario", "nx", "k", "tableau", "cfl", "T"}) {
        if (!get(req)) throw ValidationError(req, "required key is missing");
    }
    RunManifest m;
    const Scenario sc = parse_scenario(*get("scenario"));
    ScenarioConfig& c = m.config;
    c = default_config(sc);
    if (!get("ny") && sc != Scenario::Burgers) throw ValidationError("ny", "required key is missing");

    for (const auto& [key, e] : entries) {
        if (key == "scenario") continue;
        if (key == "initial") c.initial = e.value;
        else if (key == "alpha") c.alpha = to_double(key, e);
        else if (key == "wavenumber") c.wavenumber = to_double(key, e);
        else if (key == "perturbation") c.perturbation = to_double(key, e);
        else if (key == "velocity_x") c.velocity_x = to_double(key, e);
        else if (key == "velocity_y") c.velocity_y = to_double(key, e);
        else if (key == "limiter") c.limiter = to_bool(key, e);
        else if (key == "nx") c.nx = to_int(key, e);
        else if (key == "ny") c.ny = to_int(key, e);
        else if (key == "k") c.degree = to_int(key, e);
        else if (key == "mode") {
            if (e.value == "quad") c.mode = UpstreamMode::Quad;
            else if (e.value == "qc" || e.value == "quad_curved") c.mode = UpstreamMode::QuadCurved;
            else throw ValidationError(key, "expected quad or qc, got '" + e.value + "'" + where(e));
        }
        else if (key == "x_min") c.x_min = to_double(key, e);
        else if (key == "x_max") c.x_max = to_double(key, e);
        else if (key == "y_min") c.y_min = to_double(key, e);
        else if (key == "y_max") c.y_max = to_double(key, e);
        else if (key == "tableau") c.tableau = e.value;
        else if (key == "cfl") c.cfl = to_double(key, e);
        else if (key == "cfl_min") c.cfl_min = to_double(key, e);
        else if (key == "cfl_max") c.cfl_max = to_double(key, e);
        else if (key == "T") c.t_final = to_double(key, e);
        else if (key == "adaptive") c.adaptive = to_bool(key, e);
        else if (key == "delta_max") c.delta_max = to_double(key, e);
        else if (key == "delta_min") c.delta_min = to_double(key, e);
        else if (key == "max_restarts") c.max_restarts = to_int(key, e);
        else if (key == "trace_substeps") c.trace_substeps = to_int(key, e);
        else if (key == "dir") m.out_dir = e.value;
        else if (key == "dump_every") {
            m.dump_every = to_int(key, e);
            if (m.dump_every < 0) throw ValidationError(key, "must be non-negative" + where(e));
        }
        else if (key == "seed") m.seed = static_cast<unsigned long>(to_long(key, e));
        else if (key == "meshes") {
            for (const auto& item : split_list(e.value)) m.convergence.meshes.push_back(parse_mesh_size(item, e));
        }
        else if (key == "cfls") {
            for (const auto& item : split_list(e.value)) m.convergence.cfls.push_back(to_double(key, {item, e.line}));
        }
        else if (key == "reference") {
            if (e.value == "exact") m.convergence.reference = Reference::Exact;
            else if (e.value == "reverse") m.convergence.reference = Reference::Reverse;
            else if (e.value == "self") m.convergence.reference = Reference::SelfCFL;
            else throw ValidationError(key, "expected exact, reverse or self, got '" + e.value + "'" + where(e));
        }
        else if (key == "reference_cfl") m.convergence.reference_cfl = to_double(key, e);
    }
    if (sc == Scenario::Burgers && !get("ny")) c.ny = 1;
    if (!get("mode")) c.mode = c.degree == 2 ? UpstreamMode::QuadCurved : UpstreamMode::Quad;

    if (c.adaptive) {
        if (!get("cfl_max")) throw ValidationError("cfl_max", "required when adaptive = true");
        if (!get("cfl_min")) c.cfl_min = std::min(1.0, c.cfl);
    } else {
        c.cfl_min = c.cfl_max = c.cfl;
    }
    validate(c);
    return m;
}

void put(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

RunManifest parse_config(const std::string& text) { return build(parse_entries(text)); }

RunManifest parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    Entries entries = parse_entries(text);
    for (const auto& ov : overrides) apply_override(entries, ov);
    return build(entries);
}

RunManifest load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path) {
    if (records.empty()) throw Error("write_timeseries: no records for " + path.string());
    auto out = open_out(path);
    out << kTimeseriesHeader << '\n';
    for (const auto& r : records) {
        const double cols[] = {r.t,     r.mass,     r.l1,     r.l2,     r.energy,     r.secondary,    r.theta,
                               r.cfl,   r.dev_mass, r.dev_l1, r.dev_l2, r.dev_energy, r.dev_secondary};
        for (std::size_t i = 0; i < std::size(cols); ++i) {
            if (i) out << ',';
            put(out, cols[i]);
        }
        out << '\n';
    }
    if (!out) throw Error("error while writing " + path.string());
}

std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != kTimeseriesHeader) throw Error(path.string() + ": unexpected header");
    std::vector<DiagnosticsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double v[13];
        std::stringstream ss(line);
        std::string cell;
        int n = 0;
        while (n < 13 && std::getline(ss, cell, ',')) v[n++] = std::stod(cell);
        if (n != 13) throw Error(path.string() + ": short row");
        out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12]});
    }
    return out;
}

void write_convergence(const std::vector<RefinementRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "nx,ny,cfl,L1,L2,Linf,order_L1,order_L2,order_Linf\n";
    for (const auto& r : rows) {
        out << r.nx << ',' << r.ny << ',';
        const double cols[] = {r.cfl, r.errors.l1, r.errors.l2, r.errors.linf, r.order_l1, r.order_l2, r.order_linf};
        for (std::size_t i = 0; i < std::size(cols); ++i) {
            if (i) out << ',';
            put(out, cols[i]);
        }
        out << '\n';
    }
    if (!out) throw Error("error while writing " + path.string());
}

void write_dump_file(const DGField& field, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_dump(out, field);
    if (!out) throw Error("error while writing " + path.string());
}

DGField read_dump_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return read_dump(in);
}

}  // namespace sldg
