#include "tfc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tfc/errors.hpp"

namespace tfc {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

struct Location
{
    std::string_view source;
    int line;
};

[[noreturn]] void fail(const Location& at, const std::string& what)
{
    std::ostringstream os;
    os << at.source << ":" << at.line << ": " << what;
    throw ConfigError(os.str());
}

double parse_double(std::string_view v, const Location& at, std::string_view key)
{
    double x = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || end != v.data() + v.size())
        fail(at, "value for '" + std::string(key) + "' is not a number: '" + std::string(v) + "'");
    return x;
}

int parse_int(std::string_view v, const Location& at, std::string_view key)
{
    int x = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || end != v.data() + v.size())
        fail(at, "value for '" + std::string(key) + "' is not an integer: '" + std::string(v) + "'");
    return x;
}

bool parse_bool(std::string_view v, const Location& at, std::string_view key)
{
    const std::string s = lower(v);
    if (s == "on" || s == "true" || s == "yes" || s == "1")
        return true;
    if (s == "off" || s == "false" || s == "no" || s == "0")
        return false;
    fail(at, "value for '" + std::string(key) + "' must be on/off: '" + std::string(v) + "'");
}

PrincipalAxis parse_axis(std::string_view v, const Location& at)
{
    const std::string s = lower(v);
    if (s == "a")
        return PrincipalAxis::a;
    if (s == "b")
        return PrincipalAxis::b;
    if (s == "c")
        return PrincipalAxis::c;
    fail(at, "mirror_axis must be a, b or c");
}

char axis_char(PrincipalAxis a)
{
    switch (a) {
    case PrincipalAxis::a: return 'a';
    case PrincipalAxis::b: return 'b';
    case PrincipalAxis::c: return 'c';
    }
    return '?';
}

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> s{
        {"molecule", {"mu_a", "mu_b", "mu_c", "eps21", "eps31", "mirror_axis"}},
        {"drive", {"E21", "E32", "E31", "m", "delta", "omega1", "omega2", "omega_r"}},
        {"simulation", {"dt", "tstar_periods", "grid", "stride", "ramp", "enantiomer"}},
    };
    return s;
}

const std::set<std::string>& optional_keys()
{
    static const std::set<std::string> s{"molecule.mirror_axis",     "simulation.dt",     "simulation.tstar_periods",
                                         "simulation.grid",          "simulation.stride", "simulation.ramp",
                                         "simulation.enantiomer"};
    return s;
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::vector<Enantiomer> parse_enantiomer_selection(std::string_view text)
{
    const std::string s = lower(trim(text));
    if (s == "both")
        return {Enantiomer::R, Enantiomer::S};
    return {parse_enantiomer(s)};
}

std::string enantiomer_selection(const std::vector<Enantiomer>& list)
{
    if (list.size() == 2 && list[0] != list[1])
        return "both";
    if (list.size() == 1)
        return std::string(1, to_char(list[0]));
    throw InvalidParameters("enantiomer selection must be R, S or both");
}

SimConfig parse_config(std::string_view text, std::string_view source)
{
    SimConfig cfg;
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const Location at{source, line_no};

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail(at, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(section))
                fail(at, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(at, "expected 'key = value'");
        if (section.empty())
            fail(at, "entry outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty())
            fail(at, "missing value for '" + key + "'");
        if (!schema().at(section).contains(key))
            fail(at, "unknown key '" + key + "' in [" + section + "]");
        const std::string full = section + "." + key;
        if (!seen.insert(full).second)
            fail(at, "duplicate key '" + key + "' in [" + section + "]");

        auto d = [&] { return parse_double(value, at, key); };
        if (section == "molecule") {
            if (key == "mu_a") cfg.molecule.mu_a = d();
            else if (key == "mu_b") cfg.molecule.mu_b = d();
            else if (key == "mu_c") cfg.molecule.mu_c = d();
            else if (key == "eps21") cfg.molecule.eps21 = d();
            else if (key == "eps31") cfg.molecule.eps31 = d();
            else if (key == "mirror_axis") cfg.molecule.mirror_axis = parse_axis(value, at);
        } else if (section == "drive") {
            if (key == "E21") cfg.drive.E21 = d();
            else if (key == "E32") cfg.drive.E32 = d();
            else if (key == "E31") cfg.drive.E31 = d();
            else if (key == "m") cfg.drive.m = d();
            else if (key == "delta") cfg.drive.delta = d();
            else if (key == "omega1") cfg.drive.omega1 = d();
            else if (key == "omega2") cfg.drive.omega2 = d();
            else if (key == "omega_r") cfg.drive.omega_r = d();
        } else {
            if (key == "dt") cfg.dt = d();
            else if (key == "tstar_periods") cfg.tstar_periods = d();
            else if (key == "grid") cfg.grid = parse_int(value, at, key);
            else if (key == "stride") cfg.stride = parse_int(value, at, key);
            else if (key == "ramp") cfg.ramp = parse_bool(value, at, key);
            else if (key == "enantiomer") {
                try {
                    cfg.enantiomers = parse_enantiomer_selection(value);
                } catch (const InvalidParameters& ex) {
                    fail(at, ex.what());
                }
            }
        }
    }

    std::vector<std::string> missing;
    for (const auto& [sec, keys] : schema())
        for (const auto& k : keys) {
            const std::string full = sec + "." + k;
            if (!seen.contains(full) && !optional_keys().contains(full))
                missing.push_back(full);
        }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing)
            list += (list.empty() ? "" : ", ") + m;
        throw ConfigError(std::string(source) + ": missing required keys: " + list);
    }
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

std::string format_config(const SimConfig& cfg)
{
    std::ostringstream os;
    const MolecularParams& m = cfg.molecule;
    const DriveParams& d = cfg.drive;
    os << "[molecule]\n"
       << "mu_a = " << num(m.mu_a) << "\n"
       << "mu_b = " << num(m.mu_b) << "\n"
       << "mu_c = " << num(m.mu_c) << "\n"
       << "eps21 = " << num(m.eps21) << "\n"
       << "eps31 = " << num(m.eps31) << "\n"
       << "mirror_axis = " << axis_char(m.mirror_axis) << "\n\n"
       << "[drive]\n"
       << "E21 = " << num(d.E21) << "\n"
       << "E32 = " << num(d.E32) << "\n"
       << "E31 = " << num(d.E31) << "\n"
       << "m = " << num(d.m) << "\n"
       << "delta = " << num(d.delta) << "\n"
       << "omega1 = " << num(d.omega1) << "\n"
       << "omega2 = " << num(d.omega2) << "\n"
       << "omega_r = " << num(d.omega_r) << "\n\n"
       << "[simulation]\n"
       << "dt = " << num(cfg.dt) << "\n"
       << "tstar_periods = " << num(cfg.tstar_periods) << "\n"
       << "grid = " << cfg.grid << "\n"
       << "stride = " << cfg.stride << "\n"
       << "ramp = " << (cfg.ramp ? "on" : "off") << "\n"
       << "enantiomer = " << enantiomer_selection(cfg.enantiomers) << "\n";
    return os.str();
}

} // namespace tfc
