#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "nldc/scan.hpp"
#include "nldc/units.hpp"

namespace nldc::scan {

std::string ConfigError::str() const
{
    std::string s;
    if (line > 0) s += "line " + std::to_string(line) + ":" + std::to_string(column) + ": ";
    if (!path.empty()) s += path + ": ";
    return s + message;
}

namespace {

std::string join_errors(const std::vector<ConfigError>& errors)
{
    std::string s;
    for (const auto& e : errors) s += e.str() + "\n";
    return s;
}

} // namespace

ConfigErrors::ConfigErrors(std::vector<ConfigError> errs) : std::runtime_error(join_errors(errs)), errors(std::move(errs))
{
}

int ScanConfig::cell_count() const
{
    int n = 1;
    for (const auto& a : scan.axes) n *= a.points;
    return n;
}

namespace {

enum class Dim { energy, angle, time, area };

const char* dim_units(Dim d)
{
    switch (d) {
    case Dim::energy: return "eV, keV, MeV, GeV, m_e";
    case Dim::angle: return "rad, mrad, urad, deg (optionally with a pi factor)";
    case Dim::time: return "s, ms, us, ns, ps, fs";
    case Dim::area: return "m_e^2";
    }
    return "";
}

// Multiplier to the internal unit: m for energy, rad, s, m^2.
std::optional<double> unit_factor(Dim d, const std::string& u)
{
    static const std::map<std::string, double> energy{
        {"eV", 1.0 / units::electron_mass_eV}, {"keV", 1e3 / units::electron_mass_eV},
        {"MeV", 1e6 / units::electron_mass_eV}, {"GeV", 1e9 / units::electron_mass_eV}, {"m_e", 1.0}};
    static const std::map<std::string, double> angle{
        {"rad", 1.0}, {"mrad", 1e-3}, {"urad", 1e-6}, {"deg", units::pi / 180}};
    static const std::map<std::string, double> time{{"s", 1.0},    {"ms", 1e-3},  {"us", 1e-6},
                                                      {"ns", 1e-9}, {"ps", 1e-12}, {"fs", 1e-15}};
    static const std::map<std::string, double> area{{"m_e^2", 1.0}};
    const auto& table = d == Dim::energy ? energy : d == Dim::angle ? angle : d == Dim::time ? time : area;
    auto it = table.find(u);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

class Parser {
public:
    std::vector<ConfigError> errors;
    std::map<std::string, YAML::Mark> marks;

    void error(const YAML::Node& node, const std::string& path, const std::string& msg)
    {
        ConfigError e;
        if (node.IsDefined() && node.Mark().line >= 0) {
            e.line = node.Mark().line + 1;
            e.column = node.Mark().column + 1;
        }
        e.path = path;
        e.message = msg;
        errors.push_back(std::move(e));
    }

    // Rejects keys outside `allowed`; returns false if node is not a map.
    bool check_map(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed)
    {
        if (!node.IsMap()) {
            error(node, path, "expected a mapping");
            return false;
        }
        for (const auto& kv : node) {
            const std::string key = kv.first.as<std::string>();
            if (!allowed.count(key)) {
                std::string list;
                for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                error(kv.first, path.empty() ? key : path + "." + key, "unknown key (allowed: " + list + ")");
            }
        }
        return true;
    }

    std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

    void remember(const YAML::Node& node, const std::string& path) { marks[path] = node.Mark(); }

    template <class T>
    void scalar(const YAML::Node& parent, const std::string& path, const std::string& key, T& out)
    {
        const YAML::Node n = parent[key];
        if (!n) return;
        const std::string p = sub(path, key);
        remember(n, p);
        if (!n.IsScalar()) return error(n, p, "expected a scalar");
        try {
            out = n.as<T>();
        } catch (const YAML::Exception&) {
            error(n, p, "cannot read '" + n.Scalar() + "'");
        }
    }

    std::optional<double> quantity(const YAML::Node& n, const std::string& p, Dim d)
    {
        remember(n, p);
        if (!n.IsScalar()) {
            error(n, p, "expected a quantity with unit");
            return std::nullopt;
        }
        std::istringstream in(n.Scalar());
        std::vector<std::string> tok;
        for (std::string t; in >> t;) tok.push_back(t);
        double value = 1;
        std::size_t i = 0;
        bool have_number = false;
        if (i < tok.size()) {
            char* end = nullptr;
            const double v = std::strtod(tok[i].c_str(), &end);
            if (end && *end == '\0' && end != tok[i].c_str()) {
                value = v;
                have_number = true;
                ++i;
            }
        }
        bool have_pi = false;
        if (i < tok.size() && tok[i] == "pi") {
            value *= units::pi;
            have_pi = true;
            ++i;
        }
        if (!have_number && !have_pi) {
            error(n, p, "cannot read quantity '" + n.Scalar() + "'");
            return std::nullopt;
        }
        if (i == tok.size()) {
            if (value == 0 && !have_pi) return 0.0;
            error(n, p, std::string("missing unit (expected one of ") + dim_units(d) + ")");
            return std::nullopt;
        }
        if (i + 1 != tok.size()) {
            error(n, p, "trailing text in quantity '" + n.Scalar() + "'");
            return std::nullopt;
        }
        const auto f = unit_factor(d, tok[i]);
        if (!f) {
            error(n, p, "unknown unit '" + tok[i] + "' (expected one of " + dim_units(d) + ")");
            return std::nullopt;
        }
        if (!std::isfinite(value)) {
            error(n, p, "value is not finite");
            return std::nullopt;
        }
        return value * *f;
    }

    void quantity(const YAML::Node& parent, const std::string& path, const std::string& key, Dim d, double& out)
    {
        const YAML::Node n = parent[key];
        if (!n) return;
        if (auto v = quantity(n, sub(path, key), d)) out = *v;
    }

    void range(const YAML::Node& parent, const std::string& path, const std::string& key, Dim d, Range& out)
    {
        const YAML::Node n = parent[key];
        if (!n) return;
        const std::string p = sub(path, key);
        remember(n, p);
        if (!n.IsSequence() || n.size() != 2) return error(n, p, "expected [lower, upper]");
        auto lo = quantity(n[0], p + "[0]", d);
        auto hi = quantity(n[1], p + "[1]", d);
        if (lo && hi) out = {*lo, *hi};
    }
};

const std::set<std::string> axis_names{"omega_b", "theta_b", "psi_b", "theta_c", "psi_c"};

Dim axis_dim(const std::string& name) { return name == "omega_b" ? Dim::energy : Dim::angle; }

double& point_field(PhaseSpacePoint& x, const std::string& name)
{
    if (name == "omega_b") return x.omega_b;
    if (name == "theta_b") return x.theta_b;
    if (name == "psi_b") return x.psi_b;
    if (name == "theta_c") return x.theta_c;
    return x.psi_c;
}

std::optional<Observable> observable_from(const std::string& s)
{
    if (s == "rate_map") return Observable::rate_map;
    if (s == "theta_c_curve") return Observable::theta_c_curve;
    if (s == "concurrence_map") return Observable::concurrence_map;
    if (s == "total_rate") return Observable::total_rate;
    return std::nullopt;
}

const char* observable_name(Observable o)
{
    switch (o) {
    case Observable::rate_map: return "rate_map";
    case Observable::theta_c_curve: return "theta_c_curve";
    case Observable::concurrence_map: return "concurrence_map";
    case Observable::total_rate: return "total_rate";
    }
    return "";
}

std::string pol_name(PolarizationSelect p)
{
    if (p.summed()) return "sum";
    return "e" + std::to_string(p.lambda_b) + "e" + std::to_string(p.lambda_c);
}

std::optional<PolarizationSelect> pol_from(const std::string& s)
{
    if (s == "sum") return PolarizationSelect::sum();
    if (s.size() == 4 && s[0] == 'e' && s[2] == 'e' && (s[1] == '1' || s[1] == '2') && (s[3] == '1' || s[3] == '2'))
        return PolarizationSelect{s[1] - '0', s[3] - '0'};
    return std::nullopt;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void finish_lines(std::vector<ConfigError>& errors, const std::map<std::string, YAML::Mark>& marks)
{
    for (auto& e : errors) {
        if (e.line > 0) continue;
        // Longest recorded prefix of the path.
        std::string p = e.path;
        while (!p.empty()) {
            auto it = marks.find(p);
            if (it != marks.end() && it->second.line >= 0) {
                e.line = it->second.line + 1;
                e.column = it->second.column + 1;
                break;
            }
            const auto cut = p.find_last_of(".[");
            if (cut == std::string::npos) break;
            p = p.substr(0, cut);
        }
    }
}

} // namespace

std::vector<ConfigError> validate(const ScanConfig& c)
{
    std::vector<ConfigError> errs;
    auto err = [&](const std::string& path, const std::string& msg) { errs.push_back({0, 0, path, msg}); };
    const Physics& ph = c.physics;
    if (!(ph.electron_energy > 1)) err("physics.electron_energy", "must exceed the electron rest energy");
    if (!(ph.laser_photon_eV > 0)) err("physics.laser_photon_energy", "must be positive");
    if (!(ph.xi >= 0) || !std::isfinite(ph.xi)) err("physics.xi", "must be a finite number >= 0");
    if (ph.n_min < 1) err("physics.n_min", "must be >= 1");
    if (ph.n_max < ph.n_min) err("physics.n_max", "must be >= n_min");
    if (ph.n_max > 400) err("physics.n_max", "must be <= 400");
    if (!(ph.resonance_threshold >= 0)) err("physics.resonance_threshold", "must be >= 0");
    if (!(ph.width >= 0)) err("physics.width", "must be >= 0");
    if (!(ph.bunch_electrons >= 0)) err("physics.bunch_electrons", "must be >= 0");
    if (!(ph.pulse_duration_s >= 0)) err("physics.pulse_duration", "must be >= 0");
    try {
        c.cuts.validate();
    } catch (const std::invalid_argument& e) {
        err("cuts", e.what());
    }

    const ScanBlock& s = c.scan;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.axes.size(); ++i) {
        const Axis& a = s.axes[i];
        const std::string p = "scan.axes." + a.name;
        if (!axis_names.count(a.name)) err(p, "unknown axis");
        if (!seen.insert(a.name).second) err(p, "duplicate axis");
        if (a.points < 1 || a.points > 4096) err(p + ".points", "must be in [1, 4096]");
        if (!(a.lo <= a.hi)) err(p, "'from' must not exceed 'to'");
        if (a.name == "omega_b" && !(a.lo > 0)) err(p, "photon energy must be positive");
        if ((a.name == "theta_b" || a.name == "theta_c") && (a.lo < 0 || a.hi > units::pi))
            err(p, "polar angle outside [0, pi]");
    }
    const std::size_t na = s.axes.size();
    switch (s.observable) {
    case Observable::rate_map:
    case Observable::concurrence_map:
        if (na > 2) err("scan.axes", "maps take at most two axes");
        break;
    case Observable::theta_c_curve:
        if (na != 1 || s.axes[0].name != "theta_c") err("scan.axes", "theta_c_curve takes exactly the axis theta_c");
        break;
    case Observable::total_rate:
        if (na != 0) err("scan.axes", "total_rate takes no axes");
        break;
    }
    if (!(s.point.omega_b > 0)) err("scan.point.omega_b", "must be positive");
    if (s.point.theta_b < 0 || s.point.theta_b > units::pi) err("scan.point.theta_b", "outside [0, pi]");
    if (s.point.theta_c < 0 || s.point.theta_c > units::pi) err("scan.point.theta_c", "outside [0, pi]");
    if (s.polarizations.empty()) err("scan.polarizations", "must not be empty");
    if (s.modes.empty()) err("scan.modes", "must not be empty");
    for (RateMode m : s.modes)
        if (m == RateMode::perturbative && ph.xi == 0) err("scan.modes", "perturbative mode needs xi > 0");

    const ExecutionBlock& e = c.execution;
    if (e.workers < 0) err("execution.workers", "must be >= 0");
    if (e.mc_divisions < 1 || e.mc_divisions > 16) err("execution.mc_divisions", "must be in [1, 16]");
    if (e.mc_samples < 2) err("execution.mc_samples", "must be >= 2");
    if (e.mc_rounds < 1 || e.mc_rounds > 12) err("execution.mc_rounds", "must be in [1, 12]");
    if (!(e.tolerance >= 0)) err("execution.tolerance", "must be >= 0");
    if (e.checkpoint_every < 1) err("execution.checkpoint_every", "must be >= 1");
    if (c.output.precision < 3 || c.output.precision > 17) err("output.precision", "must be in [3, 17]");
    if (c.output.path.empty()) err("output.path", "must not be empty");
    return errs;
}

ScanConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& ex) {
        ConfigError e;
        e.line = ex.mark.line >= 0 ? ex.mark.line + 1 : 0;
        e.column = ex.mark.column >= 0 ? ex.mark.column + 1 : 0;
        e.message = "YAML syntax error: " + ex.msg;
        throw ConfigErrors({e});
    }
    ScanConfig c;
    Parser ps;
    if (root.IsNull()) throw ConfigErrors({{0, 0, "", "empty configuration"}});
    if (!ps.check_map(root, "", {"physics", "cuts", "scan", "execution", "output"})) throw ConfigErrors(ps.errors);

    if (const YAML::Node n = root["physics"]) {
        const std::string p = "physics";
        ps.remember(n, p);
        if (ps.check_map(n, p,
                         {"electron_energy", "laser_photon_energy", "xi", "n_min", "n_max", "resonance_threshold",
                          "width", "bunch_electrons", "pulse_duration"})) {
            ps.quantity(n, p, "electron_energy", Dim::energy, c.physics.electron_energy);
            double w = units::eV_to_natural(c.physics.laser_photon_eV);
            ps.quantity(n, p, "laser_photon_energy", Dim::energy, w);
            c.physics.laser_photon_eV = units::natural_to_eV(w);
            ps.scalar(n, p, "xi", c.physics.xi);
            ps.scalar(n, p, "n_min", c.physics.n_min);
            ps.scalar(n, p, "n_max", c.physics.n_max);
            ps.scalar(n, p, "resonance_threshold", c.physics.resonance_threshold);
            ps.quantity(n, p, "width", Dim::area, c.physics.width);
            ps.scalar(n, p, "bunch_electrons", c.physics.bunch_electrons);
            ps.quantity(n, p, "pulse_duration", Dim::time, c.physics.pulse_duration_s);
        }
    }
    if (const YAML::Node n = root["cuts"]) {
        const std::string p = "cuts";
        ps.remember(n, p);
        c.cuts_defaulted = false;
        if (ps.check_map(n, p, {"omega_b", "theta_b", "theta_c"})) {
            ps.range(n, p, "omega_b", Dim::energy, c.cuts.omega_b);
            ps.range(n, p, "theta_b", Dim::angle, c.cuts.theta_b);
            ps.range(n, p, "theta_c", Dim::angle, c.cuts.theta_c);
        }
    }
    if (const YAML::Node n = root["scan"]) {
        const std::string p = "scan";
        ps.remember(n, p);
        if (ps.check_map(n, p, {"observable", "axes", "point", "polarizations", "modes", "single_compton"})) {
            if (const YAML::Node o = n["observable"]) {
                ps.remember(o, "scan.observable");
                auto ob = o.IsScalar() ? observable_from(o.Scalar()) : std::nullopt;
                if (ob)
                    c.scan.observable = *ob;
                else
                    ps.error(o, "scan.observable",
                             "expected one of rate_map, theta_c_curve, concurrence_map, total_rate");
            }
            if (const YAML::Node ax = n["axes"]) {
                ps.remember(ax, "scan.axes");
                c.scan.axes.clear();
                if (ax.IsMap()) {
                    for (const auto& kv : ax) {
                        Axis a;
                        a.name = kv.first.as<std::string>();
                        const std::string ap = "scan.axes." + a.name;
                        ps.remember(kv.second, ap);
                        if (!axis_names.count(a.name)) {
                            ps.error(kv.first, ap, "unknown axis (allowed: omega_b, theta_b, psi_b, theta_c, psi_c)");
                            continue;
                        }
                        if (!ps.check_map(kv.second, ap, {"from", "to", "points"})) continue;
                        if (!kv.second["from"] || !kv.second["to"] || !kv.second["points"]) {
                            ps.error(kv.second, ap, "axis needs from, to and points");
                            continue;
                        }
                        ps.quantity(kv.second, ap, "from", axis_dim(a.name), a.lo);
                        ps.quantity(kv.second, ap, "to", axis_dim(a.name), a.hi);
                        ps.scalar(kv.second, ap, "points", a.points);
                        c.scan.axes.push_back(a);
                    }
                } else if (!ax.IsNull()) {
                    ps.error(ax, "scan.axes", "expected a mapping of axis name to {from, to, points}");
                }
            }
            if (const YAML::Node pt = n["point"]) {
                ps.remember(pt, "scan.point");
                if (ps.check_map(pt, "scan.point", axis_names))
                    for (const auto& name : axis_names)
                        ps.quantity(pt, "scan.point", name, axis_dim(name), point_field(c.scan.point, name));
            }
            if (const YAML::Node pl = n["polarizations"]) {
                ps.remember(pl, "scan.polarizations");
                if (!pl.IsSequence()) {
                    ps.error(pl, "scan.polarizations", "expected a list such as [sum] or [e1e1, e2e2]");
                } else {
                    c.scan.polarizations.clear();
                    for (std::size_t i = 0; i < pl.size(); ++i) {
                        auto v = pl[i].IsScalar() ? pol_from(pl[i].Scalar()) : std::nullopt;
                        if (v)
                            c.scan.polarizations.push_back(*v);
                        else
                            ps.error(pl[i], "scan.polarizations[" + std::to_string(i) + "]",
                                     "expected sum, e1e1, e1e2, e2e1 or e2e2");
                    }
                }
            }
            if (const YAML::Node md = n["modes"]) {
                ps.remember(md, "scan.modes");
                if (!md.IsSequence()) {
                    ps.error(md, "scan.modes", "expected a list of nonperturbative and/or perturbative");
                } else {
                    c.scan.modes.clear();
                    for (std::size_t i = 0; i < md.size(); ++i) {
                        const std::string v = md[i].IsScalar() ? md[i].Scalar() : "";
                        if (v == "nonperturbative")
                            c.scan.modes.push_back(RateMode::nonperturbative);
                        else if (v == "perturbative")
                            c.scan.modes.push_back(RateMode::perturbative);
                        else
                            ps.error(md[i], "scan.modes[" + std::to_string(i) + "]",
                                     "expected nonperturbative or perturbative");
                    }
                }
            }
            ps.scalar(n, p, "single_compton", c.scan.single_compton);
        }
    }
    if (const YAML::Node n = root["execution"]) {
        const std::string p = "execution";
        ps.remember(n, p);
        if (ps.check_map(n, p,
                         {"workers", "seed", "mc_divisions", "mc_samples", "mc_rounds", "tolerance", "checkpoint",
                          "checkpoint_every"})) {
            ps.scalar(n, p, "workers", c.execution.workers);
            ps.scalar(n, p, "seed", c.execution.seed);
            ps.scalar(n, p, "mc_divisions", c.execution.mc_divisions);
            ps.scalar(n, p, "mc_samples", c.execution.mc_samples);
            ps.scalar(n, p, "mc_rounds", c.execution.mc_rounds);
            ps.scalar(n, p, "tolerance", c.execution.tolerance);
            if (n["checkpoint"] && !n["checkpoint"].IsNull()) ps.scalar(n, p, "checkpoint", c.execution.checkpoint);
            ps.scalar(n, p, "checkpoint_every", c.execution.checkpoint_every);
        }
    }
    if (const YAML::Node n = root["output"]) {
        const std::string p = "output";
        ps.remember(n, p);
        if (ps.check_map(n, p, {"path", "precision"})) {
            ps.scalar(n, p, "path", c.output.path);
            ps.scalar(n, p, "precision", c.output.precision);
        }
    }

    // Semantic checks also run after syntax errors, skipping fields that
    // already failed to read.
    std::vector<ConfigError> errs = ps.errors;
    std::vector<ConfigError> sem = validate(c);
    finish_lines(sem, ps.marks);
    for (auto& e : sem) {
        bool related = false;
        for (const auto& prev : ps.errors)
            related = related || prev.path.rfind(e.path, 0) == 0 || e.path.rfind(prev.path, 0) == 0;
        if (!related) errs.push_back(std::move(e));
    }
    if (!errs.empty()) throw ConfigErrors(errs);
    return c;
}

std::string to_yaml(const ScanConfig& c)
{
    const double MeV = units::MeV_to_natural(1.0);
    std::ostringstream o;
    o << "physics:\n"
      << "  electron_energy: " << fmt(c.physics.electron_energy) << " m_e\n"
      << "  laser_photon_energy: " << fmt(c.physics.laser_photon_eV) << " eV\n"
      << "  xi: " << fmt(c.physics.xi) << "\n"
      << "  n_min: " << c.physics.n_min << "\n"
      << "  n_max: " << c.physics.n_max << "\n"
      << "  resonance_threshold: " << fmt(c.physics.resonance_threshold) << "\n"
      << "  width: " << fmt(c.physics.width) << " m_e^2\n"
      << "  bunch_electrons: " << fmt(c.physics.bunch_electrons) << "\n"
      << "  pulse_duration: " << fmt(c.physics.pulse_duration_s) << " s\n";
    o << "cuts:\n"
      << "  omega_b: [" << fmt(c.cuts.omega_b.lo / MeV) << " MeV, " << fmt(c.cuts.omega_b.hi / MeV) << " MeV]\n"
      << "  theta_b: [" << fmt(c.cuts.theta_b.lo) << " rad, " << fmt(c.cuts.theta_b.hi) << " rad]\n"
      << "  theta_c: [" << fmt(c.cuts.theta_c.lo) << " rad, " << fmt(c.cuts.theta_c.hi) << " rad]\n";
    auto q = [&](const std::string& name, double v) {
        return name == "omega_b" ? fmt(v / MeV) + " MeV" : fmt(v) + " rad";
    };
    o << "scan:\n  observable: " << observable_name(c.scan.observable) << "\n";
    if (c.scan.axes.empty()) {
        o << "  axes: {}\n";
    } else {
        o << "  axes:\n";
        for (const auto& a : c.scan.axes)
            o << "    " << a.name << ": {from: " << q(a.name, a.lo) << ", to: " << q(a.name, a.hi)
              << ", points: " << a.points << "}\n";
    }
    o << "  point:\n";
    PhaseSpacePoint pt = c.scan.point;
    for (const char* name : {"omega_b", "theta_b", "psi_b", "theta_c", "psi_c"})
        o << "    " << name << ": " << q(name, point_field(pt, name)) << "\n";
    o << "  polarizations: [";
    for (std::size_t i = 0; i < c.scan.polarizations.size(); ++i)
        o << (i ? ", " : "") << pol_name(c.scan.polarizations[i]);
    o << "]\n  modes: [";
    for (std::size_t i = 0; i < c.scan.modes.size(); ++i)
        o << (i ? ", " : "") << (c.scan.modes[i] == RateMode::perturbative ? "perturbative" : "nonperturbative");
    o << "]\n  single_compton: " << (c.scan.single_compton ? "true" : "false") << "\n";
    o << "execution:\n"
      << "  workers: " << c.execution.workers << "\n"
      << "  seed: " << c.execution.seed << "\n"
      << "  mc_divisions: " << c.execution.mc_divisions << "\n"
      << "  mc_samples: " << c.execution.mc_samples << "\n"
      << "  mc_rounds: " << c.execution.mc_rounds << "\n"
      << "  tolerance: " << fmt(c.execution.tolerance) << "\n"
      << "  checkpoint: " << (c.execution.checkpoint.empty() ? "null" : YAML::Dump(YAML::Node(c.execution.checkpoint)))
      << "\n"
      << "  checkpoint_every: " << c.execution.checkpoint_every << "\n";
    o << "output:\n"
      << "  path: " << YAML::Dump(YAML::Node(c.output.path)) << "\n"
      << "  precision: " << c.output.precision << "\n";
    return o.str();
}

std::uint64_t config_hash(const ScanConfig& c)
{
    ScanConfig h = c;
    h.execution.workers = 0;
    h.execution.checkpoint.clear();
    h.execution.checkpoint_every = 1;
    h.output.path = "-";
    const std::string text = to_yaml(h);
    std::uint64_t x = 1469598103934665603ull;
    for (unsigned char ch : text) {
        x ^= ch;
        x *= 1099511628211ull;
    }
    return x;
}

std::string hash_hex(std::uint64_t h)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

struct PresetEntry {
    const char* name;
    const char* description;
    const char* yaml;
};

const PresetEntry presets[] = {
    {"fig2", "(psi_b, psi_c) rate maps at omega_b = 1 MeV, theta_b = theta_c = 1 mrad, polarizations e1e1 and e2e2",
     R"(physics:
  electron_energy: 1000 m_e
  laser_photon_energy: 2.5 eV
  xi: 1
scan:
  observable: rate_map
  axes:
    psi_b: {from: 0 rad, to: 2 pi rad, points: 32}
    psi_c: {from: 0 rad, to: 2 pi rad, points: 32}
  point: {omega_b: 1 MeV, theta_b: 1 mrad, psi_b: 0 rad, theta_c: 1 mrad, psi_c: 0 rad}
  polarizations: [e1e1, e2e2]
  modes: [nonperturbative, perturbative]
output:
  path: fig2.csv
)"},
    {"fig3", "d W / d theta_c curves (both modes) integrated inside the cuts, with totals and the single-Compton rate",
     R"(physics:
  electron_energy: 1000 m_e
  laser_photon_energy: 2.5 eV
  xi: 1
scan:
  observable: theta_c_curve
  axes:
    theta_c: {from: 0 rad, to: 1.5 mrad, points: 16}
  polarizations: [sum]
  modes: [nonperturbative, perturbative]
  single_compton: true
execution:
  mc_divisions: 3
  mc_samples: 4
output:
  path: fig3.csv
)"},
    {"fig4", "(theta_b, theta_c) concurrence and log10 rate maps at omega_b = 1 MeV, psi_b = psi_c = 0",
     R"(physics:
  electron_energy: 1000 m_e
  laser_photon_energy: 2.5 eV
  xi: 1
scan:
  observable: concurrence_map
  axes:
    theta_b: {from: 0.05 mrad, to: 2 mrad, points: 32}
    theta_c: {from: 0.05 mrad, to: 2 mrad, points: 32}
  point: {omega_b: 1 MeV, theta_b: 1 mrad, psi_b: 0 rad, theta_c: 1 mrad, psi_c: 0 rad}
  modes: [nonperturbative, perturbative]
output:
  path: fig4.csv
)"},
    {"total", "total rate inside the cuts by 5-D stratified Monte Carlo, both modes",
     R"(physics:
  electron_energy: 1000 m_e
  laser_photon_energy: 2.5 eV
  xi: 1
scan:
  observable: total_rate
  axes: {}
  modes: [nonperturbative, perturbative]
execution:
  mc_divisions: 3
  mc_samples: 8
output:
  path: total.csv
)"},
};

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> v;
    for (const auto& p : presets) v.emplace_back(p.name);
    return v;
}

std::string preset_description(const std::string& name)
{
    for (const auto& p : presets)
        if (name == p.name) return p.description;
    throw std::out_of_range("unknown preset '" + name + "'");
}

std::string preset_yaml(const std::string& name)
{
    for (const auto& p : presets)
        if (name == p.name) return p.yaml;
    throw std::out_of_range("unknown preset '" + name + "'");
}

ScanConfig preset(const std::string& name) { return parse_config(preset_yaml(name)); }

} // namespace nldc::scan
