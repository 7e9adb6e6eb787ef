#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nldc/scan.hpp"

namespace nldc::scan {

namespace {

std::string sci(double v)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

struct Check {
    std::string name;
    double value;
    double reference;
    double tolerance; ///< relative; factor when `factor` is set
    bool factor = false;
    bool pass() const
    {
        if (factor) return value >= reference / tolerance && value <= reference * tolerance;
        return std::abs(value - reference) <= tolerance * std::abs(reference);
    }
};

} // namespace

std::string report(const std::string& sidecar)
{
    using nlohmann::json;
    const json j = json::parse(sidecar);
    const json& s = j.at("summary");
    const json& ph = j.at("physics");
    std::ostringstream o;
    o << "scan " << j.value("csv", "?") << "  config " << j.value("config_hash", "?") << "  version "
      << j.value("version", "?") << "\n";
    o << "  E_i = " << sci(ph.at("electron_energy_m")) << " m, omega = " << sci(ph.at("laser_photon_eV"))
      << " eV, xi = " << sci(ph.at("xi")) << "\n";
    o << "  cells: " << j.value("cells", 0) << " (" << s.value("masked_cells", 0.0) << " masked)\n";
    auto line = [&](const char* label, const char* key, const char* unit) {
        if (!s.contains(key)) return;
        o << "  " << label << " = " << sci(s.at(key).get<double>()) << unit;
        const std::string ek = std::string(key) + "_error";
        if (s.contains(ek)) o << " +- " << sci(s.at(ek).get<double>());
        o << "\n";
    };
    line("chi", "chi", "");
    line("m_*", "m_star", " m");
    line("intensity", "intensity_W_per_cm2", " W/cm^2");
    line("W (nonperturbative)", "total_rate", " s^-1");
    line("W (perturbative)", "total_rate_pert", " s^-1");
    line("W / W_pert", "total_ratio", "");
    line("single Compton", "single_compton_rate", " s^-1");
    line("pairs per shot", "pairs_per_shot", "");

    const bool standard = std::abs(ph.at("electron_energy_m").get<double>() - 1000) < 1e-9 &&
                          std::abs(ph.at("laser_photon_eV").get<double>() - 2.5) < 1e-12 &&
                          std::abs(ph.at("xi").get<double>() - 1) < 1e-12;
    if (!standard) {
        o << "  reference checks: n/a (parameters differ from E_i = 1000 m, omega = 2.5 eV, xi = 1)\n";
        return o.str();
    }
    std::vector<Check> checks;
    auto add = [&](const char* name, const char* key, double ref, double tol, bool factor = false) {
        if (s.contains(key)) checks.push_back({name, s.at(key).get<double>(), ref, tol, factor});
    };
    add("intensity 5.5e18 W/cm^2 (10%)", "intensity_W_per_cm2", 5.5e18, 0.10);
    add("chi = 1e-2 (10%)", "chi", 1e-2, 0.10);
    add("m_* = sqrt(2) m (1e-12)", "m_star", std::sqrt(2.0), 1e-12);
    add("W = 3.5e7 s^-1 (25%)", "total_rate", 3.5e7, 0.25);
    add("W_pert = 2.5e7 s^-1 (25%)", "total_rate_pert", 2.5e7, 0.25);
    add("W / W_pert = 1.4 (20%)", "total_ratio", 1.4, 0.20);
    add("single Compton 3e13 s^-1 (25%)", "single_compton_rate", 3e13, 0.25);
    add("pairs per shot 2e3 (factor 2)", "pairs_per_shot", 2e3, 2.0, true);
    o << "  reference checks:\n";
    for (const auto& c : checks)
        o << "    " << (c.pass() ? "PASS" : "FAIL") << "  " << c.name << ": " << sci(c.value) << "\n";
    if (!j.value("cuts_defaulted", true) && s.contains("total_rate"))
        o << "    note: cuts differ from the defaults, totals are not directly comparable\n";
    return o.str();
}

} // namespace nldc::scan
