#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nldc/entanglement.hpp"
#include "nldc/scan.hpp"
#include "nldc/units.hpp"

namespace nldc::scan {

using nlohmann::json;

namespace {

const char* mode_tag(RateMode m) { return m == RateMode::perturbative ? "pert" : "np"; }

std::string pol_tag(PolarizationSelect p)
{
    if (p.summed()) return "sum";
    return "e" + std::to_string(p.lambda_b) + "e" + std::to_string(p.lambda_c);
}

const char* axis_unit(const std::string& name) { return name == "omega_b" ? "MeV" : "rad"; }

double axis_display(const std::string& name, double v) { return name == "omega_b" ? units::natural_to_MeV(v) : v; }

Setup setup_of(const ScanConfig& c)
{
    return make_setup(c.physics.electron_energy, c.physics.laser_photon_eV, c.physics.xi);
}

RateOptions rate_options(const ScanConfig& c)
{
    RateOptions o;
    o.n_min = c.physics.n_min;
    o.n_max = c.physics.n_max;
    o.amplitude.resonance_threshold = c.physics.resonance_threshold;
    o.amplitude.width = c.physics.width;
    return o;
}

IntegrationOptions integration_options(const ScanConfig& c, std::uint64_t seed)
{
    IntegrationOptions io;
    io.divisions = c.execution.mc_divisions;
    io.samples_per_stratum = c.execution.mc_samples;
    io.max_rounds = c.execution.mc_rounds;
    io.rel_tolerance = c.execution.tolerance;
    io.seed = seed;
    io.workers = c.execution.workers;
    return io;
}

PhaseSpacePoint point_at(const ScanConfig& c, const std::vector<double>& coords)
{
    PhaseSpacePoint x = c.scan.point;
    for (std::size_t a = 0; a < c.scan.axes.size(); ++a) {
        const std::string& n = c.scan.axes[a].name;
        const double v = coords[a];
        if (n == "omega_b") x.omega_b = v;
        else if (n == "theta_b") x.theta_b = v;
        else if (n == "psi_b") x.psi_b = v;
        else if (n == "theta_c") x.theta_c = v;
        else x.psi_c = v;
    }
    return x;
}

void fail(Cell& cell, std::size_t k, const std::string& code)
{
    cell.values[k] = std::nan("");
    cell.masked = true;
    if (cell.reason.empty()) cell.reason = code;
    else if (cell.reason.find(code) == std::string::npos) cell.reason += "+" + code;
}

// Rate map cell: one evaluation per mode gives every polarization.
void rate_map_cell(const ScanConfig& c, const Setup& setup, const RateOptions& ro, const PhaseSpacePoint& x,
                   AmplitudeEvaluator& ev, Cell& cell)
{
    std::size_t k = 0;
    for (RateMode m : c.scan.modes) {
        RatePoint r;
        std::string code;
        try {
            r = m == RateMode::perturbative ? perturbative_rate(setup, x, {}, ro, {}, ev)
                                            : differential_rate(setup, x, {}, ro, ev);
            if (r.excluded) code = "resonance";
        } catch (const LimitError&) {
            code = "limit";
        } catch (const ConvergenceError&) {
            code = "nonconvergent";
        } catch (const std::exception&) {
            code = "error";
        }
        for (PolarizationSelect p : c.scan.polarizations) {
            if (!code.empty()) {
                fail(cell, k++, code);
                continue;
            }
            double v = 0;
            if (p.summed())
                for (double q : r.per_polarization) v += q;
            else
                v = r.per_polarization[std::size_t((p.lambda_b - 1) * 2 + (p.lambda_c - 1))];
            cell.values[k++] = v;
        }
        if (code.empty() && r.value == 0 && std::all_of(r.per_n.begin(), r.per_n.end(), [](double v) { return v == 0; })) {
            cell.masked = true;
            if (cell.reason.empty()) cell.reason = "closed";
        }
    }
}

} // namespace

std::vector<Series> series_for(const ScanConfig& c)
{
    std::vector<Series> s;
    for (RateMode m : c.scan.modes) {
        const std::string t = mode_tag(m);
        switch (c.scan.observable) {
        case Observable::rate_map:
            for (PolarizationSelect p : c.scan.polarizations)
                s.push_back({"rate_" + t + "_" + pol_tag(p), "s^-1 sr^-2 MeV^-1", false});
            break;
        case Observable::theta_c_curve: s.push_back({"dWdtheta_c_" + t, "s^-1 rad^-1", true}); break;
        case Observable::concurrence_map:
            s.push_back({"concurrence_" + t, "1", false});
            s.push_back({"log10_rate_" + t, "log10(s^-1 sr^-2 MeV^-1)", false});
            break;
        case Observable::total_rate: s.push_back({"total_" + t, "s^-1", true}); break;
        }
    }
    return s;
}

std::vector<double> cell_coordinates(const ScanConfig& c, int index)
{
    std::vector<double> coords(c.scan.axes.size());
    for (int a = int(c.scan.axes.size()) - 1; a >= 0; --a) {
        const Axis& ax = c.scan.axes[std::size_t(a)];
        coords[std::size_t(a)] = ax.value(index % ax.points);
        index /= ax.points;
    }
    return coords;
}

void atomic_write(const std::string& path, const std::string& text)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

json cell_to_json(const Cell& cell)
{
    json v = json::array(), e = json::array();
    // NaN has no JSON form; masked entries are restored from the mask.
    for (double x : cell.values) v.push_back(std::isnan(x) ? json(nullptr) : json(x));
    for (double x : cell.errors) e.push_back(x);
    return json{{"v", v}, {"e", e}, {"m", cell.masked}, {"r", cell.reason}};
}

Cell cell_from_json(const json& j)
{
    Cell c;
    for (const auto& x : j.at("v")) c.values.push_back(x.is_null() ? std::nan("") : x.get<double>());
    for (const auto& x : j.at("e")) c.errors.push_back(x.get<double>());
    c.masked = j.at("m").get<bool>();
    c.reason = j.at("r").get<std::string>();
    return c;
}

void write_checkpoint(const ScanConfig& c, std::uint64_t hash, const std::vector<Cell>& cells, int done)
{
    json j;
    j["hash"] = hash_hex(hash);
    j["done"] = done;
    json arr = json::array();
    for (int i = 0; i < done; ++i) arr.push_back(cell_to_json(cells[std::size_t(i)]));
    j["cells"] = arr;
    atomic_write(c.execution.checkpoint, j.dump());
}

int read_checkpoint(const ScanConfig& c, std::uint64_t hash, std::vector<Cell>& cells)
{
    std::ifstream in(c.execution.checkpoint);
    if (!in) return 0;
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("unreadable checkpoint " + c.execution.checkpoint + ": " + e.what());
    }
    if (j.value("hash", "") != hash_hex(hash))
        throw std::runtime_error("checkpoint " + c.execution.checkpoint + " belongs to a different configuration");
    const int done = j.at("done").get<int>();
    if (done < 0 || done > int(cells.size())) throw std::runtime_error("checkpoint cell count out of range");
    for (int i = 0; i < done; ++i) cells[std::size_t(i)] = cell_from_json(j.at("cells").at(std::size_t(i)));
    return done;
}

double trapezoid_total(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& e,
                       double& error)
{
    double total = 0, var = 0;
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = 0.5 * (x[i + 1] - x[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        total += w[i] * y[i];
        var += w[i] * w[i] * e[i] * e[i];
    }
    error = std::sqrt(var);
    return total;
}

} // namespace

ScanResult run_scan(const ScanConfig& c, const RunHooks& hooks)
{
    const auto t0 = std::chrono::steady_clock::now();
    ScanResult res;
    res.config = c;
    res.hash = config_hash(c);
    res.series = series_for(c);
    const int total = c.cell_count();
    const std::size_t ns = res.series.size();
    res.cells.assign(std::size_t(total), Cell{std::vector<double>(ns, 0.0), std::vector<double>(ns, 0.0), false, ""});

    const Setup setup = setup_of(c);
    const RateOptions ro = rate_options(c);

    int done = 0;
    if (!c.execution.checkpoint.empty()) done = read_checkpoint(c, res.hash, res.cells);
    res.resumed_cells = done;

    const int chunk = c.execution.checkpoint.empty() ? total : c.execution.checkpoint_every;
    while (done < total) {
        int end = std::min(total, done + chunk);
        if (hooks.stop_after_cells > 0) end = std::min(end, std::max(done + 1, hooks.stop_after_cells));
        const int begin = done;

        if (c.scan.observable == Observable::rate_map) {
            auto factory = [&]() -> std::function<double(std::size_t)> {
                auto ev = std::make_shared<AmplitudeEvaluator>(ro.amplitude);
                return [&, ev](std::size_t i) {
                    const int idx = begin + int(i);
                    rate_map_cell(c, setup, ro, point_at(c, cell_coordinates(c, idx)), *ev,
                                  res.cells[std::size_t(idx)]);
                    return 0.0;
                };
            };
            map_indexed(std::size_t(end - begin), factory, Execution::parallel, c.execution.workers);
        } else if (c.scan.observable == Observable::concurrence_map) {
            std::vector<PhaseSpacePoint> pts;
            for (int idx = begin; idx < end; ++idx) pts.push_back(point_at(c, cell_coordinates(c, idx)));
            std::size_t k = 0;
            for (RateMode m : c.scan.modes) {
                const auto cells = concurrence_map(setup, pts, m, ro, Execution::parallel, c.execution.workers);
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    Cell& cell = res.cells[std::size_t(begin) + i];
                    if (cells[i].masked) {
                        const std::string& r = cells[i].reason;
                        const std::string code = r.find("resonance") != std::string::npos ? "resonance"
                                                 : r.find("closed") != std::string::npos  ? "closed"
                                                                                          : "error";
                        fail(cell, k, code);
                        fail(cell, k + 1, code);
                    } else {
                        cell.values[k] = cells[i].concurrence;
                        cell.values[k + 1] = cells[i].rate > 0 ? std::log10(cells[i].rate) : -INFINITY;
                    }
                }
                k += 2;
            }
        } else {
            PhaseSpaceCuts cuts = c.cuts;
            for (int idx = begin; idx < end; ++idx) {
                Cell& cell = res.cells[std::size_t(idx)];
                const std::vector<double> coords = cell_coordinates(c, idx);
                std::size_t k = 0;
                for (RateMode m : c.scan.modes) {
                    const std::uint64_t seed = mix_seed(c.execution.seed, std::uint64_t(idx) * 2 + (k & 1));
                    try {
                        const IntegratedRate r =
                            c.scan.observable == Observable::theta_c_curve
                                ? integrated_rate_theta_c(setup, cuts, coords[0], m, ro, integration_options(c, seed))
                                : total_rate(setup, cuts, m, ro, integration_options(c, seed));
                        cell.values[k] = r.estimate.value;
                        cell.errors[k] = r.estimate.error;
                        if (!r.estimate.converged && cell.reason.empty()) cell.reason = "nonconvergent";
                    } catch (const std::exception&) {
                        fail(cell, k, "error");
                    }
                    ++k;
                }
            }
        }
        done = end;
        if (!c.execution.checkpoint.empty()) write_checkpoint(c, res.hash, res.cells, done);
        if (hooks.progress) hooks.progress(done, total);
        if (hooks.stop_after_cells > 0 && done >= hooks.stop_after_cells && done < total)
            throw Interrupted("stopped after " + std::to_string(done) + " cells");
    }

    // Summary
    const LaserConfig& laser = setup.laser;
    res.summary["chi"] = chi_parameter(head_on_electron(setup.electron_energy), laser);
    res.summary["m_star"] = std::sqrt(laser.m_star_squared());
    res.summary["intensity_W_per_cm2"] = laser.intensity_W_per_cm2();
    int masked = 0;
    for (const auto& cell : res.cells) masked += cell.masked;
    res.summary["masked_cells"] = masked;

    auto add_total = [&](std::size_t k, RateMode m, double value, double err) {
        const std::string key = m == RateMode::perturbative ? "total_rate_pert" : "total_rate";
        res.summary[key] = value;
        res.summary[key + "_error"] = err;
        if (m == RateMode::nonperturbative)
            res.summary["pairs_per_shot"] =
                pairs_per_shot(value, c.physics.bunch_electrons, c.physics.pulse_duration_s);
        (void)k;
    };
    if (c.scan.observable == Observable::theta_c_curve) {
        std::vector<double> x;
        for (int i = 0; i < total; ++i) x.push_back(cell_coordinates(c, i)[0]);
        for (std::size_t k = 0; k < ns; ++k) {
            std::vector<double> y, e;
            bool ok = true;
            for (const auto& cell : res.cells) {
                ok = ok && !std::isnan(cell.values[k]);
                y.push_back(cell.values[k]);
                e.push_back(cell.errors[k]);
            }
            if (!ok) continue;
            double err = 0;
            const double t = trapezoid_total(x, y, e, err);
            add_total(k, c.scan.modes[k], t, err);
        }
    } else if (c.scan.observable == Observable::total_rate) {
        for (std::size_t k = 0; k < ns; ++k)
            if (!std::isnan(res.cells[0].values[k]))
                add_total(k, c.scan.modes[k], res.cells[0].values[k], res.cells[0].errors[k]);
    }
    if (res.summary.count("total_rate") && res.summary.count("total_rate_pert") && res.summary["total_rate_pert"] > 0)
        res.summary["total_ratio"] = res.summary["total_rate"] / res.summary["total_rate_pert"];
    if (c.scan.single_compton) {
        SingleComptonOptions so;
        so.amplitude.resonance_threshold = c.physics.resonance_threshold;
        res.summary["single_compton_rate"] = single_compton_total_rate(setup, so).total;
    }
    res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace {

std::string num(double v, int precision)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

} // namespace

std::string csv_text(const ScanResult& r)
{
    const ScanConfig& c = r.config;
    const int p = c.output.precision;
    std::ostringstream o;
    bool first = true;
    auto col = [&](const std::string& s) {
        o << (first ? "" : ",") << s;
        first = false;
    };
    for (const auto& a : c.scan.axes) col(a.name + " [" + axis_unit(a.name) + "]");
    for (const auto& s : r.series) {
        col(s.name + " [" + s.unit + "]");
        if (s.has_error) col(s.name + "_error [" + s.unit + "]");
    }
    col("mask");
    col("reason");
    o << "\n";
    for (int i = 0; i < int(r.cells.size()); ++i) {
        const Cell& cell = r.cells[std::size_t(i)];
        first = true;
        const std::vector<double> coords = cell_coordinates(c, i);
        for (std::size_t a = 0; a < coords.size(); ++a) col(num(axis_display(c.scan.axes[a].name, coords[a]), p));
        for (std::size_t k = 0; k < r.series.size(); ++k) {
            col(num(cell.values[k], p));
            if (r.series[k].has_error) col(num(cell.errors[k], p));
        }
        col(cell.masked ? "1" : "0");
        col(cell.reason);
        o << "\n";
    }
    return o.str();
}

std::string sidecar_text(const ScanResult& r)
{
    const ScanConfig& c = r.config;
    // Execution-only settings stay out so the file does not depend on them.
    ScanConfig provenance = c;
    provenance.execution.workers = 0;
    provenance.execution.checkpoint.clear();
    provenance.execution.checkpoint_every = ExecutionBlock{}.checkpoint_every;
    json j;
    j["format"] = "nldc-scan/1";
    j["version"] = version;
    j["config_hash"] = hash_hex(r.hash);
    j["config"] = to_yaml(provenance);
    j["cuts_defaulted"] = c.cuts_defaulted;
    json axes = json::array();
    for (const auto& a : c.scan.axes)
        axes.push_back({{"name", a.name},
                        {"unit", axis_unit(a.name)},
                        {"from", axis_display(a.name, a.lo)},
                        {"to", axis_display(a.name, a.hi)},
                        {"points", a.points}});
    j["axes"] = axes;
    json series = json::array();
    for (const auto& s : r.series) series.push_back({{"name", s.name}, {"unit", s.unit}, {"has_error", s.has_error}});
    j["series"] = series;
    j["cells"] = r.cells.size();
    j["csv"] = std::filesystem::path(c.output.path).filename().string();
    json summary = json::object();
    for (const auto& [k, v] : r.summary) summary[k] = v;
    j["summary"] = summary;
    j["physics"] = {{"electron_energy_m", c.physics.electron_energy},
                    {"laser_photon_eV", c.physics.laser_photon_eV},
                    {"xi", c.physics.xi},
                    {"bunch_electrons", c.physics.bunch_electrons},
                    {"pulse_duration_s", c.physics.pulse_duration_s}};
    return j.dump(2) + "\n";
}

void write_outputs(const ScanResult& r)
{
    const std::string& path = r.config.output.path;
    atomic_write(path, csv_text(r));
    atomic_write(path + ".json", sidecar_text(r));
}

} // namespace nldc::scan
