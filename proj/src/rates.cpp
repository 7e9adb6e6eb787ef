#include "nldc/rates.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "nldc/units.hpp"

namespace nldc {

namespace {

constexpr double two_pi = 2 * units::pi;

double omega_eV(const LaserConfig& laser) { return units::natural_to_eV(laser.omega); }

void check_range(const Range& r, const char* name, double lower_bound)
{
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi)) || !(r.lo < r.hi) || r.lo < lower_bound)
        throw std::invalid_argument(std::string("cuts: invalid ") + name + " range");
}

} // namespace

Setup make_setup(double electron_energy, double omega_eV, double xi)
{
    if (!(electron_energy > 1)) throw std::invalid_argument("electron energy must exceed the rest mass");
    Setup s;
    s.laser = laser_from_intensity(omega_eV, xi);
    s.electron_energy = electron_energy;
    return s;
}

void PhaseSpaceCuts::validate() const
{
    check_range(omega_b, "omega_b", 0.0);
    if (!(omega_b.lo > 0)) throw std::invalid_argument("cuts: omega_b lower bound must be positive");
    check_range(theta_b, "theta_b", 0.0);
    check_range(theta_c, "theta_c", 0.0);
    if (theta_b.hi > units::pi || theta_c.hi > units::pi) throw std::invalid_argument("cuts: polar angle above pi");
}

double phase_space_weight(const EmissionPoint& ep)
{
    const double wb = ep.b.omega, wc = ep.c.omega;
    const double natural = wb * wb * wc * wc * wc * ep.final.Q() /
                           (4 * std::pow(two_pi, 5) * minkowski_dot(ep.final.q, ep.c.k));
    return units::rate_density_to_per_second_MeV(0.5 * natural);
}

std::vector<EmissionTerm> emission_terms(const Setup& setup, const PhaseSpacePoint& x, const RateOptions& opts,
                                         AmplitudeEvaluator& evaluator)
{
    const DressedElectron initial = setup.initial();
    std::vector<EmissionTerm> terms;
    for (int n = opts.n_min; n <= opts.n_max; ++n) {
        auto ep = make_emission_point(setup.laser, initial, n, x.omega_b, x.theta_b, x.psi_b, x.theta_c, x.psi_c);
        if (!ep) continue;
        EmissionTerm t;
        t.point = *ep;
        t.amplitudes = evaluator.evaluate(*ep);
        t.weight = phase_space_weight(*ep);
        terms.push_back(std::move(t));
    }
    return terms;
}

RatePoint differential_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol,
                            const RateOptions& opts, AmplitudeEvaluator& evaluator)
{
    if (!pol.summed() && (pol.lambda_b < 1 || pol.lambda_b > 2 || pol.lambda_c < 1 || pol.lambda_c > 2))
        throw std::invalid_argument("polarization labels must be 1 or 2");
    RatePoint out;
    out.n_min = opts.n_min;
    out.per_n.assign(std::size_t(std::max(0, opts.n_max - opts.n_min + 1)), 0.0);
    std::vector<EmissionTerm> terms;
    try {
        terms = emission_terms(setup, x, opts, evaluator);
    } catch (const ResonanceError& e) {
        out.excluded = true;
        out.reason = e.what();
        out.per_n.assign(out.per_n.size(), 0.0);
        return out;
    }
    for (const auto& t : terms) {
        double sel = 0;
        for (int lb = 1; lb <= 2; ++lb)
            for (int lc = 1; lc <= 2; ++lc) {
                const double v = t.weight * t.amplitudes.spin_summed_square(lb, lc);
                out.per_polarization[std::size_t((lb - 1) * 2 + (lc - 1))] += v;
                if (pol.summed() || (pol.lambda_b == lb && pol.lambda_c == lc)) sel += v;
            }
        out.per_n[std::size_t(t.point.n - opts.n_min)] = sel;
    }
    double total = 0;
    for (double v : out.per_n) total += v;
    out.value = total;
    return out;
}

RatePoint differential_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol,
                            const RateOptions& opts)
{
    AmplitudeEvaluator evaluator(opts.amplitude);
    return differential_rate(setup, x, pol, opts, evaluator);
}

Setup perturbative_setup(const Setup& setup, double scale)
{
    Setup s = setup;
    s.laser = laser_from_intensity(omega_eV(setup.laser), setup.laser.xi * scale);
    return s;
}

namespace {

RatePoint scaled_weak_field(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol,
                            const RateOptions& opts, double scale, AmplitudeEvaluator& evaluator)
{
    RateOptions o = opts;
    o.n_min = o.n_max = 1;
    RatePoint r = differential_rate(perturbative_setup(setup, scale), x, pol, o, evaluator);
    const double factor = 1.0 / (scale * scale);
    r.value *= factor;
    for (double& v : r.per_n) v *= factor;
    for (double& v : r.per_polarization) v *= factor;
    return r;
}

} // namespace

RatePoint perturbative_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol,
                            const RateOptions& opts, const PerturbativeOptions& popts,
                            AmplitudeEvaluator& evaluator)
{
    if (!(setup.laser.xi > 0)) throw std::invalid_argument("perturbative reference needs xi > 0");
    RatePoint r = scaled_weak_field(setup, x, pol, opts, popts.scale, evaluator);
    if (popts.richardson_check && !r.excluded) {
        const RatePoint r2 = scaled_weak_field(setup, x, pol, opts, popts.scale / 10, evaluator);
        const double ref = std::max(std::abs(r.value), std::abs(r2.value));
        if (ref > 0 && std::abs(r.value - r2.value) > 5e-3 * ref)
            throw LimitError("weak-field limit not reached: rates at xi' and xi'/10 differ by " +
                             std::to_string(std::abs(r.value - r2.value) / ref));
    }
    return r;
}

RatePoint perturbative_rate(const Setup& setup, const PhaseSpacePoint& x, PolarizationSelect pol,
                            const RateOptions& opts, const PerturbativeOptions& popts)
{
    AmplitudeEvaluator evaluator(opts.amplitude);
    return perturbative_rate(setup, x, pol, opts, popts, evaluator);
}

namespace {

struct SampleMap {
    PhaseSpaceCuts cuts;
    double log_ratio;

    explicit SampleMap(const PhaseSpaceCuts& c) : cuts(c), log_ratio(std::log(c.omega_b.hi / c.omega_b.lo)) {}

    // Fills x from the first four cube coordinates and returns the measure
    // d omega_b d Omega_b d psi_c (theta_c excluded).
    double map(std::span<const double> u, PhaseSpacePoint& x) const
    {
        x.omega_b = cuts.omega_b.lo * std::exp(log_ratio * u[0]);
        const double tb_width = cuts.theta_b.hi - cuts.theta_b.lo;
        x.theta_b = cuts.theta_b.lo + tb_width * u[1];
        x.psi_b = two_pi * u[2];
        x.psi_c = two_pi * u[3];
        return x.omega_b * log_ratio * std::sin(x.theta_b) * tb_width * two_pi * two_pi;
    }
};

class RateIntegrand {
public:
    RateIntegrand(const Setup& setup, RateMode mode, const RateOptions& opts)
        : setup_(setup), mode_(mode), opts_(opts), evaluator_(opts.amplitude)
    {
        popts_.richardson_check = false;
    }

    // Polarization-summed rate density in s^-1 sr^-2 MeV^-1.
    double operator()(const PhaseSpacePoint& x)
    {
        const RatePoint r = mode_ == RateMode::perturbative
                                ? perturbative_rate(setup_, x, {}, opts_, popts_, evaluator_)
                                : differential_rate(setup_, x, {}, opts_, evaluator_);
        if (r.excluded) ++excluded_;
        return r.value;
    }

    long excluded() const { return excluded_; }

private:
    Setup setup_;
    RateMode mode_;
    RateOptions opts_;
    PerturbativeOptions popts_;
    AmplitudeEvaluator evaluator_;
    long excluded_ = 0;
};

IntegratedRate run_integral(int dims, const IntegrandFactory& factory, const IntegrationOptions& iopts,
                            const std::shared_ptr<std::vector<std::shared_ptr<RateIntegrand>>>& made)
{
    IntegratedRate out;
    if (iopts.method == IntegrationOptions::Method::product_gauss) {
        out.estimate = integrate_product_gauss(factory, dims, iopts.gauss_order, iopts.execution, iopts.workers);
    } else {
        StratifiedOptions so;
        so.dims = dims;
        so.divisions = iopts.divisions;
        so.samples_per_stratum = iopts.samples_per_stratum;
        so.seed = iopts.seed;
        so.rel_tolerance = iopts.rel_tolerance;
        so.max_rounds = iopts.max_rounds;
        so.execution = iopts.execution;
        so.workers = iopts.workers;
        out.estimate = integrate_stratified(factory, so);
    }
    for (const auto& p : *made) out.excluded += p->excluded();
    return out;
}

} // namespace

IntegratedRate integrated_rate_theta_c(const Setup& setup, const PhaseSpaceCuts& cuts, double theta_c, RateMode mode,
                                       const RateOptions& opts, const IntegrationOptions& iopts)
{
    cuts.validate();
    const SampleMap sm(cuts);
    const double per_MeV = units::natural_to_MeV(1.0);
    const double sin_c = std::sin(theta_c);
    auto made = std::make_shared<std::vector<std::shared_ptr<RateIntegrand>>>();
    auto guard = std::make_shared<std::mutex>();
    IntegrandFactory factory = [=]() -> Integrand {
        auto f = std::make_shared<RateIntegrand>(setup, mode, opts);
        {
            std::lock_guard lock(*guard);
            made->push_back(f);
        }
        return [f, sm, theta_c, sin_c, per_MeV](std::span<const double> u) {
            PhaseSpacePoint x;
            x.theta_c = theta_c;
            const double measure = sm.map(u, x);
            return (*f)(x) * measure * per_MeV * sin_c;
        };
    };
    return run_integral(4, factory, iopts, made);
}

IntegratedRate total_rate(const Setup& setup, const PhaseSpaceCuts& cuts, RateMode mode, const RateOptions& opts,
                          const IntegrationOptions& iopts)
{
    cuts.validate();
    const SampleMap sm(cuts);
    const double per_MeV = units::natural_to_MeV(1.0);
    auto made = std::make_shared<std::vector<std::shared_ptr<RateIntegrand>>>();
    auto guard = std::make_shared<std::mutex>();
    IntegrandFactory factory = [=]() -> Integrand {
        auto f = std::make_shared<RateIntegrand>(setup, mode, opts);
        {
            std::lock_guard lock(*guard);
            made->push_back(f);
        }
        return [f, sm, per_MeV](std::span<const double> u) {
            PhaseSpacePoint x;
            const double measure = sm.map(u, x);
            const double tc_width = sm.cuts.theta_c.hi - sm.cuts.theta_c.lo;
            x.theta_c = sm.cuts.theta_c.lo + tc_width * u[4];
            return (*f)(x) * measure * per_MeV * std::sin(x.theta_c) * tc_width;
        };
    };
    return run_integral(5, factory, iopts, made);
}

double single_compton_dW_dOmega(const Setup& setup, int n, double theta, double psi, const AmplitudeOptions& opts)
{
    const DressedElectron initial = setup.initial();
    const auto sp = make_single_emission_point(setup.laser, initial, n, theta, psi);
    if (!sp) return 0.0;
    const auto amps = single_vertex_amplitudes(*sp, opts);
    double sq = 0;
    for (const cplx& a : amps) sq += std::norm(a);
    const double w = sp->k.omega;
    return 0.5 * sq * w * w * w * sp->final.Q() / (8 * units::pi * units::pi * minkowski_dot(sp->final.q, sp->k.k));
}

SingleComptonResult single_compton_total_rate(const Setup& setup, const SingleComptonOptions& opts)
{
    // Emission is concentrated within a few 1/gamma of the beam axis; the
    // panel edges follow that scale and the last panel reaches pi.
    const double g = 1.0 / setup.electron_energy;
    std::vector<double> edges{0.0};
    for (double f : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 7.0, 12.0, 25.0, 60.0, 200.0})
        if (f * g < units::pi) edges.push_back(f * g);
    if (200.0 * g < 0.5) edges.push_back(0.5);
    edges.push_back(units::pi);

    std::vector<double> gx, gw;
    gauss_legendre(opts.gauss_order, gx, gw);
    struct Node {
        double theta, weight;
    };
    std::vector<Node> nodes;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        for (std::size_t k = 0; k < gx.size(); ++k) {
            const double th = 0.5 * (a + b) + 0.5 * (b - a) * gx[k];
            nodes.push_back({th, 0.5 * (b - a) * gw[k] * std::sin(th)});
        }
    }
    const int np = opts.psi_points;
    const std::size_t per_n = nodes.size() * std::size_t(np);

    SingleComptonResult out;
    out.per_n.assign(std::size_t(opts.n_max), 0.0);
    for (int n = 1; n <= opts.n_max; ++n) {
        auto factory = [&, n]() -> std::function<double(std::size_t)> {
            return [&, n](std::size_t i) {
                const Node& nd = nodes[i / std::size_t(np)];
                const double psi = opts.psi_offset + two_pi * double(i % std::size_t(np)) / np;
                return nd.weight * (two_pi / np) * single_compton_dW_dOmega(setup, n, nd.theta, psi, opts.amplitude);
            };
        };
        const std::vector<double> v = map_indexed(per_n, factory);
        out.per_n[std::size_t(n - 1)] = units::rate_to_per_second(pairwise_sum(v));
    }
    out.total = pairwise_sum(out.per_n);
    return out;
}

double pairs_per_shot(double rate_per_second, double electrons, double duration_seconds)
{
    if (rate_per_second < 0 || electrons < 0 || duration_seconds < 0)
        throw std::invalid_argument("pairs_per_shot: inputs must be nonnegative");
    return rate_per_second * electrons * duration_seconds;
}

} // namespace nldc
