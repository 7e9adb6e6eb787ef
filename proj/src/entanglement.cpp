#include "nldc/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "nldc/integrate.hpp"

namespace nldc {

double PolarizationDensityMatrix::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Eigen::Matrix4cd spin_summed_outer(const AmplitudeSet& amps)
{
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int ri = 1; ri <= 2; ++ri)
        for (int rf = 1; rf <= 2; ++rf) {
            Eigen::Vector4cd v;
            for (int lb = 1; lb <= 2; ++lb)
                for (int lc = 1; lc <= 2; ++lc) v(PolarizationDensityMatrix::index(lb, lc)) = amps(ri, rf, lb, lc);
            m += v * v.adjoint();
        }
    return 0.5 * m;
}

namespace {

PolarizationDensityMatrix normalized(const Eigen::Matrix4cd& m)
{
    const double tr = m.trace().real();
    if (!(tr > 0) || !std::isfinite(tr)) throw std::domain_error("density matrix has no weight");
    PolarizationDensityMatrix out;
    out.rho = m / tr;
    out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
    return out;
}

} // namespace

PolarizationDensityMatrix density_matrix(const EmissionTerm& term) { return normalized(spin_summed_outer(term.amplitudes)); }

PolarizationDensityMatrix density_matrix(const std::vector<EmissionTerm>& terms)
{
    if (terms.empty()) throw std::domain_error("all channels closed");
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (const auto& t : terms) m += t.weight * spin_summed_outer(t.amplitudes);
    return normalized(m);
}

DensityResult density_matrix(const Setup& setup, const PhaseSpacePoint& x, NPolicy policy, const RateOptions& opts,
                             AmplitudeEvaluator& evaluator)
{
    const std::vector<EmissionTerm> terms = emission_terms(setup, x, opts, evaluator);
    DensityResult out;
    out.combined = density_matrix(terms);
    for (const auto& t : terms) {
        out.rate += 2 * t.weight * spin_summed_outer(t.amplitudes).trace().real();
        if (policy == NPolicy::per_n && spin_summed_outer(t.amplitudes).trace().real() > 0) {
            out.n.push_back(t.point.n);
            out.per_n.push_back(density_matrix(t));
        }
    }
    return out;
}

ConcurrenceResult concurrence(const PolarizationDensityMatrix& in)
{
    const Eigen::Matrix4cd& rho = in.rho;
    if (!rho.allFinite()) throw std::invalid_argument("density matrix is not finite");
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if (in.hermiticity_defect() > 1e-12 * scale) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(in.trace() - 1) > 1e-10) throw std::invalid_argument("density matrix trace is not 1");
    const Eigen::Matrix4cd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    Eigen::Vector4d ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-10) throw std::invalid_argument("density matrix is not positive semidefinite");
    ev = ev.cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_rho = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();

    Eigen::Matrix4cd sysy = Eigen::Matrix4cd::Zero();
    sysy(0, 3) = -1;
    sysy(1, 2) = 1;
    sysy(2, 1) = 1;
    sysy(3, 0) = -1;
    const Eigen::Matrix4cd r = sqrt_rho * sysy * sqrt_rho.transpose();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(r);
    Eigen::Vector4d sv = svd.singularValues(); // descending

    ConcurrenceResult out;
    for (int j = 0; j < 4; ++j) out.zeta[std::size_t(j)] = sv(j) * sv(j);
    out.C = std::clamp(sv(0) - sv(1) - sv(2) - sv(3), 0.0, 1.0);
    return out;
}

std::vector<MapCell> concurrence_map(const Setup& setup, const std::vector<PhaseSpacePoint>& points, RateMode mode,
                                     const RateOptions& opts, Execution execution, int workers,
                                     double perturbative_scale)
{
    const bool pert = mode == RateMode::perturbative;
    const Setup eval_setup = pert ? perturbative_setup(setup, perturbative_scale) : setup;
    RateOptions eval_opts = opts;
    if (pert) eval_opts.n_min = eval_opts.n_max = 1;
    const double rescale = pert ? 1.0 / (perturbative_scale * perturbative_scale) : 1.0;

    std::vector<MapCell> cells(points.size());
    // Each index writes only its own cell.
    auto factory = [&]() -> std::function<double(std::size_t)> {
        auto ev = std::make_shared<AmplitudeEvaluator>(eval_opts.amplitude);
        return [&, ev](std::size_t i) -> double {
            MapCell& cell = cells[i];
            try {
                const DensityResult d = density_matrix(eval_setup, points[i], NPolicy::incoherent_sum, eval_opts, *ev);
                cell.concurrence = concurrence(d.combined).C;
                cell.rate = d.rate * rescale;
            } catch (const std::exception& e) {
                cell = MapCell{};
                cell.masked = true;
                cell.reason = e.what();
            }
            return 0.0;
        };
    };
    map_indexed(points.size(), factory, execution, workers);
    return cells;
}

} // namespace nldc
