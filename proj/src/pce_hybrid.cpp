#include "tvpce/pce_hybrid.hpp"

#include <stdexcept>

#include "pipeline.hpp"
#include "tvpce/angles.hpp"
#include "tvpce/errors.hpp"
#include "tvpce/jade.hpp"

namespace tvpce {

ComplexVector combiner_response(const ComplexMatrix& combiner, double psi)
{
    return combiner * vandermonde(psi, static_cast<std::size_t>(combiner.cols()));
}

double estimate_psi_hybrid(const ComplexVector& a3_hat, const ComplexMatrix& combiner)
{
    if (combiner.rows() != a3_hat.size() || combiner.cols() == 0)
        throw std::invalid_argument("estimate_psi_hybrid: combiner rows must match the factor length");
    if (!(combiner.squaredNorm() > 0.0))
        throw DegenerateError("estimate_psi_hybrid: combiner is zero");
    // r(psi)^H a3 = sum_u e^{-j u psi} sum_m conj(r_mu) a3_m
    const ComplexVector f = combiner.transpose() * a3_hat.conjugate();
    std::vector<cplx> num(f.data(), f.data() + f.size());
    std::vector<cplx> den = row_autocorrelation(combiner);
    TrigPolyRatio ratio = [&] {
        try {
            return TrigPolyRatio::make(std::move(num), std::move(den));
        } catch (const std::invalid_argument&) {
            throw DegenerateError("estimate_psi_hybrid: combiner misses some arrival angles entirely");
        }
    }();
    return wrap_angle(max_unit_circle(ratio).omega);
}

ComplexVector refine_a1(const ComplexTensor& component, const ComplexVector& a2_hat, const ComplexVector& a3_hat)
{
    if (component.order() != 3 || static_cast<std::size_t>(a2_hat.size()) != component.dim(1) ||
        static_cast<std::size_t>(a3_hat.size()) != component.dim(2))
        throw std::invalid_argument("refine_a1: steering lengths do not match the component");
    const double scale = a2_hat.squaredNorm() * a3_hat.squaredNorm();
    if (!(scale > 0.0))
        throw DegenerateError("refine_a1: zero steering vector");
    const std::size_t nc = component.dim(0), ns = component.dim(1), dr = component.dim(2);
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(nc));
    for (std::size_t m = 0; m < dr; ++m)
        for (std::size_t t = 0; t < ns; ++t) {
            const cplx w = std::conj(a2_hat(static_cast<Eigen::Index>(t)) * a3_hat(static_cast<Eigen::Index>(m)));
            for (std::size_t n = 0; n < nc; ++n)
                out(static_cast<Eigen::Index>(n)) += w * component(n, t, m);
        }
    return out / scale;
}

HybridJade jade_hybrid(const ComplexVector& a1_hat, const PilotHybrid& pilot, const AcdConfig& cfg)
{
    const ComplexMatrix x = pilot.transmitted();
    if (x.rows() != a1_hat.size())
        throw std::invalid_argument("jade_hybrid: pilot subcarrier count does not match the factor");
    if (!(x.squaredNorm() > 0.0))
        throw DegenerateError("jade_hybrid: transmitted pilot is zero");
    // Stream codes are n_c-point DFT columns; a path seen through one Tx beam
    // confuses time of flight with shifts by multiples of 2 pi / n_c.
    const JadeFit fit = jade_fit_aliased(a1_hat, x, static_cast<std::size_t>(x.rows()), cfg);
    return {wrap_angle(fit.shift), wrap_angle(fit.angle), fit.gain, fit.objective};
}

PathEstimate hybrid_path_branch(const ComplexVector& a1, const ComplexVector& a2, const ComplexVector& a3,
                                const PilotHybrid& pilot, const EstimatorConfig& cfg)
{
    PathEstimate out;
    out.params.omega2 = esprit_tone(a2);
    out.params.psi = estimate_psi_hybrid(a3, pilot.r);
    const ComplexVector a2_hat = vandermonde(out.params.omega2, static_cast<std::size_t>(a2.size()));
    const ComplexVector a3_hat = combiner_response(pilot.r, out.params.psi);
    const ComplexTensor component = rank1_compose(a1, a2, a3);

    ComplexVector a1_hat;
    if (cfg.refine) {
        a1_hat = refine_a1(component, a2_hat, a3_hat);
    } else {
        // Single reference entry: first symbol, strongest RF chain.
        Eigen::Index m = 0;
        a3_hat.cwiseAbs().maxCoeff(&m);
        if (!(std::abs(a3_hat(m)) > 0.0))
            throw DegenerateError("hybrid branch: combiner response vanishes");
        a1_hat.resize(a1.size());
        for (Eigen::Index n = 0; n < a1.size(); ++n)
            a1_hat(n) = component(n, 0, m) / a3_hat(m);
    }

    const HybridJade jh = jade_hybrid(a1_hat, pilot, cfg.acd);
    out.params.omega1 = jh.omega1;
    out.params.varsigma = jh.varsigma;
    out.params.b = jh.b;
    out.objective = jh.objective;
    return out;
}

EstimationResult estimate_hybrid(const ComplexTensor& y, const PilotHybrid& pilot, const EstimatorConfig& cfg)
{
    if (y.order() != 3)
        throw std::invalid_argument("estimate_hybrid: observation must be n_c x n_s x d_r");
    if (static_cast<std::size_t>(pilot.s.rows()) != y.dim(0) || static_cast<std::size_t>(pilot.r.rows()) != y.dim(2))
        throw std::invalid_argument("estimate_hybrid: pilot does not match the observation");
    SystemDims dims;
    dims.n_c = y.dim(0);
    dims.n_s = y.dim(1);
    dims.n_r = static_cast<std::size_t>(pilot.r.cols());
    dims.n_t = static_cast<std::size_t>(pilot.p.rows());
    dims.d_t = static_cast<std::size_t>(pilot.p.cols());
    dims.d_r = static_cast<std::size_t>(pilot.r.rows());
    return detail::run_pipeline(y, dims, cfg, [&](const CpFactors& f, std::size_t k) {
        const auto c = static_cast<Eigen::Index>(k);
        return hybrid_path_branch(f.a1.col(c), f.a2.col(c), f.a3.col(c), pilot, cfg);
    });
}

} // namespace tvpce
