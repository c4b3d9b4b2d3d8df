#include "tvpce/pce_digital.hpp"

#include <stdexcept>

#include "pipeline.hpp"
#include "tvpce/angles.hpp"
#include "tvpce/errors.hpp"
#include "tvpce/jade.hpp"

namespace tvpce {

ComplexVector refine_a2(const ComplexTensor& component, const ComplexVector& a1_hat, const ComplexVector& a3_hat)
{
    if (component.order() != 3 || static_cast<std::size_t>(a1_hat.size()) != component.dim(0) ||
        static_cast<std::size_t>(a3_hat.size()) != component.dim(2))
        throw std::invalid_argument("refine_a2: steering lengths do not match the component");
    const double scale = a1_hat.squaredNorm() * a3_hat.squaredNorm();
    if (!(scale > 0.0))
        throw DegenerateError("refine_a2: zero steering vector");
    const std::size_t nc = component.dim(0), ns = component.dim(1), nr = component.dim(2);
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(ns));
    for (std::size_t u = 0; u < nr; ++u) {
        const cplx w3 = std::conj(a3_hat(static_cast<Eigen::Index>(u)));
        for (std::size_t t = 0; t < ns; ++t) {
            cplx acc{};
            for (std::size_t n = 0; n < nc; ++n)
                acc += std::conj(a1_hat(static_cast<Eigen::Index>(n))) * component(n, t, u);
            out(static_cast<Eigen::Index>(t)) += w3 * acc;
        }
    }
    return out / scale;
}

DigitalJade jade_digital(const ComplexVector& a2_hat, const PilotDigital& pilot, const AcdConfig& cfg)
{
    if (pilot.p.rows() != a2_hat.size())
        throw std::invalid_argument("jade_digital: precoder rows must match the symbol count");
    if (!(pilot.p.squaredNorm() > 0.0))
        throw DegenerateError("jade_digital: precoder is zero");
    // The precoder repeats every n_t symbols, so a path whose departure angle
    // sits near a DFT beam is seen about once per block and Doppler is
    // aliased by multiples of 2 pi / n_t.
    const JadeFit fit = jade_fit_aliased(a2_hat, pilot.p, static_cast<std::size_t>(pilot.p.cols()), cfg);
    return {wrap_angle(fit.shift), wrap_angle(fit.angle), fit.gain, fit.objective};
}

PathEstimate digital_path_branch(const ComplexVector& a1, const ComplexVector& a2, const ComplexVector& a3,
                                 const PilotDigital& pilot, const EstimatorConfig& cfg)
{
    PathEstimate out;
    out.params.omega1 = esprit_tone(a1);
    out.params.psi = esprit_tone(a3);
    const ComplexVector a1_hat = vandermonde(out.params.omega1, static_cast<std::size_t>(a1.size()));
    const ComplexVector a3_hat = vandermonde(out.params.psi, static_cast<std::size_t>(a3.size()));
    const ComplexTensor component = rank1_compose(a1, a2, a3);

    ComplexVector a2_hat;
    if (cfg.refine) {
        a2_hat = refine_a2(component, a1_hat, a3_hat);
    } else {
        // Leading fibre only, i.e. the raw factor rescaled to unit leading
        // entries in modes 0 and 2.
        a2_hat.resize(a2.size());
        for (Eigen::Index t = 0; t < a2.size(); ++t)
            a2_hat(t) = component(0, t, 0);
    }

    const DigitalJade jd = jade_digital(a2_hat, pilot, cfg.acd);
    out.params.omega2 = jd.omega2;
    out.params.varsigma = jd.varsigma;
    out.params.b = jd.b;
    out.objective = jd.objective;
    return out;
}

EstimationResult estimate_digital(const ComplexTensor& a, const PilotDigital& pilot, const EstimatorConfig& cfg)
{
    if (a.order() != 3)
        throw std::invalid_argument("estimate_digital: observation must be n_c x n_s x n_r");
    if (static_cast<std::size_t>(pilot.p.rows()) != a.dim(1))
        throw std::invalid_argument("estimate_digital: pilot symbol count does not match the observation");
    SystemDims dims;
    dims.n_c = a.dim(0);
    dims.n_s = a.dim(1);
    dims.n_r = a.dim(2);
    dims.n_t = static_cast<std::size_t>(pilot.p.cols());
    return detail::run_pipeline(a, dims, cfg, [&](const CpFactors& f, std::size_t k) {
        const auto c = static_cast<Eigen::Index>(k);
        return digital_path_branch(f.a1.col(c), f.a2.col(c), f.a3.col(c), pilot, cfg);
    });
}

} // namespace tvpce
