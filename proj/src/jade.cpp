#include "tvpce/jade.hpp"

#include <stdexcept>

#include "tvpce/angles.hpp"

#include "tvpce/errors.hpp"

namespace tvpce {

namespace {

void check_shapes(const ComplexVector& y, const ComplexMatrix& weights)
{
    if (weights.rows() != y.size() || weights.cols() == 0)
        throw std::invalid_argument("jade: weights must have one row per observation sample");
}

std::vector<cplx> shift_coefficients(const ComplexVector& y, const ComplexMatrix& weights, double angle)
{
    const ComplexVector q = weights * vandermonde(angle, static_cast<std::size_t>(weights.cols()));
    std::vector<cplx> f(static_cast<std::size_t>(y.size()));
    for (Eigen::Index k = 0; k < y.size(); ++k)
        f[static_cast<std::size_t>(k)] = q(k) * std::conj(y(k));
    return f;
}

double shift_denominator(const ComplexMatrix& weights, double angle)
{
    return (weights * vandermonde(angle, static_cast<std::size_t>(weights.cols()))).squaredNorm();
}

std::vector<cplx> angle_coefficients(const ComplexVector& y, const ComplexMatrix& weights, double shift)
{
    const ComplexVector e = vandermonde(shift, static_cast<std::size_t>(y.size()));
    const ComplexVector f = weights.transpose() * e.cwiseProduct(y.conjugate());
    return {f.data(), f.data() + f.size()};
}

} // namespace

std::vector<cplx> row_autocorrelation(const ComplexMatrix& w)
{
    std::vector<cplx> g(static_cast<std::size_t>(w.cols()));
    for (Eigen::Index d = 0; d < w.cols(); ++d) {
        cplx acc{};
        for (Eigen::Index v = 0; v + d < w.cols(); ++v)
            acc += w.col(v).dot(w.col(v + d)); // sum_rows conj(w_v) w_{v+d}
        g[static_cast<std::size_t>(d)] = acc;
    }
    return g;
}

ComplexVector jade_steering(const ComplexMatrix& weights, double shift, double angle)
{
    const ComplexVector q = weights * vandermonde(angle, static_cast<std::size_t>(weights.cols()));
    return vandermonde(shift, static_cast<std::size_t>(weights.rows())).cwiseProduct(q);
}

double jade_objective(const ComplexVector& y, const ComplexMatrix& weights, double shift, double angle)
{
    check_shapes(y, weights);
    const ComplexVector beta = jade_steering(weights, shift, angle);
    const double nb = beta.squaredNorm();
    if (!(nb > 0.0))
        throw DegenerateError("jade: steering vector vanishes");
    return std::norm(beta.dot(y)) / nb;
}

cplx jade_gain(const ComplexVector& y, const ComplexMatrix& weights, double shift, double angle)
{
    check_shapes(y, weights);
    const ComplexVector beta = jade_steering(weights, shift, angle);
    const double nb = beta.squaredNorm();
    if (!(nb > 0.0))
        throw DegenerateError("jade: steering vector vanishes");
    return beta.dot(y) / nb;
}

TrigPolyRatio jade_slice(const ComplexVector& y, const ComplexMatrix& weights, std::size_t coordinate,
                         double fixed)
{
    check_shapes(y, weights);
    if (coordinate == 0)
        return TrigPolyRatio::make(shift_coefficients(y, weights, fixed),
                                   {cplx(shift_denominator(weights, fixed), 0.0)});
    if (coordinate == 1)
        return TrigPolyRatio::make(angle_coefficients(y, weights, fixed), row_autocorrelation(weights));
    throw std::invalid_argument("jade_slice: coordinate must be 0 or 1");
}

namespace {

SliceBuilder jade_builder(const ComplexVector& y, const ComplexMatrix& weights, std::vector<cplx> den)
{
    return [&y, &weights, den = std::move(den)](std::size_t coordinate, double fixed) {
        if (coordinate == 0)
            return TrigPolyRatio::make(shift_coefficients(y, weights, fixed),
                                       {cplx(shift_denominator(weights, fixed), 0.0)});
        return TrigPolyRatio::make(angle_coefficients(y, weights, fixed), den);
    };
}

std::vector<cplx> checked_denominator(const ComplexVector& y, const ComplexMatrix& weights)
{
    check_shapes(y, weights);
    if (!y.allFinite())
        throw std::domain_error("jade: non-finite observation");
    std::vector<cplx> den = row_autocorrelation(weights);
    try {
        (void)TrigPolyRatio::make({cplx{1.0, 0.0}}, den);
    } catch (const std::invalid_argument&) {
        throw DegenerateError("jade: pilot leaves some departure angles without energy");
    }
    return den;
}

JadeFit finish(const ComplexVector& y, const ComplexMatrix& weights, AcdResult acd)
{
    JadeFit fit;
    fit.acd = std::move(acd);
    fit.shift = fit.acd.omega_a;
    fit.angle = fit.acd.omega_b;
    fit.objective = fit.acd.objective;
    fit.gain = jade_gain(y, weights, fit.shift, fit.angle);
    return fit;
}

} // namespace

JadeFit jade_fit(const ComplexVector& y, const ComplexMatrix& weights, const AcdConfig& cfg)
{
    const auto build = jade_builder(y, weights, checked_denominator(y, weights));
    return finish(y, weights, acd_2d(build, cfg));
}

JadeFit jade_fit_from(const ComplexVector& y, const ComplexMatrix& weights, double shift, double angle,
                      const AcdConfig& cfg)
{
    const auto build = jade_builder(y, weights, checked_denominator(y, weights));
    return finish(y, weights, acd_2d_from(build, shift, angle, cfg));
}

JadeFit jade_fit_aliased(const ComplexVector& y, const ComplexMatrix& weights, std::size_t period,
                         const AcdConfig& cfg)
{
    JadeFit fit = jade_fit(y, weights, cfg);
    double best_screen = -1.0, best_shift = 0.0, best_angle = 0.0;
    for (std::size_t m = 1; m < period; ++m) {
        const double shift =
            wrap_angle(fit.shift + 2.0 * pi * static_cast<double>(m) / static_cast<double>(period));
        const auto s = max_unit_circle(jade_slice(y, weights, 1, shift));
        if (s.value > best_screen) {
            best_screen = s.value;
            best_shift = shift;
            best_angle = s.omega;
        }
    }
    if (best_screen > 0.0) {
        JadeFit alt = jade_fit_from(y, weights, best_shift, best_angle, cfg);
        if (alt.objective > fit.objective)
            fit = std::move(alt);
    }
    return fit;
}

} // namespace tvpce
