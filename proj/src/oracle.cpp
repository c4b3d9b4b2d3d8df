#include "tvpce/oracle.hpp"

#include <functional>
#include <stdexcept>

#include "tvpce/angles.hpp"
#include "tvpce/harmonic.hpp"
#include "tvpce/jade.hpp"
#include "tvpce/pce_hybrid.hpp"

namespace tvpce {

namespace {

using Steering = std::function<ComplexVector(double)>;

// sum over the other modes of |s(w)^H x|^2 / ||s(w)||^2, from the Gram matrix
// of the mode unfolding.
double periodogram(const ComplexMatrix& gram, const ComplexVector& s)
{
    return (s.adjoint() * gram * s).value().real() / s.squaredNorm();
}

double scan_mode(const ComplexTensor& t, std::size_t mode, const Steering& steering, std::size_t grid)
{
    const ComplexMatrix x = unfold(t, mode);
    const ComplexMatrix gram = x * x.adjoint();
    auto f = [&](double w) { return periodogram(gram, steering(w)); };
    std::size_t best_k = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < grid; ++k) {
        const double v = f(grid_angle(k, grid));
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    const double step = 2.0 * pi / static_cast<double>(grid);
    return wrap_angle(golden_section_max(f, grid_angle(best_k, grid), step, oracle_golden_steps));
}

// z_k = sum conj(u_i) conj(w_j) t(...) over the two modes other than `keep`,
// with u on the lower and w on the higher of them.
ComplexVector contract(const ComplexTensor& t, std::size_t keep, const ComplexVector& low, const ComplexVector& high)
{
    return unfold(t, keep) * khatri_rao(high, low).conjugate();
}

struct PairFit {
    double shift = 0.0;
    double angle = 0.0;
};

PairFit scan_pair(const ComplexVector& z, const ComplexMatrix& weights, std::size_t grid)
{
    double best = -1.0, shift = 0.0, angle = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const double s = grid_angle(j, grid);
        const auto col = evaluate_on_grid(jade_slice(z, weights, 0, s), grid);
        for (std::size_t i = 0; i < grid; ++i)
            if (col[i] > best) {
                best = col[i];
                shift = grid_angle(i, grid);
                angle = s;
            }
    }
    const double step = 2.0 * pi / static_cast<double>(grid);
    shift = golden_section_max([&](double w) { return jade_objective(z, weights, w, angle); }, shift, step,
                               oracle_golden_steps);
    angle = golden_section_max([&](double v) { return jade_objective(z, weights, shift, v); }, angle, step,
                               oracle_golden_steps);
    return {wrap_angle(shift), wrap_angle(angle)};
}

void check_grid(std::size_t grid)
{
    if (grid < 4)
        throw std::invalid_argument("oracle_single_path: need at least 4 grid points per dimension");
}

} // namespace

PathParams oracle_single_path(const ComplexTensor& a, const PilotDigital& pilot, std::size_t grid_points)
{
    check_grid(grid_points);
    if (a.order() != 3 || static_cast<std::size_t>(pilot.p.rows()) != a.dim(1))
        throw std::invalid_argument("oracle_single_path: observation does not match the digital pilot");
    const std::size_t nc = a.dim(0), nr = a.dim(2);

    PathParams out;
    out.omega1 = scan_mode(a, 0, [nc](double w) { return vandermonde(w, nc); }, grid_points);
    out.psi = scan_mode(a, 2, [nr](double w) { return vandermonde(w, nr); }, grid_points);
    const ComplexVector z = contract(a, 1, vandermonde(out.omega1, nc), vandermonde(out.psi, nr));
    const PairFit pair = scan_pair(z, pilot.p, grid_points);
    out.omega2 = pair.shift;
    out.varsigma = pair.angle;
    out.b = jade_gain(z, pilot.p, pair.shift, pair.angle) / static_cast<double>(nc * nr);
    return out;
}

PathParams oracle_single_path(const ComplexTensor& y, const PilotHybrid& pilot, std::size_t grid_points)
{
    check_grid(grid_points);
    const ComplexMatrix x = pilot.transmitted();
    if (y.order() != 3 || static_cast<std::size_t>(x.rows()) != y.dim(0) ||
        static_cast<std::size_t>(pilot.r.rows()) != y.dim(2))
        throw std::invalid_argument("oracle_single_path: observation does not match the hybrid pilot");
    const std::size_t ns = y.dim(1);

    PathParams out;
    out.omega2 = scan_mode(y, 1, [ns](double w) { return vandermonde(w, ns); }, grid_points);
    out.psi = scan_mode(y, 2, [&](double w) { return combiner_response(pilot.r, w); }, grid_points);
    const ComplexVector r = combiner_response(pilot.r, out.psi);
    const ComplexVector z = contract(y, 0, vandermonde(out.omega2, ns), r);
    const PairFit pair = scan_pair(z, x, grid_points);
    out.omega1 = pair.shift;
    out.varsigma = pair.angle;
    out.b = jade_gain(z, x, pair.shift, pair.angle) / (static_cast<double>(ns) * r.squaredNorm());
    return out;
}

} // namespace tvpce
