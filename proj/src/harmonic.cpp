#include "tvpce/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "tvpce/angles.hpp"
#include "tvpce/errors.hpp"

namespace tvpce {

namespace {

constexpr std::size_t check_grid = 1024;
constexpr std::size_t fallback_grid = 4096;
constexpr double root_band = 1e-6;
constexpr double coeff_trim = 1e-14;
constexpr double tie_tol = 1e-12;

// Two-sided Laurent sequence c[d + half] for lags d = -half..half.
struct Laurent {
    std::size_t half = 0;
    std::vector<cplx> c;

    cplx at(std::ptrdiff_t d) const
    {
        const auto h = static_cast<std::ptrdiff_t>(half);
        return (d < -h || d > h) ? cplx{} : c[static_cast<std::size_t>(d + h)];
    }

    // sum_d (j d)^order c_d e^{j d w}; real for Hermitian sequences.
    double eval(double w, int order) const
    {
        const auto h = static_cast<std::ptrdiff_t>(half);
        cplx acc{};
        for (std::ptrdiff_t d = -h; d <= h; ++d) {
            cplx term = c[static_cast<std::size_t>(d + h)] * std::polar(1.0, static_cast<double>(d) * w);
            for (int o = 0; o < order; ++o)
                term *= cplx(0.0, static_cast<double>(d));
            acc += term;
        }
        return acc.real();
    }
};

// |f(e^{jw})|^2 as a Laurent sequence.
Laurent squared_magnitude(const std::vector<cplx>& f)
{
    const std::size_t p = f.size() - 1;
    Laurent out{p, std::vector<cplx>(2 * p + 1)};
    for (std::size_t k = 0; k <= p; ++k)
        for (std::size_t l = 0; l <= p; ++l)
            out.c[k + p - l] += f[k] * std::conj(f[l]);
    return out;
}

Laurent hermitian(const std::vector<cplx>& den)
{
    if (den.empty())
        return Laurent{0, {cplx{1.0, 0.0}}};
    const std::size_t q = den.size() - 1;
    Laurent out{q, std::vector<cplx>(2 * q + 1)};
    out.c[q] = cplx(den[0].real(), 0.0);
    for (std::size_t d = 1; d <= q; ++d) {
        out.c[q + d] = den[d];
        out.c[q - d] = std::conj(den[d]);
    }
    return out;
}

// Coefficients of z^{p+q} (F'G - FG'), lowest power first (the common factor j dropped).
std::vector<cplx> stationarity_polynomial(const Laurent& f, const Laurent& g)
{
    const auto p = static_cast<std::ptrdiff_t>(f.half);
    const auto q = static_cast<std::ptrdiff_t>(g.half);
    std::vector<cplx> poly(static_cast<std::size_t>(2 * (p + q) + 1));
    for (std::ptrdiff_t a = -p; a <= p; ++a) {
        const cplx fa = f.at(a);
        if (fa == cplx{})
            continue;
        for (std::ptrdiff_t b = -q; b <= q; ++b) {
            const cplx gb = g.at(b);
            // d/dw of e^{j(a+b)w} split between F and G: (a - b) F_a G_b.
            poly[static_cast<std::size_t>(a + b + p + q)] += static_cast<double>(a - b) * fa * gb;
        }
    }
    return poly;
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs)
{
    double scale = 0.0;
    for (const auto& c : coeffs)
        scale = std::max(scale, std::abs(c));
    if (!(scale > 0.0))
        return {};
    std::size_t lo = 0;
    std::size_t hi = coeffs.size() - 1;
    while (lo < hi && std::abs(coeffs[lo]) <= coeff_trim * scale)
        ++lo;
    while (hi > lo && std::abs(coeffs[hi]) <= coeff_trim * scale)
        --hi;
    const auto m = static_cast<Eigen::Index>(hi - lo);
    if (m == 0)
        return {};
    ComplexMatrix companion = ComplexMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i + 1 < m; ++i)
        companion(i + 1, i) = 1.0;
    for (Eigen::Index i = 0; i < m; ++i)
        companion(i, m - 1) = -coeffs[lo + static_cast<std::size_t>(i)] / coeffs[hi];
    Eigen::ComplexEigenSolver<ComplexMatrix> eig(companion, false);
    const auto& ev = eig.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

struct Polisher {
    const TrigPolyRatio& r;
    Laurent f;
    Laurent g;
    double max_step;

    // Newton iterations on dJ/dw, kept only while J does not drop by more
    // than roundoff. J is flat to O(eps) near a peak, so a strict test would
    // stall the polish about sqrt(eps) away from the root.
    double operator()(double w) const
    {
        double jw = r.value(w);
        for (int it = 0; it < 8; ++it) {
            const double F = f.eval(w, 0), F1 = f.eval(w, 1), F2 = f.eval(w, 2);
            const double G = g.eval(w, 0), G1 = g.eval(w, 1), G2 = g.eval(w, 2);
            const double num1 = F1 * G - F * G1;
            const double d1 = num1 / (G * G);
            const double d2 = (F2 * G - F * G2) / (G * G) - 2.0 * G1 * num1 / (G * G * G);
            if (!(d2 < 0.0))
                break;
            const double step = -d1 / d2;
            if (!(std::abs(step) <= max_step))
                break;
            const double w2 = wrap_angle(w + step);
            const double j2 = r.value(w2);
            if (!(j2 >= jw - 8.0 * std::numeric_limits<double>::epsilon() * std::abs(jw)))
                break;
            w = w2;
            jw = j2;
            if (std::abs(step) < 1e-15)
                break;
        }
        return w;
    }
};

std::vector<cplx> grid_dft(const std::vector<cplx>& coeffs, std::size_t points)
{
    std::vector<cplx> padded(points, cplx{});
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        padded[i % points] += coeffs[i];
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<cplx> out;
    fft.inv(out, padded);
    return out;
}

} // namespace

TrigPolyRatio TrigPolyRatio::make(std::vector<cplx> num, std::vector<cplx> den)
{
    if (num.empty())
        throw std::invalid_argument("TrigPolyRatio: empty numerator");
    for (const auto& c : num)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::domain_error("TrigPolyRatio: non-finite numerator");
    for (const auto& c : den)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::domain_error("TrigPolyRatio: non-finite denominator");
    if (!den.empty())
        den[0] = cplx(den[0].real(), 0.0);
    TrigPolyRatio r(std::move(num), std::move(den));
    if (!r.den_.empty()) {
        std::vector<cplx> twice(r.den_.size());
        twice[0] = r.den_[0];
        for (std::size_t d = 1; d < r.den_.size(); ++d)
            twice[d] = 2.0 * r.den_[d];
        for (const auto& v : grid_dft(twice, std::max(check_grid, 4 * r.den_.size())))
            if (!(v.real() > 0.0))
                throw std::invalid_argument("TrigPolyRatio: denominator is not positive on the unit circle");
    }
    return r;
}

double TrigPolyRatio::numerator_value(double w) const
{
    const cplx z = std::polar(1.0, w);
    cplx acc{};
    for (std::size_t k = num_.size(); k-- > 0;)
        acc = acc * z + num_[k];
    return std::norm(acc);
}

double TrigPolyRatio::denominator_value(double w) const
{
    if (den_.empty())
        return 1.0;
    const cplx z = std::polar(1.0, w);
    cplx acc{};
    for (std::size_t d = den_.size(); d-- > 1;)
        acc = (acc + den_[d]) * z;
    return den_[0].real() + 2.0 * acc.real();
}

double TrigPolyRatio::value(double w) const { return numerator_value(w) / denominator_value(w); }

double grid_angle(std::size_t k, std::size_t points)
{
    return wrap_angle(2.0 * pi * static_cast<double>(k) / static_cast<double>(points));
}

std::vector<double> evaluate_on_grid(const TrigPolyRatio& r, std::size_t points)
{
    if (points == 0)
        throw std::invalid_argument("evaluate_on_grid: no points");
    const auto f = grid_dft(r.numerator(), points);
    std::vector<double> out(points);
    if (r.denominator().empty()) {
        for (std::size_t k = 0; k < points; ++k)
            out[k] = std::norm(f[k]);
        return out;
    }
    const auto& den = r.denominator();
    std::vector<cplx> twice(den.size());
    twice[0] = den[0];
    for (std::size_t d = 1; d < den.size(); ++d)
        twice[d] = 2.0 * den[d];
    const auto g = grid_dft(twice, points);
    for (std::size_t k = 0; k < points; ++k)
        out[k] = std::norm(f[k]) / g[k].real();
    return out;
}

UnitCircleMax max_unit_circle(const TrigPolyRatio& r)
{
    const auto& num = r.numerator();
    if (std::all_of(num.begin(), num.end(), [](const cplx& c) { return c == cplx{}; }))
        return {0.0, 0.0, true};

    const Laurent f = squared_magnitude(num);
    const Laurent g = hermitian(r.denominator());
    const Polisher polish{r, f, g, pi / static_cast<double>(f.half + g.half + 1)};

    std::vector<double> candidates;
    for (const auto& z : polynomial_roots(stationarity_polynomial(f, g)))
        if (std::abs(std::abs(z) - 1.0) < root_band)
            candidates.push_back(std::arg(z));

    const auto grid = evaluate_on_grid(r, fallback_grid);
    const auto best_k = static_cast<std::size_t>(std::max_element(grid.begin(), grid.end()) - grid.begin());
    candidates.push_back(grid_angle(best_k, fallback_grid));

    std::vector<std::pair<double, double>> scored;
    scored.reserve(candidates.size());
    double best = -std::numeric_limits<double>::infinity();
    for (double w : candidates) {
        const double wp = wrap_angle(polish(wrap_angle(w)));
        const double v = r.value(wp);
        scored.emplace_back(wp, v);
        best = std::max(best, v);
    }
    UnitCircleMax out{0.0, -1.0, false};
    const double cut = best - tie_tol * std::abs(best);
    for (const auto& [w, v] : scored) {
        if (v < cut)
            continue;
        if (out.value < 0.0 || std::abs(w) < std::abs(out.omega) ||
            (std::abs(w) == std::abs(out.omega) && v > out.value)) {
            out.omega = w;
            out.value = v;
        }
    }
    return out;
}

ComplexVector vandermonde(double omega, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("vandermonde: zero length");
    ComplexVector v(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k)
        v(static_cast<Eigen::Index>(k)) = std::polar(1.0, static_cast<double>(k) * omega);
    return v;
}

double esprit_tone(const ComplexVector& v)
{
    const Eigen::Index n = v.size();
    if (n < 3)
        throw std::invalid_argument("esprit_tone: need at least three samples");
    if (!v.allFinite())
        throw std::domain_error("esprit_tone: non-finite input");
    if (!(v.norm() > 0.0))
        throw DegenerateError("esprit_tone: zero vector");
    const Eigen::Index rows = (n + 1) / 2;
    const Eigen::Index cols = n - rows + 1;
    ComplexMatrix hankel(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            hankel(i, j) = v(i + j);
    Eigen::JacobiSVD<ComplexMatrix> svd(hankel, Eigen::ComputeThinU);
    const ComplexVector u = svd.matrixU().col(0);
    const auto head = u.head(rows - 1);
    const auto tail = u.tail(rows - 1);
    const cplx rho = head.dot(tail) / head.squaredNorm();
    return wrap_angle(std::arg(rho));
}

AcdResult acd_2d_from(const SliceBuilder& build_slice, double a, double b, const AcdConfig& cfg)
{
    if (cfg.max_sweeps == 0 || !(cfg.rel_tol > 0.0))
        throw std::invalid_argument("acd_2d: configuration values must be positive");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("acd_2d: non-finite start");
    AcdResult run;
    double obj = build_slice(0, b).value(a);
    run.history.push_back(obj);
    // One exact line search per coordinate. A move is taken only if it beats
    // the recorded objective, so the history is monotone even when two slices
    // through the same point round differently, and flat slices keep x.
    auto update = [&](std::size_t coordinate, double& x, double fixed) {
        const auto m = max_unit_circle(build_slice(coordinate, fixed));
        if (m.value > obj) {
            x = m.omega;
            obj = m.value;
        }
        run.history.push_back(obj);
    };
    for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        const double sweep_start = obj;
        update(0, a, b);
        update(1, b, a);
        run.sweeps = sweep + 1;
        if (obj - sweep_start <= cfg.rel_tol * std::abs(obj))
            break;
    }
    run.omega_a = a;
    run.omega_b = b;
    run.objective = obj;
    return run;
}

AcdResult acd_2d(const SliceBuilder& build_slice, const AcdConfig& cfg)
{
    if (cfg.max_sweeps == 0 || cfg.starts == 0 || cfg.grid_oversample == 0 || !(cfg.rel_tol > 0.0))
        throw std::invalid_argument("acd_2d: configuration values must be positive");

    const std::size_t na = cfg.grid_oversample * build_slice(0, 0.0).numerator().size();
    const std::size_t nb = cfg.grid_oversample * build_slice(1, 0.0).numerator().size();

    // grid(i, j): coordinate a at grid_angle(i, na), b at grid_angle(j, nb)
    Eigen::MatrixXd grid(na, nb);
    for (std::size_t j = 0; j < nb; ++j) {
        const auto col = evaluate_on_grid(build_slice(0, grid_angle(j, nb)), na);
        for (std::size_t i = 0; i < na; ++i)
            grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    }

    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> peaks;
    if (cfg.starts == 1) {
        Eigen::Index bi = 0, bj = 0;
        grid.maxCoeff(&bi, &bj);
        peaks.push_back({grid(bi, bj), {static_cast<std::size_t>(bi), static_cast<std::size_t>(bj)}});
    } else {
        for (std::size_t j = 0; j < nb; ++j) {
            for (std::size_t i = 0; i < na; ++i) {
                const double v = grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                bool is_peak = true;
                for (int di = -1; di <= 1 && is_peak; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        if (di == 0 && dj == 0)
                            continue;
                        const auto ii = static_cast<Eigen::Index>((i + na + static_cast<std::size_t>(di + 1) - 1) % na);
                        const auto jj = static_cast<Eigen::Index>((j + nb + static_cast<std::size_t>(dj + 1) - 1) % nb);
                        if (grid(ii, jj) > v) {
                            is_peak = false;
                            break;
                        }
                    }
                if (is_peak)
                    peaks.push_back({v, {i, j}});
            }
        }
        std::stable_sort(peaks.begin(), peaks.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
    }

    std::vector<std::pair<double, double>> starts;
    for (std::size_t s = 0; s < std::min(cfg.starts, peaks.size()); ++s)
        starts.emplace_back(grid_angle(peaks[s].second.first, na), grid_angle(peaks[s].second.second, nb));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(-pi, pi);
    while (starts.size() < cfg.starts)
        starts.emplace_back(wrap_angle(uni(rng)), wrap_angle(uni(rng)));

    AcdResult best;
    best.objective = -std::numeric_limits<double>::infinity();
    for (auto [a, b] : starts) {
        AcdResult run = acd_2d_from(build_slice, a, b, cfg);
        if (run.objective > best.objective)
            best = std::move(run);
    }
    return best;
}

} // namespace tvpce
