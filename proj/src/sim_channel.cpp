#include "tvpce/sim_channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "tvpce/angles.hpp"
#include "tvpce/errors.hpp"
#include "tvpce/harmonic.hpp"

namespace tvpce {

namespace {

constexpr std::size_t max_separation_attempts = 10000;

double uniform_angle(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> uni(-pi, pi);
    double w = uni(rng);
    while (w == -pi)
        w = uni(rng);
    return w;
}

void add_noise(ComplexTensor& t, double n0, std::uint64_t seed)
{
    if (n0 < 0.0 || !std::isfinite(n0))
        throw std::invalid_argument("noise variance must be finite and non-negative");
    if (n0 == 0.0)
        return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(n0 / 2.0));
    for (auto& z : t.data())
        z += cplx(g(rng), g(rng));
}

ComplexTensor noiseless_digital(const ComplexTensor& h, const PilotDigital& pilot)
{
    if (h.order() != 4)
        throw std::invalid_argument("channel tensor must be order 4");
    const std::size_t nc = h.dim(0), ns = h.dim(1), nr = h.dim(2), nt = h.dim(3);
    if (static_cast<std::size_t>(pilot.p.rows()) != ns || static_cast<std::size_t>(pilot.p.cols()) != nt ||
        static_cast<std::size_t>(pilot.s.rows()) != nc || static_cast<std::size_t>(pilot.s.cols()) != ns)
        throw std::invalid_argument("digital pilot does not match channel dimensions");
    ComplexTensor y({nc, ns, nr});
    for (std::size_t v = 0; v < nt; ++v)
        for (std::size_t u = 0; u < nr; ++u)
            for (std::size_t t = 0; t < ns; ++t) {
                const cplx ptv = pilot.p(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(v));
                for (std::size_t n = 0; n < nc; ++n)
                    y(n, t, u) += h(n, t, u, v) * ptv;
            }
    for (std::size_t u = 0; u < nr; ++u)
        for (std::size_t t = 0; t < ns; ++t)
            for (std::size_t n = 0; n < nc; ++n)
                y(n, t, u) *= pilot.s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t));
    return y;
}

ComplexTensor noiseless_hybrid(const ComplexTensor& h, const PilotHybrid& pilot)
{
    if (h.order() != 4)
        throw std::invalid_argument("channel tensor must be order 4");
    const std::size_t nc = h.dim(0), ns = h.dim(1), nr = h.dim(2), nt = h.dim(3);
    const ComplexMatrix x = pilot.transmitted();
    if (static_cast<std::size_t>(x.rows()) != nc || static_cast<std::size_t>(x.cols()) != nt ||
        static_cast<std::size_t>(pilot.r.cols()) != nr)
        throw std::invalid_argument("hybrid pilot does not match channel dimensions");
    const auto dr = static_cast<std::size_t>(pilot.r.rows());

    // z_{ntu} = sum_v x_{nv} h_{ntuv}
    ComplexTensor z({nc, ns, nr});
    for (std::size_t v = 0; v < nt; ++v)
        for (std::size_t u = 0; u < nr; ++u)
            for (std::size_t t = 0; t < ns; ++t)
                for (std::size_t n = 0; n < nc; ++n)
                    z(n, t, u) += x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(v)) * h(n, t, u, v);
    ComplexTensor y({nc, ns, dr});
    for (std::size_t m = 0; m < dr; ++m)
        for (std::size_t u = 0; u < nr; ++u) {
            const cplx rmu = pilot.r(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(u));
            if (rmu == cplx{})
                continue;
            for (std::size_t t = 0; t < ns; ++t)
                for (std::size_t n = 0; n < nc; ++n)
                    y(n, t, m) += rmu * z(n, t, u);
        }
    return y;
}

double n0_for(const ComplexTensor& noiseless, double snr_db)
{
    const double power = noiseless.squared_norm() / static_cast<double>(noiseless.size());
    if (!(power > 0.0))
        throw DegenerateError("snr_to_n0: noiseless reception carries no energy");
    return power / std::pow(10.0, snr_db / 10.0);
}

// Unitary DFT beam k over `size` elements: exp(-j 2 pi k i / size) / sqrt(size).
cplx dft_beam(std::size_t k, std::size_t i, std::size_t size)
{
    return std::polar(1.0 / std::sqrt(static_cast<double>(size)),
                      -2.0 * pi * static_cast<double>((k * i) % size) / static_cast<double>(size));
}

} // namespace

void SystemDims::validate() const
{
    if (n_c == 0 || n_s == 0 || n_r == 0 || n_t == 0 || d_t == 0 || d_r == 0 || n_a_t == 0 || n_a_r == 0)
        throw std::invalid_argument("system dimensions must be positive");
}

void SystemDims::validate_hybrid() const
{
    validate();
    if (n_t != d_t * n_a_t)
        throw std::invalid_argument("hybrid mode needs n_t == d_t * n_a_t");
    if (n_r != d_r * n_a_r)
        throw std::invalid_argument("hybrid mode needs n_r == d_r * n_a_r");
}

ChannelParamSet draw_channel(const ChannelGenConfig& cfg)
{
    if (!(cfg.rician_scale > 0.0) || cfg.rician_noncentrality < 0.0 || cfg.min_separation < 0.0)
        throw std::invalid_argument("draw_channel: invalid gain or separation parameters");
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g(0.0, 1.0);

    ChannelParamSet out;
    std::size_t attempts = 0;
    while (out.paths.size() < cfg.l) {
        PathParams p;
        p.omega1 = uniform_angle(rng);
        p.omega2 = uniform_angle(rng);
        p.psi = uniform_angle(rng);
        p.varsigma = uniform_angle(rng);
        if (cfg.min_separation > 0.0) {
            const bool ok = std::all_of(out.paths.begin(), out.paths.end(), [&](const PathParams& q) {
                return angular_distance(p.omega1, q.omega1) >= cfg.min_separation &&
                       angular_distance(p.omega2, q.omega2) >= cfg.min_separation &&
                       angular_distance(p.psi, q.psi) >= cfg.min_separation &&
                       angular_distance(p.varsigma, q.varsigma) >= cfg.min_separation;
            });
            if (!ok) {
                if (++attempts > max_separation_attempts)
                    throw SeparationInfeasible("draw_channel: cannot place " + std::to_string(cfg.l) +
                                               " paths with the requested separation");
                continue;
            }
        }
        out.paths.push_back(p);
    }
    // Gains are drawn after the geometry so that separation retries do not
    // shift the gain sequence.
    for (auto& p : out.paths) {
        const double re = cfg.rician_noncentrality + cfg.rician_scale * g(rng);
        const double im = cfg.rician_scale * g(rng);
        p.b = std::polar(std::hypot(re, im), uniform_angle(rng));
    }
    if (!out.paths.empty()) {
        auto strongest = std::max_element(out.paths.begin(), out.paths.end(),
                                          [](const auto& x, const auto& y) { return std::abs(x.b) < std::abs(y.b); });
        strongest->b *= std::pow(10.0, cfg.los_boost_db / 20.0);
    }
    return out;
}

ComplexTensor channel_tensor(const ChannelParamSet& params, const SystemDims& d)
{
    d.validate();
    ComplexTensor h({d.n_c, d.n_s, d.n_r, d.n_t});
    for (const auto& p : params.paths) {
        const ComplexVector f[] = {p.b * vandermonde(p.omega1, d.n_c), vandermonde(p.omega2, d.n_s),
                                   vandermonde(p.psi, d.n_r), vandermonde(p.varsigma, d.n_t)};
        h += rank1_compose(std::span<const ComplexVector>(f));
    }
    return h;
}

PilotDigital make_pilot_digital(const SystemDims& d, std::uint64_t seed)
{
    d.validate();
    PilotDigital pilot;
    pilot.p.resize(static_cast<Eigen::Index>(d.n_s), static_cast<Eigen::Index>(d.n_t));
    for (std::size_t t = 0; t < d.n_s; ++t)
        for (std::size_t v = 0; v < d.n_t; ++v)
            pilot.p(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(v)) = dft_beam(t % d.n_t, v, d.n_t);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> quadrant(0, 3);
    pilot.s.resize(static_cast<Eigen::Index>(d.n_c), static_cast<Eigen::Index>(d.n_s));
    for (Eigen::Index t = 0; t < pilot.s.cols(); ++t)
        for (Eigen::Index n = 0; n < pilot.s.rows(); ++n)
            pilot.s(n, t) = std::polar(1.0, pi / 4.0 + quadrant(rng) * pi / 2.0);
    return pilot;
}

PilotHybrid make_pilot_hybrid(const SystemDims& d, std::uint64_t seed)
{
    d.validate_hybrid();
    if (d.d_t > d.n_c)
        throw std::invalid_argument("make_pilot_hybrid: more streams than subcarriers");
    std::vector<std::size_t> cols(d.n_c);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(cols.begin(), cols.end(), rng);
    cols.resize(d.d_t);
    std::sort(cols.begin(), cols.end());
    return make_pilot_hybrid(d, cols);
}

PilotHybrid make_pilot_hybrid(const SystemDims& d, const std::vector<std::size_t>& stream_columns)
{
    d.validate_hybrid();
    if (stream_columns.size() != d.d_t)
        throw std::invalid_argument("make_pilot_hybrid: need one DFT column per stream");
    for (std::size_t i = 0; i < stream_columns.size(); ++i) {
        if (stream_columns[i] >= d.n_c)
            throw std::invalid_argument("make_pilot_hybrid: DFT column out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (stream_columns[i] == stream_columns[j])
                throw std::invalid_argument("make_pilot_hybrid: DFT columns must be distinct");
    }

    PilotHybrid pilot;
    pilot.r = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.d_r), static_cast<Eigen::Index>(d.n_r));
    for (std::size_t m = 0; m < d.d_r; ++m)
        for (std::size_t i = 0; i < d.n_a_r; ++i)
            pilot.r(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m * d.n_a_r + i)) =
                dft_beam(m % d.n_a_r, i, d.n_a_r);

    pilot.p = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.n_t), static_cast<Eigen::Index>(d.d_t));
    for (std::size_t k = 0; k < d.d_t; ++k)
        for (std::size_t i = 0; i < d.n_a_t; ++i)
            pilot.p(static_cast<Eigen::Index>(k * d.n_a_t + i), static_cast<Eigen::Index>(k)) =
                dft_beam(k % d.n_a_t, i, d.n_a_t);

    pilot.s.resize(static_cast<Eigen::Index>(d.n_c), static_cast<Eigen::Index>(d.d_t));
    for (std::size_t k = 0; k < d.d_t; ++k)
        for (std::size_t n = 0; n < d.n_c; ++n)
            pilot.s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
                std::polar(1.0, -2.0 * pi * static_cast<double>((n * stream_columns[k]) % d.n_c) /
                                    static_cast<double>(d.n_c));
    return pilot;
}

DigitalReception receive_digital(const ComplexTensor& h, const PilotDigital& pilot, double n0, std::uint64_t seed)
{
    DigitalReception out;
    out.y = noiseless_digital(h, pilot);
    add_noise(out.y, n0, seed);
    out.a = out.y;
    for (std::size_t u = 0; u < out.a.dim(2); ++u)
        for (std::size_t t = 0; t < out.a.dim(1); ++t)
            for (std::size_t n = 0; n < out.a.dim(0); ++n)
                out.a(n, t, u) /= pilot.s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t));
    return out;
}

ComplexTensor receive_hybrid(const ComplexTensor& h, const PilotHybrid& pilot, double n0, std::uint64_t seed)
{
    ComplexTensor y = noiseless_hybrid(h, pilot);
    add_noise(y, n0, seed);
    return y;
}

double snr_to_n0(const ComplexTensor& h, const PilotDigital& pilot, double snr_db)
{
    return n0_for(noiseless_digital(h, pilot), snr_db);
}

double snr_to_n0(const ComplexTensor& h, const PilotHybrid& pilot, double snr_db)
{
    return n0_for(noiseless_hybrid(h, pilot), snr_db);
}

double relative_error(const ComplexTensor& h, const ComplexTensor& h_hat)
{
    const double ref = h.frobenius();
    if (!(ref > 0.0))
        throw DegenerateError("relative_error: reference tensor is zero");
    return (h - h_hat).frobenius() / ref;
}

} // namespace tvpce
