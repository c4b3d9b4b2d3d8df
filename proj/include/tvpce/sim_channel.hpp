#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tvpce/tensor.hpp"

namespace tvpce {

struct SystemDims {
    std::size_t n_c = 31;  // subcarriers
    std::size_t n_s = 64;  // OFDM symbols
    std::size_t n_r = 16;  // receive antennas
    std::size_t n_t = 16;  // transmit antennas
    std::size_t d_t = 4;   // transmit streams (hybrid)
    std::size_t d_r = 4;   // receive RF chains (hybrid)
    std::size_t n_a_t = 4; // Tx subpanel size
    std::size_t n_a_r = 4; // Rx subpanel size

    void validate() const;        // all extents positive
    void validate_hybrid() const; // plus n_t == d_t n_a_t, n_r == d_r n_a_r
};

// Angular frequencies are radians per subcarrier / symbol / antenna.
struct PathParams {
    cplx b{0.0, 0.0};
    double omega1 = 0.0; // time of flight
    double omega2 = 0.0; // Doppler
    double psi = 0.0;    // angle of arrival
    double varsigma = 0.0; // angle of departure

    friend bool operator==(const PathParams&, const PathParams&) = default;
};

struct ChannelParamSet {
    std::vector<PathParams> paths;

    std::size_t l() const { return paths.size(); }
    friend bool operator==(const ChannelParamSet&, const ChannelParamSet&) = default;
};

struct PilotDigital {
    ComplexMatrix p; // n_s x n_t precoder p_{tv}
    ComplexMatrix s; // n_c x n_s unit-modulus grid s_{nt}
};

struct PilotHybrid {
    ComplexMatrix p; // n_t x d_t precoder p_{vd}
    ComplexMatrix s; // n_c x d_t stream symbols s_{nd}
    ComplexMatrix r; // d_r x n_r combiner r_{mu}

    // x_{nv} = sum_d p_{vd} s_{nd}, n_c x n_t.
    ComplexMatrix transmitted() const { return s * p.transpose(); }
};

struct ChannelGenConfig {
    std::size_t l = 10;
    double rician_noncentrality = 1e-6;
    double rician_scale = 5e-6;
    double los_boost_db = 10.0;
    double min_separation = 0.0; // per angular dimension, wrapped; 0 disables
    std::uint64_t seed = 0;
};

// Paths with i.i.d. uniform frequencies, Rician |b|, uniform phase and the
// strongest path boosted by los_boost_db.
ChannelParamSet draw_channel(const ChannelGenConfig& cfg);

// Order-4 n_c x n_s x n_r x n_t tensor
// h_{ntuv} = sum_l b_l exp(j(n w1_l + t w2_l + u psi_l + v varsigma_l)).
ComplexTensor channel_tensor(const ChannelParamSet& p, const SystemDims& d);

// Row t of the precoder is the unitary DFT beam (t mod n_t), so every beam is
// revisited once per block of n_t symbols. The resource grid is seeded
// unit-modulus QPSK.
PilotDigital make_pilot_digital(const SystemDims& d, std::uint64_t seed);

// DFT beams per subpanel for precoder and combiner; `seed` picks which
// n_c-point DFT columns carry the streams.
PilotHybrid make_pilot_hybrid(const SystemDims& d, std::uint64_t seed);

// Same, with explicit DFT column indices for the streams.
PilotHybrid make_pilot_hybrid(const SystemDims& d, const std::vector<std::size_t>& stream_columns);

struct DigitalReception {
    ComplexTensor y; // n_c x n_s x n_r received signal
    ComplexTensor a; // y_{ntu} / s_{nt}
};

DigitalReception receive_digital(const ComplexTensor& h, const PilotDigital& pilot, double n0,
                                 std::uint64_t seed);

// n_c x n_s x d_r received signal y_{ntm} = sum_{u,v} r_{mu} x_{nv} h_{ntuv} + w_{ntm}.
ComplexTensor receive_hybrid(const ComplexTensor& h, const PilotHybrid& pilot, double n0, std::uint64_t seed);

// Noise variance giving the requested per-entry SNR of the noiseless reception.
double snr_to_n0(const ComplexTensor& h, const PilotDigital& pilot, double snr_db);
double snr_to_n0(const ComplexTensor& h, const PilotHybrid& pilot, double snr_db);

// Relative Frobenius error ||h - h_hat|| / ||h||.
double relative_error(const ComplexTensor& h, const ComplexTensor& h_hat);

} // namespace tvpce
