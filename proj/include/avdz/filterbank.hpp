#pragma once

#include <span>
#include <vector>

namespace avdz {

/// Raised-cosine half-band kernel ("savN"). The default is sav8 with beta 0.168.
struct KernelSpec {
    int order = 8;        // taps, even, >= 4
    double beta = 0.168;  // transition half-width, 0 < beta < r
    static constexpr double r = 0.5;

    int half_order() const { return order / 2; }
    /// Throws ConfigError unless order is even and >= 4 and 0 < beta < r.
    void validate() const;
};

/// Transfer function of the kernel on the frequency grid f in [0, k], k = N/2.
/// The cosine taper is evaluated on the normalized frequency f/k so the
/// response is continuous at (r - beta)k and (r + beta)k.
double kernel_response(const KernelSpec& spec, double f);

/// Low-pass prototype: real IDFT of the response sampled at N bins,
/// circularly centered and scaled to unit Euclidean norm.
std::vector<double> design_kernel(const KernelSpec& spec);

struct FilterQuadruple {
    std::vector<double> analysis_lo;
    std::vector<double> analysis_hi;
    std::vector<double> synthesis_lo;
    std::vector<double> synthesis_hi;

    std::size_t size() const { return analysis_lo.size(); }
};

/// Orthogonal two-channel bank from a low-pass prototype:
/// analysis_hi[n] = (-1)^n analysis_lo[N-1-n], synthesis = time reversal of analysis.
FilterQuadruple derive_quadruple(std::span<const double> lowpass);

/// sav kernel quadruple for a spec (design_kernel + derive_quadruple).
FilterQuadruple make_quadruple(const KernelSpec& spec);

struct Halves {
    std::vector<double> low;
    std::vector<double> high;
};

/// One analysis level with periodic extension:
/// low[k] = sum_n analysis_lo[n] x[(2k + n) mod L], likewise for high.
Halves split(std::span<const double> signal, const FilterQuadruple& q);

/// Inverse of split: upsample by two, convolve with the synthesis pair, sum.
std::vector<double> merge(std::span<const double> low, std::span<const double> high,
                          const FilterQuadruple& q);

} // namespace avdz
