#include "avdz/filterbank.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace avdz {

void KernelSpec::validate() const {
    if (order < 4 || order % 2 != 0)
        throw ConfigError("kernel order must be an even integer >= 4");
    if (!(beta > 0.0 && beta < r))
        throw ConfigError("kernel beta must lie in (0, 0.5)");
}

double kernel_response(const KernelSpec& spec, double f) {
    spec.validate();
    const double k = spec.half_order();
    if (f < 0.0 || f > k) throw ConfigError("kernel_response: frequency outside [0, k]");
    const double beta = spec.beta;
    const double r = KernelSpec::r;
    if (f <= (r - beta) * k) return 1.0;
    if (f <= (r + beta) * k)
        return std::cos(std::numbers::pi / (4.0 * beta) * (f / k - r + beta));
    return 0.0;
}

std::vector<double> design_kernel(const KernelSpec& spec) {
    spec.validate();
    const int n_taps = spec.order;
    std::vector<double> response(n_taps);
    for (int m = 0; m < n_taps; ++m)
        response[m] = kernel_response(spec, std::min(m, n_taps - m));

    // Zero-phase response, so the IDFT reduces to a cosine sum.
    std::vector<double> h(n_taps);
    for (int n = 0; n < n_taps; ++n) {
        double acc = 0.0;
        for (int m = 0; m < n_taps; ++m)
            acc += response[m] * std::cos(2.0 * std::numbers::pi * m * n / n_taps);
        h[n] = acc / n_taps;
    }

    std::vector<double> taps(n_taps);
    for (int n = 0; n < n_taps; ++n) taps[n] = h[(n + n_taps / 2) % n_taps];

    double norm = 0.0;
    for (double t : taps) norm += t * t;
    norm = std::sqrt(norm);
    for (double& t : taps) t /= norm;
    return taps;
}

FilterQuadruple derive_quadruple(std::span<const double> lowpass) {
    const std::size_t n = lowpass.size();
    if (n == 0 || n % 2 != 0) throw ConfigError("derive_quadruple: prototype length must be even");
    FilterQuadruple q;
    q.analysis_lo.assign(lowpass.begin(), lowpass.end());
    q.analysis_hi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = lowpass[n - 1 - i];
        q.analysis_hi[i] = (i % 2 == 0) ? v : -v;
    }
    q.synthesis_lo.assign(q.analysis_lo.rbegin(), q.analysis_lo.rend());
    q.synthesis_hi.assign(q.analysis_hi.rbegin(), q.analysis_hi.rend());
    return q;
}

FilterQuadruple make_quadruple(const KernelSpec& spec) {
    const auto taps = design_kernel(spec);
    return derive_quadruple(taps);
}

Halves split(std::span<const double> signal, const FilterQuadruple& q) {
    const std::size_t len = signal.size();
    if (len == 0 || len % 2 != 0) throw ConfigError("split: signal length must be even and non-zero");
    const std::size_t taps = q.size();
    Halves out;
    out.low.assign(len / 2, 0.0);
    out.high.assign(len / 2, 0.0);
    for (std::size_t k = 0; k < len / 2; ++k) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t n = 0; n < taps; ++n) {
            const double x = signal[(2 * k + n) % len];
            lo += q.analysis_lo[n] * x;
            hi += q.analysis_hi[n] * x;
        }
        out.low[k] = lo;
        out.high[k] = hi;
    }
    return out;
}

std::vector<double> merge(std::span<const double> low, std::span<const double> high,
                          const FilterQuadruple& q) {
    if (low.size() != high.size() || low.empty())
        throw ConfigError("merge: half-band lengths differ or are empty");
    const std::size_t len = 2 * low.size();
    const std::size_t taps = q.size();
    std::vector<double> out(len, 0.0);
    for (std::size_t k = 0; k < low.size(); ++k) {
        for (std::size_t p = 0; p < taps; ++p) {
            const std::size_t m = (2 * k + taps - 1 - p) % len;
            out[m] += low[k] * q.synthesis_lo[p] + high[k] * q.synthesis_hi[p];
        }
    }
    return out;
}

} // namespace avdz
