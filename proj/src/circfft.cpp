#include "plr/circfft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace plr {

using cd = std::complex<double>;

Radix2Fft::Radix2Fft(std::size_t size) : size_(size) {
    if (size == 0 || !std::has_single_bit(size)) throw std::invalid_argument("radix-2 FFT size must be a power of two");
    const auto log2n = static_cast<unsigned>(std::countr_zero(size));
    bitrev_.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t r = 0;
        for (unsigned bit = 0; bit < log2n; ++bit)
            if (i & (std::size_t{1} << bit)) r |= std::size_t{1} << (log2n - 1 - bit);
        bitrev_[i] = r;
    }
    twiddles_.resize(size / 2);
    for (std::size_t k = 0; k < size / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size);
        twiddles_[k] = {std::cos(angle), std::sin(angle)};
    }
}

void Radix2Fft::transform(std::span<cd> data, bool inverse) const {
    if (data.size() != size_) throw std::invalid_argument("FFT buffer has the wrong length");
    for (std::size_t i = 0; i < size_; ++i)
        if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
    for (std::size_t len = 2; len <= size_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = size_ / len;
        for (std::size_t start = 0; start < size_; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cd w = twiddles_[k * step];
                if (inverse) w = std::conj(w);
                const cd u = data[start + k];
                const cd t = w * data[start + k + half];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
    }
}

namespace {

std::size_t bluestein_size(std::size_t n) { return std::bit_ceil(2 * n - 1); }

}  // namespace

BluesteinDft::BluesteinDft(std::size_t n) : n_(n), fft_(bluestein_size(n == 0 ? 1 : n)) {
    if (n == 0) throw std::invalid_argument("DFT length must be >= 1");
    const std::size_t M = fft_.size();
    chirp_.resize(n);
    const auto two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t j = 0; j < n; ++j) {
        // j^2 mod 2n keeps the angle argument small and exact.
        const auto jj = (static_cast<std::uint64_t>(j) * j) % two_n;
        const double angle = -std::numbers::pi * static_cast<double>(jj) / static_cast<double>(n);
        chirp_[j] = {std::cos(angle), std::sin(angle)};
    }
    filter_spectrum_.assign(M, cd{});
    filter_spectrum_[0] = std::conj(chirp_[0]);
    for (std::size_t j = 1; j < n; ++j) {
        filter_spectrum_[j] = std::conj(chirp_[j]);
        filter_spectrum_[M - j] = std::conj(chirp_[j]);
    }
    fft_.forward(filter_spectrum_);
}

std::vector<cd> BluesteinDft::forward(std::span<const cd> x) const {
    if (x.size() != n_) throw std::invalid_argument("DFT input has the wrong length");
    const std::size_t M = fft_.size();
    std::vector<cd> work(M, cd{});
    for (std::size_t j = 0; j < n_; ++j) work[j] = x[j] * chirp_[j];
    fft_.forward(work);
    for (std::size_t i = 0; i < M; ++i) work[i] *= filter_spectrum_[i];
    fft_.inverse(work);
    const double scale = 1.0 / static_cast<double>(M);
    std::vector<cd> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = work[k] * scale * chirp_[k];
    return out;
}

std::vector<cd> BluesteinDft::inverse(std::span<const cd> x) const {
    std::vector<cd> conj_in(x.begin(), x.end());
    for (auto& v : conj_in) v = std::conj(v);
    auto out = forward(conj_in);
    for (auto& v : out) v = std::conj(v);
    return out;
}

ConvolutionPlan::ConvolutionPlan(const CirculantKernel& kernel, Strategy strategy)
    : n_(kernel.size()), strategy_(strategy) {
    if (n_ == 0) throw std::invalid_argument("circulant kernel is empty");
    if (strategy_ == Strategy::direct) {
        kernel_ = kernel.a;
        return;
    }
    dft_.emplace(n_);
    std::vector<cd> a(kernel.a.begin(), kernel.a.end());
    spectrum_ = dft_->forward(a);
}

std::vector<double> ConvolutionPlan::apply(std::span<const double> v) const {
    if (v.size() != n_)
        throw std::invalid_argument("circulant matvec: vector length " + std::to_string(v.size()) +
                                    " does not match kernel length " + std::to_string(n_));
    if (strategy_ == Strategy::direct) return circulant_matvec_direct(kernel_, v);

    std::vector<cd> x(v.begin(), v.end());
    auto spec = dft_->forward(x);
    for (std::size_t k = 0; k < n_; ++k) spec[k] *= spectrum_[k];
    const auto y = dft_->inverse(spec);
    std::vector<double> out(n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = y[i].real() * scale;
    return out;
}

ConvolutionPlan plan_for(std::size_t n, const CirculantKernel& kernel, std::size_t threshold) {
    if (n == 0) throw std::invalid_argument("plan length must be >= 1");
    if (kernel.size() != n) throw std::invalid_argument("kernel length does not match plan length");
    return ConvolutionPlan(kernel, n < threshold ? ConvolutionPlan::Strategy::direct
                                                 : ConvolutionPlan::Strategy::transform);
}

std::vector<double> circulant_matvec(const CirculantKernel& kernel, std::span<const double> v,
                                     const ConvolutionPlan& plan) {
    if (kernel.size() != plan.size()) throw std::invalid_argument("kernel and plan lengths differ");
    return plan.apply(v);
}

std::vector<double> circulant_matvec_direct(std::span<const double> kernel, std::span<const double> v) {
    const auto n = kernel.size();
    if (v.size() != n) throw std::invalid_argument("circulant matvec: length mismatch");
    std::vector<double> out(n, 0.0);
    const auto nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long ii = 0; ii < nn; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double acc = 0.0;
        // a[(i - j) mod n]: j <= i uses a[i - j], j > i wraps to a[n + i - j].
        for (std::size_t j = 0; j <= i; ++j) acc += kernel[i - j] * v[j];
        for (std::size_t j = i + 1; j < n; ++j) acc += kernel[n + i - j] * v[j];
        out[i] = acc;
    }
    return out;
}

}  // namespace plr
