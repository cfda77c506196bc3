#pragma once

// Circulant matrix-vector products of arbitrary length n.
//
// The fast construction multiplies a fixed circulant matrix (n = b^m - 1,
// never a power of two) by a new vector in every dimension. A plan caches the
// kernel spectrum; the length-n DFTs are evaluated with Bluestein's chirp-z
// embedding into a power-of-two FFT. A direct O(n^2) strategy is kept for
// small n and as the reference.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace plr {

/// First column of a circulant matrix: A[i][j] = a[(i - j) mod n].
struct CirculantKernel {
    std::vector<double> a;

    std::size_t size() const { return a.size(); }
};

/// Power-of-two complex FFT (iterative radix 2) with precomputed twiddles.
class Radix2Fft {
public:
    explicit Radix2Fft(std::size_t size);

    std::size_t size() const { return size_; }
    /// In place; inverse is unnormalized.
    void forward(std::span<std::complex<double>> data) const { transform(data, false); }
    void inverse(std::span<std::complex<double>> data) const { transform(data, true); }

private:
    void transform(std::span<std::complex<double>> data, bool inverse) const;

    std::size_t size_;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddles_;  // exp(-2 pi i k / size), k < size / 2
};

/// Length-n DFT for any n via Bluestein: X_k = sum_j x_j exp(-2 pi i j k / n).
class BluesteinDft {
public:
    explicit BluesteinDft(std::size_t n);

    std::size_t size() const { return n_; }
    std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) const;
    /// Unnormalized inverse.
    std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x) const;

private:
    std::size_t n_;
    Radix2Fft fft_;
    std::vector<std::complex<double>> chirp_;          // exp(-pi i j^2 / n)
    std::vector<std::complex<double>> filter_spectrum_;  // FFT of the conjugate chirp, wrapped
};

class ConvolutionPlan {
public:
    enum class Strategy { direct, transform };

    static constexpr std::size_t kDefaultThreshold = 512;

    ConvolutionPlan(const CirculantKernel& kernel, Strategy strategy);

    std::size_t size() const { return n_; }
    Strategy strategy() const { return strategy_; }

    /// out[i] = sum_j a[(i - j) mod n] v[j]. Throws std::invalid_argument on a
    /// length mismatch.
    std::vector<double> apply(std::span<const double> v) const;

private:
    std::size_t n_;
    Strategy strategy_;
    std::vector<double> kernel_;  // direct strategy
    std::vector<std::complex<double>> spectrum_;  // transform strategy: DFT_n(a)
    std::optional<BluesteinDft> dft_;
};

/// Direct below `threshold`, transform-based from there on.
ConvolutionPlan plan_for(std::size_t n, const CirculantKernel& kernel,
                         std::size_t threshold = ConvolutionPlan::kDefaultThreshold);

std::vector<double> circulant_matvec(const CirculantKernel& kernel, std::span<const double> v,
                                     const ConvolutionPlan& plan);

/// O(n^2) reference, parallel over output rows.
std::vector<double> circulant_matvec_direct(std::span<const double> kernel, std::span<const double> v);

}  // namespace plr
