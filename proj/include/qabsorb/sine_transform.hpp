#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qabsorb {

/// In-place type-I discrete sine transform of complex data (real and
/// imaginary parts transformed independently), backed by FFTW RODFT00.
///
///   X_k = 2 sum_{j=0}^{m-1} x_j sin(pi (j+1)(k+1) / (m+1))
///
/// Applying it twice multiplies by 2(m+1). Instances own their plan and work
/// buffer and must not be shared between threads; construction is safe from
/// any thread.
class SineTransform {
public:
    explicit SineTransform(std::size_t m);
    ~SineTransform();

    SineTransform(const SineTransform&) = delete;
    SineTransform& operator=(const SineTransform&) = delete;
    SineTransform(SineTransform&& other) noexcept;
    SineTransform& operator=(SineTransform&& other) noexcept;

    std::size_t size() const { return m_; }

    /// Transforms `data` in place. data.size() must equal size().
    void apply(std::span<std::complex<double>> data);

private:
    void release() noexcept;

    std::size_t m_ = 0;
    double* buffer_ = nullptr;
    void* plan_ = nullptr;
};

/// Complex forward/inverse DFT pair of fixed length, used for Toeplitz
/// products. Same threading rules as SineTransform.
class FourierTransform {
public:
    explicit FourierTransform(std::size_t n);
    ~FourierTransform();

    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    std::size_t size() const { return n_; }

    /// Unnormalized forward transform, in place.
    void forward(std::span<std::complex<double>> data);
    /// Unnormalized inverse transform, in place (forward then inverse scales by n).
    void inverse(std::span<std::complex<double>> data);

private:
    std::size_t n_ = 0;
    std::complex<double>* buffer_ = nullptr;
    void* forward_ = nullptr;
    void* inverse_ = nullptr;
};

}  // namespace qabsorb
