#include "qabsorb/sine_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>
#include <utility>

#include "qabsorb/errors.hpp"

namespace qabsorb {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SineTransform::SineTransform(std::size_t m) : m_(m) {
    if (m == 0) throw ArgumentError("sine transform needs at least one point");
    buffer_ = static_cast<double*>(fftw_malloc(sizeof(double) * 2 * m));
    if (!buffer_) throw std::bad_alloc();

    const int n = static_cast<int>(m);
    const fftw_r2r_kind kind = FFTW_RODFT00;
    std::lock_guard lock(planner_mutex());
    // Two interleaved transforms: stride 2, distance 1 (real part, imaginary part).
    plan_ = fftw_plan_many_r2r(1, &n, 2, buffer_, nullptr, 2, 1, buffer_, nullptr, 2, 1, &kind, FFTW_ESTIMATE);
    if (!plan_) {
        fftw_free(buffer_);
        buffer_ = nullptr;
        throw NumericError("FFTW failed to plan a sine transform");
    }
}

SineTransform::~SineTransform() { release(); }

SineTransform::SineTransform(SineTransform&& other) noexcept
    : m_(std::exchange(other.m_, 0)),
      buffer_(std::exchange(other.buffer_, nullptr)),
      plan_(std::exchange(other.plan_, nullptr)) {}

SineTransform& SineTransform::operator=(SineTransform&& other) noexcept {
    if (this != &other) {
        release();
        m_ = std::exchange(other.m_, 0);
        buffer_ = std::exchange(other.buffer_, nullptr);
        plan_ = std::exchange(other.plan_, nullptr);
    }
    return *this;
}

void SineTransform::release() noexcept {
    if (plan_) {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
        plan_ = nullptr;
    }
    if (buffer_) {
        fftw_free(buffer_);
        buffer_ = nullptr;
    }
}

void SineTransform::apply(std::span<std::complex<double>> data) {
    if (data.size() != m_) throw ArgumentError("sine transform length mismatch");
    std::memcpy(buffer_, data.data(), sizeof(double) * 2 * m_);
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::memcpy(static_cast<void*>(data.data()), buffer_, sizeof(double) * 2 * m_);
}

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
    if (n == 0) throw ArgumentError("Fourier transform needs at least one point");
    buffer_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buffer_) throw std::bad_alloc();
    auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward_ || !inverse_) throw NumericError("FFTW failed to plan a Fourier transform");
}

FourierTransform::~FourierTransform() {
    {
        std::lock_guard lock(planner_mutex());
        if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
        if (inverse_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
    }
    if (buffer_) fftw_free(buffer_);
}

void FourierTransform::forward(std::span<std::complex<double>> data) {
    if (data.size() != n_) throw ArgumentError("Fourier transform length mismatch");
    std::copy(data.begin(), data.end(), buffer_);
    fftw_execute(static_cast<fftw_plan>(forward_));
    std::copy(buffer_, buffer_ + n_, data.begin());
}

void FourierTransform::inverse(std::span<std::complex<double>> data) {
    if (data.size() != n_) throw ArgumentError("Fourier transform length mismatch");
    std::copy(data.begin(), data.end(), buffer_);
    fftw_execute(static_cast<fftw_plan>(inverse_));
    std::copy(buffer_, buffer_ + n_, data.begin());
}

}  // namespace qabsorb
