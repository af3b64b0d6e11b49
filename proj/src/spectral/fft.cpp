#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <new>
#include <utility>

#include "response/common/error.hpp"

namespace response::spectral::detail {

FftBuffer::FftBuffer(std::size_t size)
    : data_(reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(std::max<std::size_t>(size, 1)))),
      size_(size) {
    if (data_ == nullptr) throw std::bad_alloc();
}

FftBuffer::~FftBuffer() { fftw_free(data_); }

void FftBuffer::zero() { std::fill(data_, data_ + size_, std::complex<double>{}); }

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const std::vector<int>& extents, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(extents, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::size_t points = 1;
        for (int e : extents) points *= static_cast<std::size_t>(e);
        FftBuffer scratch(points);
        // FFTW_ESTIMATE leaves the array untouched, so the scratch content is irrelevant.
        fftw_plan plan = fftw_plan_dft(static_cast<int>(extents.size()), extents.data(),
                                       reinterpret_cast<fftw_complex*>(scratch.data()),
                                       reinterpret_cast<fftw_complex*>(scratch.data()), sign, FFTW_ESTIMATE);
        if (plan == nullptr) throw NumericalError("FFTW could not create a plan");
        plans_.emplace(std::move(key), plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void transform_inplace(FftBuffer& buffer, const std::vector<int>& extents, int sign) {
    fftw_plan plan = plan_cache().get(extents, sign);
    auto* p = reinterpret_cast<fftw_complex*>(buffer.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace response::spectral::detail
