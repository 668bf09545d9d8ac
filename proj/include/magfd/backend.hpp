#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace magfd {

enum class BackendKind { serial, parallel };

inline std::string backendName(BackendKind k) {
    return k == BackendKind::serial ? "serial" : "parallel";
}

namespace detail {

class ThreadPool {
public:
    explicit ThreadPool(unsigned threads);
    ~ThreadPool();
    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned size() const;
    // Runs fn(0..chunks-1), each chunk exactly once; the caller participates
    // and the call blocks until all chunks finish.
    void run(std::size_t chunks, const std::function<void(std::size_t)>& fn);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace detail

// Execution backend: the single seam through which every module expresses
// parallelism.  The serial backend runs plain loops; the parallel backend
// owns the process' only thread pool and parallelizes over cells, FFT lines
// and spectral bins.  Reductions use a deterministic shape on both backends
// so results are reproducible run to run.
class Backend {
public:
    explicit Backend(BackendKind kind, unsigned threads = 0);

    BackendKind kind() const { return kind_; }
    unsigned threads() const;

    // Data-parallel map over [0, n).  fn must write only state owned by
    // index i (its own cell/line/bin); results are then identical to the
    // sequential loop, bitwise, on both backends.  Below parallelThreshold
    // items the loop runs inline; callers with coarse items (FFT passes)
    // lower it.
    template <class F>
    void forEach(std::size_t n, F&& fn, std::size_t parallelThreshold = 2048) const {
        if (!pool_ || n < 2 || n < parallelThreshold) {
            for (std::size_t i = 0; i < n; ++i) fn(i);
            return;
        }
        const std::size_t chunks = std::min<std::size_t>(n, std::size_t(threads()) * 8);
        const std::size_t per = (n + chunks - 1) / chunks;
        pool_->run(chunks, [&](std::size_t c) {
            const std::size_t lo = c * per;
            const std::size_t hi = std::min(n, lo + per);
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }

    // Sum of fn(0..n-1) in double.  Serial backend: left-to-right (the
    // reference ordering).  Parallel backend: fixed-size blocks summed
    // left-to-right, block partials combined by a pairwise tree whose shape
    // depends only on n — never on the thread count or schedule.
    template <class F>
    double reduceSum(std::size_t n, F&& fn) const {
        if (n == 0) throw std::invalid_argument("reduceSum: empty reduction");
        if (!pool_ || n <= kReduceBlock) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += fn(i);
            return s;
        }
        const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
        std::vector<double> partial(blocks);
        pool_->run(blocks, [&](std::size_t b) {
            const std::size_t lo = b * kReduceBlock;
            const std::size_t hi = std::min(n, lo + kReduceBlock);
            double s = 0;
            for (std::size_t i = lo; i < hi; ++i) s += fn(i);
            partial[b] = s;
        });
        return treeCombine(partial);
    }

    // Max of fn(0..n-1); max is associative so any schedule gives the exact
    // same result.
    template <class F>
    double reduceMax(std::size_t n, F&& fn) const {
        if (n == 0) throw std::invalid_argument("reduceMax: empty reduction");
        if (!pool_ || n <= kReduceBlock) {
            double m = fn(0);
            for (std::size_t i = 1; i < n; ++i) m = std::max(m, fn(i));
            return m;
        }
        const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
        std::vector<double> partial(blocks);
        pool_->run(blocks, [&](std::size_t b) {
            const std::size_t lo = b * kReduceBlock;
            const std::size_t hi = std::min(n, lo + kReduceBlock);
            double m = fn(lo);
            for (std::size_t i = lo + 1; i < hi; ++i) m = std::max(m, fn(i));
            partial[b] = m;
        });
        double m = partial[0];
        for (std::size_t b = 1; b < partial.size(); ++b) m = std::max(m, partial[b]);
        return m;
    }

    double reduceSum(std::span<const double> v) const {
        return reduceSum(v.size(), [&](std::size_t i) { return v[i]; });
    }
    double reduceMax(std::span<const double> v) const {
        return reduceMax(v.size(), [&](std::size_t i) { return v[i]; });
    }

private:
    static constexpr std::size_t kReduceBlock = 4096;

    static double treeCombine(std::vector<double>& p) {
        std::size_t m = p.size();
        while (m > 1) {
            const std::size_t half = m / 2;
            for (std::size_t i = 0; i < half; ++i) p[i] = p[2 * i] + p[2 * i + 1];
            if (m % 2) p[half] = p[m - 1];
            m = half + m % 2;
        }
        return p[0];
    }

    BackendKind kind_;
    std::shared_ptr<detail::ThreadPool> pool_; // null for serial
};

// Wall-clock phase breakdown of one time step, seconds.
struct StepTiming {
    double pad = 0, forwardFft = 0, spectralMultiply = 0, inverseFft = 0;
    double localFields = 0, integrate = 0, total = 0;

    double phaseSum() const {
        return pad + forwardFft + spectralMultiply + inverseFft + localFields + integrate;
    }
    StepTiming& operator+=(const StepTiming& o) {
        pad += o.pad;
        forwardFft += o.forwardFft;
        spectralMultiply += o.spectralMultiply;
        inverseFft += o.inverseFft;
        localFields += o.localFields;
        integrate += o.integrate;
        total += o.total;
        return *this;
    }
};

class PhaseClock {
public:
    PhaseClock() : start_(std::chrono::steady_clock::now()) {}
    // Seconds since construction or the previous lap() call.
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double dt = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return dt;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Times one step.  stepFn fills the per-phase fields; total is measured
// around the whole call, so total >= phase sum minus measurement slack.
template <class F>
StepTiming timeStep(F&& stepFn) {
    StepTiming t;
    PhaseClock clock;
    stepFn(t);
    t.total = clock.lap();
    return t;
}

} // namespace magfd
