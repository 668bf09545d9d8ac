#include "magfd/backend.hpp"

#include <condition_variable>
#include <mutex>
#include <thread>

namespace magfd {
namespace detail {

// Chunk claims happen under the mutex together with a generation check, so a
// worker that wakes late can never touch a job that has already completed.
// Chunks are coarse (a few per thread), so the per-claim lock is negligible.
struct ThreadPool::Impl {
    std::mutex mutex;
    std::condition_variable wake;
    std::condition_variable done;
    const std::function<void(std::size_t)>* job = nullptr;
    std::size_t chunkCount = 0;
    std::size_t nextChunk = 0;
    std::size_t pendingChunks = 0;
    std::uint64_t generation = 0;
    bool stopping = false;
    std::vector<std::thread> workers;

    void workerLoop() {
        std::uint64_t seen = 0;
        std::unique_lock lock(mutex);
        for (;;) {
            wake.wait(lock, [&] { return stopping || generation != seen; });
            if (stopping) return;
            seen = generation;
            const auto* fn = job;
            drainLocked(lock, *fn, seen);
        }
    }

    // Claims and runs chunks of generation g; the job pointer stays valid
    // because run() cannot return while any claimed chunk is unfinished.
    void drainLocked(std::unique_lock<std::mutex>& lock,
                     const std::function<void(std::size_t)>& fn, std::uint64_t g) {
        while (generation == g && nextChunk < chunkCount) {
            const std::size_t c = nextChunk++;
            lock.unlock();
            fn(c);
            lock.lock();
            if (--pendingChunks == 0) done.notify_all();
        }
    }
};

ThreadPool::ThreadPool(unsigned threads) : impl_(std::make_unique<Impl>()) {
    if (threads == 0) threads = 1;
    // The calling thread participates in every run(), so spawn one fewer.
    for (unsigned i = 1; i < threads; ++i)
        impl_->workers.emplace_back([this] { impl_->workerLoop(); });
}

ThreadPool::~ThreadPool() {
    {
        std::unique_lock lock(impl_->mutex);
        impl_->stopping = true;
    }
    impl_->wake.notify_all();
    for (auto& w : impl_->workers) w.join();
}

unsigned ThreadPool::size() const {
    return static_cast<unsigned>(impl_->workers.size()) + 1;
}

void ThreadPool::run(std::size_t chunks, const std::function<void(std::size_t)>& fn) {
    if (chunks == 0) return;
    std::unique_lock lock(impl_->mutex);
    impl_->job = &fn;
    impl_->chunkCount = chunks;
    impl_->nextChunk = 0;
    impl_->pendingChunks = chunks;
    const std::uint64_t g = ++impl_->generation;
    impl_->wake.notify_all();
    impl_->drainLocked(lock, fn, g);
    impl_->done.wait(lock, [&] { return impl_->pendingChunks == 0; });
}

} // namespace detail

Backend::Backend(BackendKind kind, unsigned threads) : kind_(kind) {
    if (kind == BackendKind::parallel) {
        if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
        pool_ = std::make_shared<detail::ThreadPool>(threads);
    }
}

unsigned Backend::threads() const { return pool_ ? pool_->size() : 1; }

} // namespace magfd
