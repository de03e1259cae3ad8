#include "beamlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace beamlab {

namespace {
std::atomic<unsigned> gWorkers{0};
}

void setWorkerCount(unsigned workers) noexcept { gWorkers = workers; }

unsigned workerCount() noexcept {
    unsigned w = gWorkers.load();
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    return w;
}

void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = unsigned(std::min<std::size_t>(workerCount(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureLock;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(failureLock);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace beamlab
