#include "qrmc/parallel.hpp"

#include <algorithm>
#include <mutex>

namespace qrmc {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_lanes(std::size_t lanes, int workers,
               const std::function<void(std::size_t)>& fn) {
    const int n_threads = std::min<std::size_t>(resolve_workers(workers), lanes);
    if (n_threads <= 1) {
        for (std::size_t lane = 0; lane < lanes; ++lane) fn(lane);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t lane = next.fetch_add(1, std::memory_order_relaxed);
            if (lane >= lanes) return;
            try {
                fn(lane);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace qrmc
