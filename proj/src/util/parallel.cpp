#include "ragloop/util/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace ragloop::util {

std::vector<bool> parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn,
                               const std::atomic<bool>* cancel) {
    std::vector<char> ran(n, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto work = [&] {
        for (;;) {
            if (cancel && cancel->load()) return;
            {
                std::lock_guard lock(error_mu);
                if (first_error) return;
            }
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
                ran[i] = 1;
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    const std::size_t count = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (count == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(count);
        for (std::size_t t = 0; t < count; ++t) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return {ran.begin(), ran.end()};
}

} // namespace ragloop::util
