#include "prcf/common.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <system_error>
#include <thread>

namespace prcf {

double normal01(Rng& rng) {
    // u1 is kept strictly positive so the log is finite.
    double u1 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

double parse_double(const std::string& text, const std::string& what) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    double value = 0.0;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || text.empty())
        throw std::runtime_error("cannot parse number '" + text + "' (" + what + ")");
    if (!std::isfinite(value))
        throw std::runtime_error("non-finite number '" + text + "' (" + what + ")");
    return value;
}

std::string quote_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string read_quoted_string(std::istream& in, const std::string& what) {
    in >> std::ws;
    if (in.get() != '"')
        throw std::runtime_error("expected quoted " + what);
    std::string out;
    for (;;) {
        int c = in.get();
        if (c == EOF)
            throw std::runtime_error("unterminated quoted " + what);
        if (c == '\\') {
            int e = in.get();
            if (e == EOF)
                throw std::runtime_error("dangling escape in quoted " + what);
            out.push_back(static_cast<char>(e));
        } else if (c == '"') {
            return out;
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
}

void parallel_for(std::size_t n, std::size_t n_threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (n_threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::size_t spawn = std::min(n_threads, n);
    std::vector<std::thread> pool;
    pool.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace prcf
