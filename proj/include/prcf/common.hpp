#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prcf {

// Dense row-major matrix of doubles. Kept deliberately minimal: the library
// only needs row access, element access and contiguous storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_.data() + r * cols_, cols_);
    }
    std::span<double> row(std::size_t r) {
        return std::span<double>(data_.data() + r * cols_, cols_);
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// splitmix64 finalizer. Used as the single seed-derivation primitive so that
// every random stream in the library is a pure function of (master seed, salt
// path) and nothing depends on library-specific distribution internals.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Child stream seed for a named substream. Derivations are chained, e.g.
// derive_seed(derive_seed(master, tree_index), attempt).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    return splitmix64(base ^ splitmix64(salt));
}

using Rng = std::mt19937_64;

// Draw from [0, n). Plain modulo: the bias is < 2^-40 for any n below 2^24
// and determinism matters more here than uniformity in the 12th decimal.
// std::uniform_int_distribution is avoided throughout because its output
// sequence is implementation-defined.
inline std::uint64_t bounded(Rng& rng, std::uint64_t n) {
    return rng() % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Standard normal via Box-Muller on explicit 53-bit uniforms.
double normal01(Rng& rng);

// In-place Fisher-Yates shuffle with the bounded draw above.
template <typename T>
void shuffle_inplace(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// Shortest text form of a double that parses back to the identical bits.
std::string format_double(double v);

// Fixed-point rendering with the given number of decimals.
std::string format_fixed(double v, int decimals);

// Strict full-string parse; throws std::runtime_error on garbage, empty
// input, trailing characters or non-finite values.
double parse_double(const std::string& text, const std::string& what);

// Double-quoted form with backslash escapes for '"' and '\'.
std::string quote_string(const std::string& s);

// Reads a quoted token (leading whitespace skipped); inverse of quote_string.
std::string read_quoted_string(std::istream& in, const std::string& what);

// Runs fn(i) for i in [0, n). With n_threads > 1 the iterations are handed
// out via an atomic counter; callers must make fn(i) write only to slot i so
// results are independent of scheduling.
void parallel_for(std::size_t n, std::size_t n_threads, const std::function<void(std::size_t)>& fn);

} // namespace prcf
