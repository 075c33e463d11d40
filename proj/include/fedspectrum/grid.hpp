#ifndef FEDSPECTRUM_GRID_HPP
#define FEDSPECTRUM_GRID_HPP
#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace fedspectrum {

/// Size of the resource-block grid: rows are frequency RBs, columns time RBs.
struct grid_dims {
    std::size_t n_freq = 50;
    std::size_t n_time = 100;

    constexpr std::size_t size() const noexcept { return n_freq * n_time; }
    constexpr bool valid() const noexcept { return n_freq >= 1 && n_time >= 1; }
    friend constexpr bool operator==(const grid_dims&, const grid_dims&) = default;
};

inline std::string to_string(grid_dims d) {
    return std::to_string(d.n_freq) + "x" + std::to_string(d.n_time);
}

inline void require_valid(grid_dims d) {
    if (!d.valid()) {
        throw parameter_error("grid dims must be at least 1x1, got " + to_string(d));
    }
}

inline void require_same_dims(grid_dims a, grid_dims b, const char* what) {
    if (a != b) {
        throw shape_error(std::string(what) + ": dimension mismatch " + to_string(a) + " vs " +
                          to_string(b));
    }
}

/// Row-major n_freq x n_time matrix.
template <typename T>
class grid {
public:
    using value_type = T;

    grid() = default;
    explicit grid(grid_dims dims, T fill = T{}) : dims_{dims}, data_(dims.size(), fill) {}

    grid_dims dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t f, std::size_t t) noexcept { return data_[f * dims_.n_time + t]; }
    const T& operator()(std::size_t f, std::size_t t) const noexcept {
        return data_[f * dims_.n_time + t];
    }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }
    std::span<T> row(std::size_t f) noexcept { return {data_.data() + f * dims_.n_time, dims_.n_time}; }
    std::span<const T> row(std::size_t f) const noexcept {
        return {data_.data() + f * dims_.n_time, dims_.n_time};
    }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    friend bool operator==(const grid&, const grid&) = default;

private:
    grid_dims dims_{};
    std::vector<T> data_;
};

using binary_grid = grid<std::uint8_t>;
using real_grid = grid<double>;

inline std::size_t count_ones(const binary_grid& g) {
    return static_cast<std::size_t>(std::count(g.begin(), g.end(), std::uint8_t{1}));
}

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_GRID_HPP
