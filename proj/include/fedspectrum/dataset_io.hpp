#ifndef FEDSPECTRUM_DATASET_IO_HPP
#define FEDSPECTRUM_DATASET_IO_HPP
#pragma once

#include <limits>
#include <sstream>
#include <string>

#include "bytes.hpp"
#include "spectrum_env.hpp"

namespace fedspectrum {

/*
 * Dataset snapshot:
 *
 *   fedspectrum-dataset v1 <n_freq> <n_time> <n_examples>\n
 *   per example: n_freq*n_time f64 LE energies, then n_freq*n_time mask bytes
 *
 * Both matrices are row-major (frequency rows). The format does not carry the
 * per-grid SNR, so loaded grids report snr_db = NaN.
 */
inline bytes::buffer serialize_dataset(const dataset& ds) {
    const auto dims = ds.dims();
    for (const auto& ex : ds.examples) {
        require_same_dims(ex.input.dims(), dims, "serialize_dataset");
        require_same_dims(ex.label.dims(), dims, "serialize_dataset");
    }
    bytes::buffer out;
    out.reserve(64 + ds.size() * dims.size() * 9);
    bytes::put_text(out, "fedspectrum-dataset v1 " + std::to_string(dims.n_freq) + " " +
                             std::to_string(dims.n_time) + " " + std::to_string(ds.size()) + "\n");
    for (const auto& ex : ds.examples) {
        for (double e : ex.input.energy) {
            bytes::put_f64_le(out, e);
        }
        out.insert(out.end(), ex.label.mask.begin(), ex.label.mask.end());
    }
    return out;
}

inline dataset deserialize_dataset(std::span<const std::uint8_t> data) {
    if (data.empty()) {
        throw format_error("dataset snapshot: empty input");
    }
    bytes::reader in{data, "dataset snapshot"};
    std::istringstream header{in.line("header")};
    std::string magic, version;
    long long n_freq = -1, n_time = -1, n_examples = -1;
    header >> magic >> version;
    if (magic != "fedspectrum-dataset") {
        throw format_error("dataset snapshot: bad magic '" + magic + "'");
    }
    if (version != "v1") {
        throw format_error("dataset snapshot: unsupported version '" + version + "'");
    }
    if (!(header >> n_freq) || n_freq < 1) {
        throw format_error("dataset snapshot: invalid n_freq in header");
    }
    if (!(header >> n_time) || n_time < 1) {
        throw format_error("dataset snapshot: invalid n_time in header");
    }
    if (!(header >> n_examples) || n_examples < 0) {
        throw format_error("dataset snapshot: invalid n_examples in header");
    }
    std::string trailing;
    if (header >> trailing) {
        throw format_error("dataset snapshot: trailing header field '" + trailing + "'");
    }

    const grid_dims dims{static_cast<std::size_t>(n_freq), static_cast<std::size_t>(n_time)};
    in.need(static_cast<std::size_t>(n_examples) * dims.size() * 9, "examples");

    dataset ds;
    ds.examples.reserve(static_cast<std::size_t>(n_examples));
    for (long long e = 0; e < n_examples; ++e) {
        labeled_example ex{energy_grid{real_grid{dims}, std::numeric_limits<double>::quiet_NaN()},
                           occupancy_pattern{binary_grid{dims}}};
        for (auto& v : ex.input.energy) {
            v = in.f64_le("energy");
        }
        for (auto& m : ex.label.mask) {
            m = in.u8("mask");
            if (m > 1) {
                throw format_error("dataset snapshot: mask byte out of range");
            }
        }
        ds.examples.push_back(std::move(ex));
    }
    if (!in.at_end()) {
        throw format_error("dataset snapshot: trailing bytes after last example");
    }
    return ds;
}

inline void write_dataset(const std::string& path, const dataset& ds) {
    bytes::write_file(path, serialize_dataset(ds));
}

inline dataset read_dataset(const std::string& path) { return deserialize_dataset(bytes::read_file(path)); }

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_DATASET_IO_HPP
