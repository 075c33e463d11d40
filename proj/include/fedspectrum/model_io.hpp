#ifndef FEDSPECTRUM_MODEL_IO_HPP
#define FEDSPECTRUM_MODEL_IO_HPP
#pragma once

#include <sstream>
#include <string>

#include "bytes.hpp"
#include "learner.hpp"

namespace fedspectrum {

/*
 * Model snapshot, also used as the in-process wire format:
 *
 *   fedspectrum-model v1\n
 *   arch <hidden_layers> <c1,c2,...> <kernel_h> <kernel_w> relu <input>\n
 *   per layer:
 *     layer <index> <out_ch> <in_ch> <kh> <kw>\n
 *     out*in*kh*kw weights then out_ch biases, f64 LE
 */
inline bytes::buffer serialize_model(const model_params& m) {
    bytes::buffer out;
    out.reserve(128 + m.parameter_count() * 8);
    bytes::put_text(out, "fedspectrum-model v1\n");
    std::string channels;
    for (std::size_t i = 0; i < m.arch.channels_per_layer.size(); ++i) {
        channels += (i ? "," : "") + std::to_string(m.arch.channels_per_layer[i]);
    }
    bytes::put_text(out, "arch " + std::to_string(m.arch.hidden_layers) + " " + channels + " " +
                             std::to_string(m.arch.kernel_h) + " " + std::to_string(m.arch.kernel_w) +
                             " relu " + to_string(m.arch.input) + "\n");
    for (std::size_t li = 0; li < m.layers.size(); ++li) {
        const auto& l = m.layers[li];
        bytes::put_text(out, "layer " + std::to_string(li) + " " + std::to_string(l.out_ch) + " " +
                                 std::to_string(l.in_ch) + " " + std::to_string(l.kh) + " " +
                                 std::to_string(l.kw) + "\n");
        for (double v : l.weights) bytes::put_f64_le(out, v);
        for (double v : l.biases) bytes::put_f64_le(out, v);
    }
    return out;
}

namespace detail {

inline std::size_t read_count(std::istringstream& in, const std::string& field) {
    long long v = -1;
    if (!(in >> v) || v < 0) {
        throw format_error("model snapshot: invalid " + field);
    }
    return static_cast<std::size_t>(v);
}

}  // namespace detail

inline model_params deserialize_model(std::span<const std::uint8_t> data) {
    if (data.empty()) {
        throw format_error("model snapshot: empty input");
    }
    bytes::reader in{data, "model snapshot"};
    if (const auto h = in.line("header"); h != "fedspectrum-model v1") {
        throw format_error("model snapshot: bad header '" + h + "'");
    }

    model_arch arch;
    {
        std::istringstream a{in.line("arch")};
        std::string tag, channels, act, input;
        a >> tag;
        if (tag != "arch") {
            throw format_error("model snapshot: expected arch line, got '" + tag + "'");
        }
        arch.hidden_layers = detail::read_count(a, "arch.hidden_layers");
        if (!(a >> channels)) {
            throw format_error("model snapshot: invalid arch.channels");
        }
        arch.channels_per_layer.clear();
        std::istringstream cs{channels};
        for (std::string c; std::getline(cs, c, ',');) {
            std::istringstream one{c};
            arch.channels_per_layer.push_back(detail::read_count(one, "arch.channels"));
        }
        arch.kernel_h = detail::read_count(a, "arch.kernel_h");
        arch.kernel_w = detail::read_count(a, "arch.kernel_w");
        if (!(a >> act) || act != "relu") {
            throw format_error("model snapshot: invalid arch.activation '" + act + "'");
        }
        if (!(a >> input) || (input != "raw" && input != "log_standardize")) {
            throw format_error("model snapshot: invalid arch.input '" + input + "'");
        }
        arch.input = input == "raw" ? input_transform::raw : input_transform::log_standardize;
        try {
            arch.validate();
        } catch (const parameter_error& e) {
            throw format_error(std::string("model snapshot: ") + e.what());
        }
    }

    model_params m = zeros_for(arch);
    for (std::size_t li = 0; li < m.layers.size(); ++li) {
        auto& l = m.layers[li];
        const auto prefix = "layer " + std::to_string(li);
        std::istringstream s{in.line(prefix.c_str())};
        std::string tag;
        s >> tag;
        if (tag != "layer") {
            throw format_error("model snapshot: expected layer line, got '" + tag + "'");
        }
        const auto idx = detail::read_count(s, prefix + " index");
        const auto out_ch = detail::read_count(s, prefix + " out_ch");
        const auto in_ch = detail::read_count(s, prefix + " in_ch");
        const auto kh = detail::read_count(s, prefix + " kh");
        const auto kw = detail::read_count(s, prefix + " kw");
        auto mismatch = [&](const char* field, std::size_t got, std::size_t want) {
            if (got != want) {
                throw format_error("model snapshot: " + prefix + " " + field + " is " + std::to_string(got) +
                                   ", arch implies " + std::to_string(want));
            }
        };
        mismatch("index", idx, li);
        mismatch("out_ch", out_ch, l.out_ch);
        mismatch("in_ch", in_ch, l.in_ch);
        mismatch("kh", kh, l.kh);
        mismatch("kw", kw, l.kw);
        for (auto& v : l.weights) v = in.f64_le("weights");
        for (auto& v : l.biases) v = in.f64_le("biases");
    }
    if (!in.at_end()) {
        throw format_error("model snapshot: trailing bytes after last layer");
    }
    return m;
}

inline void write_model(const std::string& path, const model_params& m) {
    bytes::write_file(path, serialize_model(m));
}

inline model_params read_model(const std::string& path) { return deserialize_model(bytes::read_file(path)); }

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_MODEL_IO_HPP
