#ifndef FEDSPECTRUM_ERROR_HPP
#define FEDSPECTRUM_ERROR_HPP
#pragma once

#include <stdexcept>
#include <string>

namespace fedspectrum {

// Every failure raised by the library derives from fedspectrum::error so that
// callers (the CLI in particular) can report it uniformly.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented domain.
class parameter_error : public error {
public:
    using error::error;
};

/// Two grids, datasets, or tensors disagree in shape.
class shape_error : public error {
public:
    using error::error;
};

/// Malformed or truncated snapshot bytes.
class format_error : public error {
public:
    using error::error;
};

/// Invalid experiment configuration. Messages name the key and, when parsed
/// from text, the line.
class config_error : public error {
public:
    using error::error;
};

/// A loss or gradient became non-finite.
class numeric_error : public error {
public:
    using error::error;
};

/// Models that cannot be aggregated together (architecture mismatch).
class aggregation_error : public error {
public:
    using error::error;
};

class input_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_ERROR_HPP
