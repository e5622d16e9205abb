#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stnn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shape mismatch between tensors, matrices or vectors.
struct DimensionError : Error {
    using Error::Error;
};

/// Index outside the valid range of an axis.
struct IndexError : Error {
    using Error::Error;
};

/// Invalid configuration value (zero dimension, non-positive rate, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Invalid run-time argument (empty batch, empty fingerprint, ...).
struct ArgumentError : Error {
    using Error::Error;
};

/// Malformed input file. Carries the path and 1-based line number.
struct IngestError : Error {
    IngestError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what),
          path(path),
          line(line) {}

    std::string path;
    std::size_t line;
};

/// Corrupt or incompatible checkpoint file.
struct CheckpointError : Error {
    using Error::Error;
};

/// Negative sampling cannot produce the requested number of triples.
struct SamplingError : Error {
    using Error::Error;
};

/// Dataset cannot be split as requested.
struct SplitError : Error {
    using Error::Error;
};

/// Loss became non-finite during optimization.
struct TrainingDivergedError : Error {
    TrainingDivergedError(std::size_t epoch, double learning_rate)
        : Error("training diverged at epoch " + std::to_string(epoch) +
                " (learning rate " + std::to_string(learning_rate) + ")"),
          epoch(epoch),
          learning_rate(learning_rate) {}

    std::size_t epoch;
    double learning_rate;
};

/// Metric is undefined for the given input (e.g. single-class AUC).
struct MetricError : Error {
    using Error::Error;
};

}  // namespace stnn
