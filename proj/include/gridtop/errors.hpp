#pragma once

#include <stdexcept>
#include <string>

namespace gridtop {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// grid-graph
struct NonConsecutiveLayers : Error { using Error::Error; };
struct OrphanChild : Error { using Error::Error; };
struct EmptyParentSet : Error { using Error::Error; };
struct MalformedColumn : Error { using Error::Error; };
struct NodeSetMismatch : Error { using Error::Error; };

// sim-gen
struct MissingChildRow : Error { using Error::Error; };
struct NonPositiveDistance : Error { using Error::Error; };
struct InfeasibleLoadSpec : Error { using Error::Error; };

// pca-core
struct SingularCovariance : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
struct SingularDependentBlock : Error { using Error::Error; };

// noise-est
struct EmptyPartition : Error { using Error::Error; };
struct NegativeVariance : Error { using Error::Error; };

// cli-io
struct LayerMetadataMissing : Error { using Error::Error; };

struct IoError : Error {
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what) {}
};

struct ParseError : Error {
    ParseError(const std::string& path, long line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_number(line) {}
    long line_number;
};

}  // namespace gridtop
