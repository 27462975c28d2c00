#pragma once

#include <stdexcept>
#include <string>

namespace covpath {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem trouble: unreadable file, unwritable directory.
struct IoError : Error {
    using Error::Error;
};

/// Malformed file contents (bad PGM header, payload size mismatch, ...).
struct FormatError : Error {
    using Error::Error;
};

/// Well-formed input that violates a domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// Metadata sidecar is missing a required key.
struct SchemaError : Error {
    using Error::Error;
};

/// A pipeline stage received or produced a map with no free space.
struct EmptyMapError : Error {
    using Error::Error;
};

/// Free space vanished before waypoints could be extracted.
struct EmptySkeletonError : Error {
    EmptySkeletonError(const std::string& what, std::string stage_name)
        : Error(what), stage(std::move(stage_name)) {}
    std::string stage;
};

/// No route between two vertices (disconnected graph).
struct NoPathError : Error {
    using Error::Error;
};

struct InvalidArgumentError : Error {
    using Error::Error;
};

/// FSM received an event that is not legal in the current state.
struct RejectedEventError : Error {
    using Error::Error;
};

struct SimFaultError : Error {
    using Error::Error;
};

}  // namespace covpath
