#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gv {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a tensor does not fit the layer (or network) it is fed to.
/// `layer_index()` is the position of the offending layer in its network, or
/// npos when the mismatch is at the network boundary.
class ShapeError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit ShapeError(const std::string &what, std::size_t layer = npos)
        : Error(layer == npos ? what : "layer " + std::to_string(layer) + ": " + what),
          _layer(layer) {}

    std::size_t layer_index() const noexcept { return _layer; }

private:
    std::size_t _layer;
};

/// Malformed or inconsistent file (manifest, blob, proof map, image).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Solver failure that cannot be expressed as a verdict, e.g. a non-finite
/// network output inside a cell.
class VerifierError : public Error {
public:
    using Error::Error;
};

} // namespace gv
