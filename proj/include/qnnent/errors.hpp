#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qnnent {

// Error taxonomy. The CLI maps these onto exit codes:
// InputError/ConfigError/SchemaError -> 2, ResourceError -> 3.

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed data supplied by the caller.
class InputError : public Error {
  public:
    using Error::Error;
};

/// Inconsistent configuration (missing positions, unknown activation, missing bound context).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A request that would exceed the dense-state or enumeration limits.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Operation on a state with zero norm or an empty support.
class DegenerateStateError : public Error {
  public:
    using Error::Error;
};

/// Operation called on an object that violates its documented precondition.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Schema violation in a JSON input; `path` is a JSON-pointer-like field path.
class SchemaError : public InputError {
  public:
    SchemaError(std::string path, const std::string &what)
        : InputError(path + ": " + what), path_(std::move(path)) {}
    [[nodiscard]] const std::string &path() const { return path_; }

  private:
    std::string path_;
};

namespace limits {

/// Dense-state site cap; QNNENT_MAX_SITES overrides the default of 22.
int max_sites();
void set_max_sites(int n);

/// Cap on the brute-force deep-layer enumeration of DBM amplitudes.
inline constexpr int max_deep = 20;

/// Bytes needed for a dense state of n sites (complex<double> amplitudes).
double dense_bytes(int n_sites);

/// Throws ResourceError (with a memory estimate) when n exceeds max_sites().
void require_dense(int n_sites, const std::string &what);

} // namespace limits

} // namespace qnnent
