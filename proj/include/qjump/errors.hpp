#ifndef QJUMP_ERRORS_HPP
#define QJUMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qjump {

// Error categories map onto the CLI exit codes: config 2, numerical 3,
// truncation overflow 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class TruncationOverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace qjump

#endif
