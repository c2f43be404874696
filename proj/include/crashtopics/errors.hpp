#pragma once

#include <stdexcept>
#include <string>

namespace crashtopics {

// Error taxonomy maps onto the CLI exit-code contract:
//   data_error and friends -> exit 1, config/schema/usage -> exit 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data violates a contract (duplicate ids, empty vocabulary, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// The configured schema does not match the file (missing required column).
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

// Bad configuration: unknown stop tier, invalid fit parameters, missing paths.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Invalid argument to a numeric operation (empty sample list, K < 2, n > V).
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Records and model doc_ids do not line up.
class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace crashtopics
