#pragma once

#include <stdexcept>
#include <string>

namespace osst {

// Error categories map 1:1 onto C API status codes and CLI exit codes.
enum class ErrorKind {
    Usage = 2,    // bad arguments, violated preconditions
    Backend = 3,  // transport failures, protocol violations, refusals
    Data = 4,     // malformed or inconsistent input data
    Internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error usage_error(std::string msg) { return Error(ErrorKind::Usage, std::move(msg)); }
inline Error backend_error(std::string msg) { return Error(ErrorKind::Backend, std::move(msg)); }
inline Error data_error(std::string msg) { return Error(ErrorKind::Data, std::move(msg)); }

}  // namespace osst
