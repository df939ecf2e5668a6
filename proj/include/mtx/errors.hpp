#pragma once

#include <stdexcept>
#include <string>

namespace mtx {

enum class ErrorKind {
    domain,        // bad parameters or evaluation outside a map's domain
    degenerate,    // singular linear map, collapsed triangle
    capacity,      // depth or cell budget exceeded
    placement,     // ring family cannot be made disjoint
    budget,        // decomposition split budget exhausted
    io,
    verification,
    unsupported,
    estimation
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace mtx
