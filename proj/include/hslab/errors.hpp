#pragma once

#include <stdexcept>
#include <string>

namespace hslab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InadmissibleBase : Error {
    explicit InadmissibleBase(const std::string& msg) : Error(msg) {}
};

struct NotPositive : Error {
    explicit NotPositive(const std::string& msg) : Error(msg) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

struct BadResolution : Error {
    explicit BadResolution(const std::string& msg) : Error(msg) {}
};

struct DivergentWeight : Error {
    explicit DivergentWeight(const std::string& msg) : Error(msg) {}
};

struct Divergent : Error {
    explicit Divergent(const std::string& msg) : Error(msg) {}
};

struct ZeroDenominator : Error {
    explicit ZeroDenominator(const std::string& msg) : Error(msg) {}
};

struct WrongP : Error {
    explicit WrongP(const std::string& msg) : Error(msg) {}
};

struct SupportOverlap : Error {
    explicit SupportOverlap(const std::string& msg) : Error(msg) {}
};

struct BadRadii : Error {
    explicit BadRadii(const std::string& msg) : Error(msg) {}
};

struct Diverged : Error {
    explicit Diverged(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace hslab
