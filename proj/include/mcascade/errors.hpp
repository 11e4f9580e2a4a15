#pragma once

#include <stdexcept>
#include <string>

namespace mcas {

struct InvalidParams : std::runtime_error {
    explicit InvalidParams(const std::string& what) : std::runtime_error(what) {}
};

struct NotSubcritical : std::runtime_error {
    explicit NotSubcritical(const std::string& what) : std::runtime_error(what) {}
};

struct DepthTooLarge : std::runtime_error {
    explicit DepthTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct BadLevel : std::runtime_error {
    explicit BadLevel(const std::string& what) : std::runtime_error(what) {}
};

struct AllMassZero : std::runtime_error {
    explicit AllMassZero(const std::string& what) : std::runtime_error(what) {}
};

struct AllExtinct : std::runtime_error {
    explicit AllExtinct(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ToleranceUnachievable : std::runtime_error {
    explicit ToleranceUnachievable(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidFrequency : std::runtime_error {
    explicit InvalidFrequency(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSpeed : std::runtime_error {
    explicit DegenerateSpeed(const std::string& what) : std::runtime_error(what) {}
};

struct CurvatureVanishes : std::runtime_error {
    explicit CurvatureVanishes(const std::string& what) : std::runtime_error(what) {}
};

struct TooFewPoints : std::runtime_error {
    explicit TooFewPoints(const std::string& what) : std::runtime_error(what) {}
};

struct NonpositiveMagnitude : std::runtime_error {
    explicit NonpositiveMagnitude(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcas
