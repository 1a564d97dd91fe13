#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fiberlp {

// Linear solve rejected: matrix singular or condition estimate above the cap.
class SingularError : public std::runtime_error {
public:
    SingularError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

// Per-node failure: a fiber operator is singular, or a shift lambda sits in
// the numerical spectrum of some fiber. Carries the offending node index.
class NodeSingularError : public std::runtime_error {
public:
    NodeSingularError(const std::string& what, std::size_t node, double condition_estimate)
        : std::runtime_error(what), node_(node), condition_estimate_(condition_estimate) {}

    std::size_t node() const noexcept { return node_; }
    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    std::size_t node_;
    double condition_estimate_;
};

// Scenario config rejected; carries the path of the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string path)
        : std::runtime_error(what + " (at " + path + ")"), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace fiberlp
