#pragma once

#include <stdexcept>
#include <string>

namespace sdnrm {

// Invalid topology, link, flow or contract data.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Kernel misuse, e.g. scheduling into the past.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario file problems. Carries the 1-based line when known.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

}  // namespace sdnrm
