#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssm {

// Exit codes used by the CLI. Library code throws; main() maps.
enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 2,
    exit_io = 3,
    exit_diverged = 4,
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Read voltage exceeded the device threshold during inference.
struct ReadDisturbError : ValidationError {
    explicit ReadDisturbError(const std::string& what) : ValidationError(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct DivergedError : std::runtime_error {
    DivergedError(const std::string& what, std::size_t epoch)
        : std::runtime_error(what), epoch(epoch) {}
    std::size_t epoch;
};

}  // namespace ssm
