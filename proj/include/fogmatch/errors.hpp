#pragma once

#include <stdexcept>

namespace fogmatch {

struct InfeasibleDemand : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct CompletionInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimensions : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RoundingInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NoSaddle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace fogmatch
