#pragma once

#include <stdexcept>
#include <string>

namespace condrank {

/// Base of every error raised by the library. `category()` is a short
/// machine-parsable tag that the command-line front end prints verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    [[nodiscard]] const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define CONDRANK_DEFINE_ERROR(Name, tag)                                       \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& message) : Error(tag, message) {}     \
    }

CONDRANK_DEFINE_ERROR(InvalidInput, "invalid-input");
CONDRANK_DEFINE_ERROR(NotPositiveDefinite, "not-positive-definite");
CONDRANK_DEFINE_ERROR(NotPositiveSemidefinite, "not-psd");
CONDRANK_DEFINE_ERROR(SingularMatrix, "singular-matrix");
CONDRANK_DEFINE_ERROR(ResourceLimit, "resource-limit");
CONDRANK_DEFINE_ERROR(IncompleteGraph, "incomplete-graph");
CONDRANK_DEFINE_ERROR(UnsupportedCombination, "unsupported-combination");
CONDRANK_DEFINE_ERROR(UndefinedLoss, "undefined-loss");
CONDRANK_DEFINE_ERROR(Divergence, "divergence");
CONDRANK_DEFINE_ERROR(MalformedFile, "malformed-file");
CONDRANK_DEFINE_ERROR(VersionMismatch, "version-mismatch");
CONDRANK_DEFINE_ERROR(IoError, "io-error");

#undef CONDRANK_DEFINE_ERROR

}  // namespace condrank
