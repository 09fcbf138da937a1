#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace adcraft {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used in run records and CLI diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ADCRAFT_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

// model / io
ADCRAFT_DEFINE_ERROR(ImageError);
ADCRAFT_DEFINE_ERROR(InvalidArgument);

// layout
ADCRAFT_DEFINE_ERROR(MissingReference);
ADCRAFT_DEFINE_ERROR(MissingAssetSize);
ADCRAFT_DEFINE_ERROR(UnfixableOverflow);

// render
ADCRAFT_DEFINE_ERROR(MissingAsset);
ADCRAFT_DEFINE_ERROR(BadTemplate);
ADCRAFT_DEFINE_ERROR(RasterizerFailure);

// backends
ADCRAFT_DEFINE_ERROR(AuthError);
ADCRAFT_DEFINE_ERROR(RateLimited);
ADCRAFT_DEFINE_ERROR(MalformedResponse);
ADCRAFT_DEFINE_ERROR(UnsupportedSize);
ADCRAFT_DEFINE_ERROR(ProviderFailure);
ADCRAFT_DEFINE_ERROR(ConfigError);

// agents
ADCRAFT_DEFINE_ERROR(ObjectiveParseFailure);
ADCRAFT_DEFINE_ERROR(EmptyLogo);
ADCRAFT_DEFINE_ERROR(BlueprintFailure);

// eval
ADCRAFT_DEFINE_ERROR(ScoreParseFailure);
ADCRAFT_DEFINE_ERROR(DegenerateInput);

#undef ADCRAFT_DEFINE_ERROR

/// Reference graph contains a cycle; `ids()` lists the cycle members in
/// traversal order starting from the earliest element in the list.
class CyclicReference : public Error {
public:
    explicit CyclicReference(std::vector<std::string> ids);
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

/// Malformed line in a request file.
class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& reason);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Transport-level failure that the retry policy may retry.
class TransientError : public Error {
public:
    explicit TransientError(const std::string& message, bool rate_limited = false)
        : Error("TransientError", message), rate_limited_(rate_limited) {}
    bool rate_limited() const noexcept { return rate_limited_; }

private:
    bool rate_limited_;
};

} // namespace adcraft
