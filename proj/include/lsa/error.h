// Error types shared by every module. Each error carries a kind that the
// command-line front end maps onto a stable exit code.

#ifndef LSA_ERROR_H_
#define LSA_ERROR_H_

#include <stdexcept>
#include <string>

namespace lsa {

enum class ErrorKind {
    kInternal,    // exit 1
    kParameter,   // exit 2
    kLookup,      // exit 3
    kValidation,  // exit 4
    kFormat,      // exit 5
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Bad argument values (k out of range, invalid prefix length, x == y...).
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string &message)
        : Error(ErrorKind::kParameter, message) {}
};

// A word (or pair) is not known where it must be.
class LookupError : public Error {
public:
    explicit LookupError(const std::string &message)
        : Error(ErrorKind::kLookup, message) {}
};

// Inputs are well formed but violate a precondition of the run.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string &message)
        : Error(ErrorKind::kValidation, message) {}
};

// Malformed or undecodable input files.
class InputError : public Error {
public:
    explicit InputError(const std::string &message)
        : Error(ErrorKind::kFormat, message) {}
};

class EmptyCorpusError : public InputError {
public:
    EmptyCorpusError() : InputError("corpus contains no paragraphs") {}
};

// Operation applied in the wrong order or to an object in the wrong state.
class StateError : public Error {
public:
    explicit StateError(const std::string &message)
        : Error(ErrorKind::kParameter, message) {}
};

// Cosine involving a zero vector.
class UndefinedSimilarityError : public Error {
public:
    explicit UndefinedSimilarityError(const std::string &message)
        : Error(ErrorKind::kValidation, message) {}
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::kParameter: return 2;
    case ErrorKind::kLookup: return 3;
    case ErrorKind::kValidation: return 4;
    case ErrorKind::kFormat: return 5;
    case ErrorKind::kInternal: break;
    }
    return 1;
}

}  // namespace lsa

#endif  // LSA_ERROR_H_
