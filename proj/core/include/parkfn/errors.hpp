#pragma once

#include <stdexcept>
#include <string>

namespace parkfn {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input (empty sequence, bad index, ...).
struct InvalidInputError : Error {
    using Error::Error;
};

// Parent map does not describe a tree rooted at 0.
struct InvalidTreeError : InvalidInputError {
    using InvalidInputError::InvalidInputError;
};

// Code entry outside the admissible label range.
struct InvalidCodeError : InvalidInputError {
    using InvalidInputError::InvalidInputError;
};

// Request exceeds a hard size guard (combinatorial blowup protection).
struct SizeLimitError : Error {
    using Error::Error;
};

}  // namespace parkfn
