#pragma once

#include <stdexcept>
#include <string>

namespace teflow {

/// Raised for bad or missing input data (files, tickers, too-short series).
/// The CLI maps it to exit status 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace teflow
