// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cherry {

// Base for every error the toolkit raises on bad data. The CLI maps these
// to exit code 2; anything else is a usage or internal error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text: bad XML, wrong token count, bad CSV header.
struct ParseError : Error {
    using Error::Error;
};

// A value is syntactically fine but out of its allowed domain
// (confidence outside [0,1], unknown class id, maxval != 255).
struct ValueError : Error {
    using Error::Error;
};

// Invalid or empty geometry: inverted box, crop entirely off-image,
// zero-area box where a region is required.
struct GeometryError : Error {
    using Error::Error;
};

// image_id present on one side of a join but not the other.
struct JoinError : Error {
    using Error::Error;
};

// Statistical preconditions violated: constant series, n too small,
// zero ground truths, zero matched pairs.
struct StatsError : Error {
    using Error::Error;
};

// Filesystem-level failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace cherry
