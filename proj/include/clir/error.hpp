// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace clir {

/// Base exception for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file; the message carries the path and line or offset.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Mismatched vector or matrix shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

}  // namespace clir
