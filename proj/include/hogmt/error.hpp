// SPDX-License-Identifier: Apache-2.0
//
// hogmt - joint spatio-temporal precoding for non-stationary channels
// Copyright (C) 2026 The hogmt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace hogmt
{
    // Base class for every error raised by the library.
    class error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Invalid argument values (non-finite entries, constraint violations).
    class validation_error : public error
    {
    public:
        using error::error;
    };

    // Index outside of its declared range.
    class bounds_error : public error
    {
    public:
        using error::error;
    };

    // Operand shapes do not agree.
    class dimension_error : public error
    {
    public:
        using error::error;
    };

    // SVD failure, degenerate channel, rank deficiency.
    class numerical_error : public error
    {
    public:
        using error::error;
    };

    // Malformed CTF file. offset() is the byte offset where decoding failed.
    class format_error : public error
    {
    public:
        format_error(const std::string &what, std::size_t offset)
            : error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
        std::size_t offset() const noexcept { return offset_; }

    private:
        std::size_t offset_;
    };

    // Bad run configuration; key() names the offending entry.
    class config_error : public error
    {
    public:
        config_error(const std::string &key, const std::string &what)
            : error(key + ": " + what), key_(key) {}
        const std::string &key() const noexcept { return key_; }

    private:
        std::string key_;
    };

    // File system failures (unreadable input, unwritable output).
    class io_error : public error
    {
    public:
        using error::error;
    };
}
