/*
 Copyright 2026 The oogrisk Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef OOGRISK_ERROR_HPP
#define OOGRISK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace oogrisk {

enum class ErrorKind {
    validation,  ///< malformed input: dimensions, ranges, schema
    domain,      ///< well-formed input outside the operation's domain
    solver,      ///< numerical failure that could not be recovered
    io           ///< file system / parse failure
};

const char* to_string(ErrorKind kind) noexcept;

/**
 * @brief Base error for the library.
 *
 * `where` names the offending block, field or file so that callers can
 * surface it without parsing the message.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string where, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& where() const noexcept { return where_; }

private:
    ErrorKind kind_;
    std::string where_;
};

class ValidationError : public Error {
public:
    ValidationError(std::string where, const std::string& message)
        : Error(ErrorKind::validation, std::move(where), message) {}
};

class DomainError : public Error {
public:
    DomainError(std::string where, const std::string& message)
        : Error(ErrorKind::domain, std::move(where), message) {}
};

class SolverError : public Error {
public:
    SolverError(std::string where, const std::string& message)
        : Error(ErrorKind::solver, std::move(where), message) {}
};

class IoError : public Error {
public:
    IoError(std::string where, const std::string& message)
        : Error(ErrorKind::io, std::move(where), message) {}
};

}  // namespace oogrisk

#endif  // OOGRISK_ERROR_HPP
