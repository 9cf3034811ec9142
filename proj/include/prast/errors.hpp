// Copyright 2026 The prast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace prast {

// Exit codes used by the command line tool.
enum class ExitCode : int {
    Ok = 0,
    ConfigError = 2,
    IoError = 3,
    VerificationFailure = 4,
};

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, ExitCode code = ExitCode::ConfigError)
        : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

// Configuration or input-schema problems.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what, ExitCode::ConfigError) {}
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what, ExitCode::IoError) {}
};

class MissingFile : public IoError {
public:
    explicit MissingFile(const std::string& path)
        : IoError("missing file: " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NonFiniteVertex : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NotMonotone : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NonPositiveW : public Error {
public:
    explicit NonPositiveW(double w)
        : Error("projection with non-positive w (" + std::to_string(w) + "); near-plane split missing") {}
};

class ConfigMismatch : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what, ExitCode::ConfigError) {}
};

// Every SSIM window touched a masked pixel.
class EmptyMask : public Error {
public:
    EmptyMask() : Error("no unmasked SSIM window", ExitCode::VerificationFailure) {}
};

}  // namespace prast
