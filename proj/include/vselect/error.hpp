/*
 * Copyright (c) 2026, The vselect Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace vselect {

/// Process exit codes used by the command line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitValidation = 3,
    kExitComputation = 4,
    kExitIo = 5,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return kExitComputation; }
};

/// Malformed input text (CSV cells, headers, subset strings).
class ParseError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return kExitParse; }
};

/// Well-formed input that violates a documented precondition.
class ValidationError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return kExitValidation; }
};

class InvalidSubsetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Enumeration budget exceeded; the message names the subset count.
class BudgetExceededError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ComputationError : public Error {
public:
    using Error::Error;
};

class RankDeficientError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

/// Every candidate at one step of a greedy or sampling procedure was degenerate.
class DegenerateStepError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class IoError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return kExitIo; }
};

}  // namespace vselect
