/*
 * Copyright 2026 The LazyBum Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
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

namespace lazybum {

// Base of every error the library throws. Callers that only need a
// diagnostic line can catch this and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (schema file, model document, CSV syntax).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a structural rule (dangling foreign key,
// missing target, duplicate names, invalid parameters).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Problems with table contents or files: I/O, header mismatch, bad tokens.
class DataError : public Error {
 public:
  using Error::Error;
};

// Model documents that cannot be used against the given schema.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A configured resource cap (such as the eager memory budget) was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace lazybum
