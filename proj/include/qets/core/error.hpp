// Copyright 2026 The qets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace qets {

/// Base class for every error raised by the library. The category decides
/// the process exit code used by the command-line tool.
class Error : public std::runtime_error {
  public:
    enum class Category { validation, data_quality, capacity };

    Error(Category category, const std::string &what)
        : std::runtime_error(what), category_(category) {}

    [[nodiscard]] Category category() const noexcept { return category_; }

  private:
    Category category_;
};

/// Bad arguments, malformed input files, violated preconditions.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &what)
        : Error(Category::validation, what) {}
};

/// Inputs that parse but cannot support the requested computation
/// (empty overlaps, zero variance, filters that discard everything).
class DataQualityError : public Error {
  public:
    explicit DataQualityError(const std::string &what)
        : Error(Category::data_quality, what) {}
};

/// Requested problem exceeds a configured resource bound.
class CapacityError : public Error {
  public:
    explicit CapacityError(const std::string &what)
        : Error(Category::capacity, what) {}
};

[[nodiscard]] inline int exit_code(Error::Category category) noexcept {
    switch (category) {
    case Error::Category::validation:
        return 2;
    case Error::Category::data_quality:
        return 3;
    case Error::Category::capacity:
        return 4;
    }
    return 1;
}

} // namespace qets
