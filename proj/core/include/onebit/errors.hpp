// SPDX-License-Identifier: Apache-2.0
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace onebit {

// Invalid arguments are reported with std::invalid_argument, and the Cauchy-Schwarz
// boundary of the GLRT with std::overflow_error. The types below cover the rest.

/// The scene or data carries no usable energy (tr(ZZ^H) = 0, tr(XX^H) = 0).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadrature non-convergence, non positive-definite covariance and similar.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Monte Carlo run stopped early; `completed()` trials finished.
class PartialResultsError : public std::runtime_error {
public:
    PartialResultsError(const std::string& what, std::size_t completed)
        : std::runtime_error(what), completed_(completed) {}

    [[nodiscard]] std::size_t completed() const noexcept { return completed_; }

private:
    std::size_t completed_;
};

}  // namespace onebit
