/*
 * Copyright 2026 The brcva Authors
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

#ifndef BRCVA_ERRORS_HPP
#define BRCVA_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace brcva {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition was violated by the caller.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// A numerical routine could not reach its tolerance.
class NumericalFailure : public Error {
  public:
    using Error::Error;
};

/// The conditioning event of a conditional law has zero probability.
class DegenerateConditioning : public NumericalFailure {
  public:
    using NumericalFailure::NumericalFailure;
};

/// Market quotes admit no non-negative hazard curve.
class ArbitrageError : public Error {
  public:
    ArbitrageError(const std::string& what, double tenor) : Error(what), tenor_(tenor) {}
    /// Tenor, in years, of the first quote that could not be fitted.
    double tenor() const { return tenor_; }

  private:
    double tenor_;
};

namespace detail {
[[noreturn]] inline void throw_invalid(const std::string& msg) { throw InvalidInput(msg); }
} // namespace detail

} // namespace brcva

#define BRCVA_REQUIRE(condition, message)                                      \
    do {                                                                       \
        if (!(condition)) {                                                    \
            std::ostringstream brcva_msg_;                                     \
            brcva_msg_ << message;                                             \
            ::brcva::detail::throw_invalid(brcva_msg_.str());                  \
        }                                                                      \
    } while (false)

#endif
