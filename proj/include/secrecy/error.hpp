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

#include <stdexcept>
#include <string>

namespace secrecy
{

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error
{
  public:
    using Error::Error;
};

/// An argument violates a documented precondition (ordering, positivity, range).
class PreconditionError : public Error
{
  public:
    using Error::Error;
};

/// A numerical procedure failed (singular factorization, no bracket, no convergence).
class NumericalError : public Error
{
  public:
    using Error::Error;
};

inline void require_dims(bool ok, const std::string &what)
{
    if (!ok)
        throw DimensionError("dimension mismatch: " + what);
}

inline void require(bool ok, const std::string &what)
{
    if (!ok)
        throw PreconditionError(what);
}

} // namespace secrecy
