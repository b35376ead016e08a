/*
 * Copyright 2026 The yaqa-round Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef YAQA_ERROR_HPP
#define YAQA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace yaqa
{

enum class ErrorKind
{
  NotPositiveDefinite,
  BadBlockSize,
  NoConvergence,
  ZeroMatrix,
  ShapeMismatch,
  TooLarge,
  NotPowerOfTwo,
  EmptyData,
  InvalidArgument,
  Io,
};

const char *to_string(ErrorKind kind);

/// All library failures are reported through this exception; `kind()` is stable
/// and is what tests and the CLI dispatch on.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), _kind(kind)
  {
  }

  ErrorKind kind() const noexcept { return _kind; }

private:
  ErrorKind _kind;
};

} // namespace yaqa

#endif // YAQA_ERROR_HPP
