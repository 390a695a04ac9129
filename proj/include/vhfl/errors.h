/*
 * Copyright 2026 The vhfl-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VHFL_ERRORS_H_
#define VHFL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace vhfl {

// Operand dimensions do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value violates a documented precondition (non-finite input, bad rate...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sample id is absent from a feature table it must be present in.
class MissingFeatureError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace vhfl

#endif  // VHFL_ERRORS_H_
