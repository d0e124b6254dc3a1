// Copyright 2026 The DouZero-CPP Authors
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

#ifndef DOUZERO_COMMON_ERROR_H_
#define DOUZERO_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace douzero {

// Root of every error thrown by the library. Each subclass names one failure
// kind so callers can catch exactly what they handle.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DOUZERO_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

// game
DOUZERO_DEFINE_ERROR(IllegalMove);
DOUZERO_DEFINE_ERROR(GameFinished);
DOUZERO_DEFINE_ERROR(PhaseError);
DOUZERO_DEFINE_ERROR(ParseError);
DOUZERO_DEFINE_ERROR(IllegalReplay);
// features
DOUZERO_DEFINE_ERROR(PositionMismatch);
DOUZERO_DEFINE_ERROR(BadHandSize);
// nn
DOUZERO_DEFINE_ERROR(ShapeMismatch);
DOUZERO_DEFINE_ERROR(NonFiniteLoss);
DOUZERO_DEFINE_ERROR(IoError);
DOUZERO_DEFINE_ERROR(VersionMismatch);
DOUZERO_DEFINE_ERROR(ChecksumMismatch);
// training
DOUZERO_DEFINE_ERROR(NonTerminalEpisode);
DOUZERO_DEFINE_ERROR(EmptyCorpus);
// eval
DOUZERO_DEFINE_ERROR(UnsupportedAgent);
// serve / cli
DOUZERO_DEFINE_ERROR(ConfigError);
DOUZERO_DEFINE_ERROR(CountMismatch);

#undef DOUZERO_DEFINE_ERROR

}  // namespace douzero

#endif  // DOUZERO_COMMON_ERROR_H_
