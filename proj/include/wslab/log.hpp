// Copyright 2026 The wslab Authors.
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

#ifndef WSLAB_LOG_HPP_
#define WSLAB_LOG_HPP_

#include <string_view>

namespace wslab {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold from WSLAB_LOG (error, warn, info, debug); warn when unset or
// unrecognized.
LogLevel log_threshold();
void log(LogLevel level, std::string_view message);

inline void log_info(std::string_view message) { log(LogLevel::kInfo, message); }
inline void log_debug(std::string_view message) { log(LogLevel::kDebug, message); }
inline void log_warn(std::string_view message) { log(LogLevel::kWarn, message); }

}  // namespace wslab

#endif  // WSLAB_LOG_HPP_
