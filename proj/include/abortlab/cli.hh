/*
 * Copyright (c) 2026, The abortlab Authors
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

#ifndef ABORTLAB_CLI_HH_
#define ABORTLAB_CLI_HH_

namespace abortlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for `abortlab simulate|explore|replay|stress`.
int run_cli(int argc, char** argv);

}  // namespace abortlab

#endif  // ABORTLAB_CLI_HH_
