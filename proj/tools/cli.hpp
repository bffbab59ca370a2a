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

#include <ostream>
#include <string>
#include <vector>

namespace lazybum::cli {

// Runs one command line (program name first). Returns 0 on success, 2 for
// usage errors and 1 for data or validation errors; diagnostics go to `err`
// as a single line.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace lazybum::cli
