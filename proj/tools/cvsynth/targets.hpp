/* Copyright 2026 The cvsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <string>
#include <vector>

#include "cvsynth/gateset.hpp"
#include "cvsynth/linalg.hpp"

namespace cvsynth::cli {

/// "file:<path>", "haar:<d>:<seed>" or a name from named_targets().
UMat parse_target(const std::string& spec);
std::vector<std::string> named_targets();

/// "v1q", "v2q", "v3q", "cc" or a gate set file path.
GateSet parse_gateset_spec(const std::string& spec);

/// Splits on commas, dropping empty pieces.
std::vector<std::string> split_list(const std::string& text);
std::vector<double> parse_doubles(const std::string& text);
std::vector<int> parse_ints(const std::string& text);

}  // namespace cvsynth::cli
