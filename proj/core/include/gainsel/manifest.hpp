/*
 * Copyright 2026 The gainsel Authors.
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
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gainsel/datamodel.hpp"

namespace gainsel {

/// Text form of a selection manifest. Tab-separated, one record per line:
///
///   gainsel-manifest  1
///   strategy          <name>
///   <config key>      <value>            (budget .. normalize)
///   filtered_out      <count>
///   filtered          <id>               (count lines)
///   clusters          <count>
///   cluster           <id> <size> <budget> <selected> <final entropy|->
///   selected          <count>
///   sample            <id> <cluster> <step> <entropy|->
///   end
///
/// Doubles are printed in shortest round-trip form, so output is a pure
/// function of the manifest. The worker count is not echoed, so output is
/// identical for any number of workers.
std::string serialize_manifest(const SelectionManifest& manifest);
void write_manifest(const SelectionManifest& manifest, const std::filesystem::path& path);

/// Parses serialize_manifest output. Row indices are not part of the format;
/// the returned records carry row = position in the selected list.
SelectionManifest parse_manifest(std::istream& in);

}  // namespace gainsel
