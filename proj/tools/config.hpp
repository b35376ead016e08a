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

// JSON <-> configuration types for the command-line driver. Every
// validation error names the offending field as a JSON path.

#ifndef YAQA_TOOLS_CONFIG_HPP
#define YAQA_TOOLS_CONFIG_HPP

#include "yaqa/experiment.hpp"

#include "json.hpp"

#include <string>

namespace yaqa::cli
{

using json = nlohmann::json;

QuantizerSpec parse_quantizer(const json &j, const std::string &path = "quantizer");
json to_json(const QuantizerSpec &q);

/// Missing fields keep their defaults; unknown fields are rejected.
ExperimentConfig parse_experiment_config(const json &j);
json to_json(const ExperimentConfig &c);

/// Reads and parses a JSON file; a parse error becomes InvalidArgument.
json load_json(const std::string &path);

} // namespace yaqa::cli

#endif // YAQA_TOOLS_CONFIG_HPP
