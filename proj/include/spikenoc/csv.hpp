/*
 * Copyright 2026 The spikenoc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace spikenoc::csv {

// Locale-independent double formatting; %.12g keeps integral tick values and
// shares readable while staying deterministic across runs.
inline std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return std::string(buf);
}

inline std::string join_row(const std::vector<std::string> &fields)
{
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i != 0)
        {
            row += ',';
        }
        row += fields[i];
    }
    row += '\n';
    return row;
}

} // namespace spikenoc::csv
