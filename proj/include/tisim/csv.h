// Copyright 2026 The tisim Authors
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

#ifndef TISIM_CSV_H
#define TISIM_CSV_H

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace tisim {

/// RFC 4180 field: quoted iff it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

/// Writes one record terminated by CRLF.
void write_csv_row(std::ostream &out, std::initializer_list<std::string_view> fields);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

}  // namespace tisim

#endif  // TISIM_CSV_H
