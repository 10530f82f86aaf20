// Copyright 2026 The FAN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes the planted-bias synthetic table as CSV.

#include <iostream>

#include <CLI11.hpp>

#include "fan/csv.h"
#include "fan/error.h"
#include "fan/synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate the planted-bias synthetic table"};
  fan::PlantedCopyOptions options;
  std::string out = "planted_copy.csv";
  app.add_option("--rows", options.rows, "number of rows");
  app.add_option("--seed", options.seed, "random seed");
  app.add_option("--linear-noise", options.linear_noise,
                 "noise on the linear proxies");
  app.add_option("--xor-flip", options.xor_flip,
                 "probability of breaking the XOR relation per row");
  app.add_option("--out", out, "output CSV path");
  CLI11_PARSE(app, argc, argv);
  try {
    fan::WriteCsv(fan::PlantedCopyTable(options), out);
  } catch (const fan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
