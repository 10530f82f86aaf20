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

#ifndef FAN_METRICS_H_
#define FAN_METRICS_H_

#include <string>
#include <string_view>

#include "fan/fan.h"

namespace fan {

// Trace CSV: one row per epoch with columns
//   epoch,mse,d_current,d_hat,l_a,ratchet_best,d_bar,baseline
// Absent values (d_bar off audit epochs, ratchet_best during warm-up, a
// missing baseline) are blank cells.
inline constexpr std::string_view kTraceHeader =
    "epoch,mse,d_current,d_hat,l_a,ratchet_best,d_bar,baseline";

std::string FormatTrace(const TrainingTrace& trace);
TrainingTrace ParseTrace(std::string_view text);
void ExportTrace(const TrainingTrace& trace, const std::string& path);

// SVG line chart. D_bar and the baseline use the left [0, 1] axis as true
// proportions; every other series is min-max scaled into [0, 1] and labeled
// "scaled".
std::string FormatConvergenceChart(const TrainingTrace& trace);
void RenderConvergenceChart(const TrainingTrace& trace,
                            const std::string& path);

}  // namespace fan

#endif  // FAN_METRICS_H_
