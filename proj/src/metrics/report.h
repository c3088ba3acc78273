// src/metrics/report.h

// Copyright 2026  The lipmel Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LIPMEL_METRICS_REPORT_H_
#define LIPMEL_METRICS_REPORT_H_

#include <optional>
#include <string>
#include <vector>

namespace lipmel::metrics {

struct EvalRow {
  std::string clip_id;
  std::optional<double> estoi;
  std::optional<double> mel_mse;
  std::optional<double> wer;
  std::optional<double> cer;
  std::string status = "ok";  // "ok" or a failure reason
};

struct EvalSummary {
  std::size_t clips = 0;
  std::size_t failed = 0;
  std::optional<double> estoi;
  std::optional<double> mel_mse;
  std::optional<double> wer;
  std::optional<double> cer;
};

// Means over rows that carry each field.
EvalSummary summarize(const std::vector<EvalRow>& rows);

// One JSON object per line: a header record, one record per row with keys
// clip_id, estoi, mel_mse, wer, cer, status in that order (missing values
// are null), then a summary record.
std::string format_report(const std::vector<EvalRow>& rows);
void write_report(const std::string& path, const std::vector<EvalRow>& rows);

}  // namespace lipmel::metrics

#endif  // LIPMEL_METRICS_REPORT_H_
