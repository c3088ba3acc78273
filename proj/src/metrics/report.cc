// src/metrics/report.cc

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

#include "metrics/report.h"

#include <fstream>

#include "base/error.h"
#include "json.hpp"

namespace lipmel::metrics {

namespace {

using Json = nlohmann::ordered_json;

Json value(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> mean_of(const std::vector<EvalRow>& rows,
                              std::optional<double> EvalRow::*field) {
  double s = 0;
  std::size_t n = 0;
  for (const auto& r : rows)
    if (r.*field) s += *(r.*field), ++n;
  if (n == 0) return std::nullopt;
  return s / static_cast<double>(n);
}

}  // namespace

EvalSummary summarize(const std::vector<EvalRow>& rows) {
  EvalSummary s;
  s.clips = rows.size();
  for (const auto& r : rows) s.failed += r.status != "ok";
  s.estoi = mean_of(rows, &EvalRow::estoi);
  s.mel_mse = mean_of(rows, &EvalRow::mel_mse);
  s.wer = mean_of(rows, &EvalRow::wer);
  s.cer = mean_of(rows, &EvalRow::cer);
  return s;
}

std::string format_report(const std::vector<EvalRow>& rows) {
  std::string out;
  Json header;
  header["record"] = "header";
  header["fields"] = {"clip_id", "estoi", "mel_mse", "wer", "cer", "status"};
  header["version"] = 1;
  out += header.dump() + "\n";
  for (const auto& r : rows) {
    Json j;
    j["clip_id"] = r.clip_id;
    j["estoi"] = value(r.estoi);
    j["mel_mse"] = value(r.mel_mse);
    j["wer"] = value(r.wer);
    j["cer"] = value(r.cer);
    j["status"] = r.status;
    out += j.dump() + "\n";
  }
  if (rows.empty()) return out;
  const auto s = summarize(rows);
  Json j;
  j["record"] = "summary";
  j["clips"] = s.clips;
  j["failed"] = s.failed;
  j["estoi"] = value(s.estoi);
  j["mel_mse"] = value(s.mel_mse);
  j["wer"] = value(s.wer);
  j["cer"] = value(s.cer);
  out += j.dump() + "\n";
  return out;
}

void write_report(const std::string& path, const std::vector<EvalRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write report '" + path + "'");
  out << format_report(rows);
  if (!out) throw IoError("write failed for report '" + path + "'");
}

}  // namespace lipmel::metrics
