// Copyright 2026 The hdspeech Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file corpus.hpp
 * @brief Two-class synthetic corpus: per-class plan distributions, seeded
 * plan drawing, and the on-disk layout (WAVs, manifest.csv,
 * ground_truth.json).
 *
 * Recording i of class c draws its plan from derive_seed(master, {c, i, 0})
 * and synthesizes from derive_seed(master, {c, i, 1}); c is 1 for PD and 0
 * for HC.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"
#include "hdspeech/io.hpp"
#include "hdspeech/seeding.hpp"
#include "hdspeech/synth.hpp"

namespace hdspeech {

/// Vowel qualities the plans cycle through (F1, F2, F3 in Hz).
inline constexpr std::array<std::array<double, 3>, 5> kVowelTable = {{
    {730.0, 1090.0, 2440.0},
    {530.0, 1840.0, 2480.0},
    {270.0, 2290.0, 3010.0},
    {570.0, 840.0, 2410.0},
    {300.0, 870.0, 2240.0},
}};
inline constexpr std::array<double, 3> kVowelBandwidths = {60.0, 90.0, 120.0};

struct ClassProfile {
  int vowels_min = 6;
  int vowels_max = 8;
  double vowel_min_s = 0.25;
  double vowel_max_s = 0.55;
  double speaker_f0_min_hz = 100.0;
  double speaker_f0_max_hz = 180.0;
  double f0_spread_semitones = 2.0;  // sd of per-vowel F0 around the speaker's
  double vibrato_semitones = 0.2;
  double pause_probability = 0.4;  // per gap between consecutive vowels
  double pause_mean_s = 0.1;
  double pause_sd_s = 0.03;
  double pause_min_s = 0.06;
  double break_probability = 0.05;  // per gap without a pause
  double break_min_s = 0.12;
  double break_max_s = 0.2;
  double snr_min_db = 24.0;
  double snr_max_db = 40.0;

  void validate() const {
    auto fail = [](const char* what) { throw Error(ErrorCode::kInvalidArgument, what); };
    if (vowels_min < 1 || vowels_max < vowels_min) fail("vowel count range is empty");
    if (!(vowel_min_s > 0.0) || vowel_max_s < vowel_min_s) fail("vowel duration range is invalid");
    if (!(speaker_f0_min_hz >= kMinSynthF0Hz) || speaker_f0_max_hz < speaker_f0_min_hz ||
        speaker_f0_max_hz > kMaxSynthF0Hz) {
      fail("speaker F0 range must lie in [60, 400] Hz");
    }
    if (f0_spread_semitones < 0.0 || vibrato_semitones < 0.0) fail("F0 spreads must be non-negative");
    if (pause_probability < 0.0 || pause_probability > 1.0 || break_probability < 0.0 || break_probability > 1.0) {
      fail("probabilities must lie in [0, 1]");
    }
    if (!(pause_min_s > 0.0) || pause_sd_s < 0.0 || pause_mean_s < pause_min_s) fail("pause distribution is invalid");
    if (!(break_min_s > 0.0) || break_max_s < break_min_s) fail("break duration range is invalid");
    if (snr_max_db < snr_min_db) fail("SNR range is empty");
  }
};

/// Longer and more frequent pauses, flatter F0, more breaks, noisier voice.
inline ClassProfile pd_like_profile() {
  ClassProfile p;
  p.f0_spread_semitones = 0.5;
  p.pause_probability = 0.7;
  p.pause_mean_s = 0.4;
  p.pause_sd_s = 0.1;
  p.pause_min_s = 0.15;
  p.break_probability = 0.2;
  p.snr_min_db = 20.0;
  p.snr_max_db = 30.0;
  return p;
}

inline ClassProfile hc_like_profile() { return ClassProfile{}; }

struct CorpusSpec {
  int n_pd = 50;
  int n_hc = 50;
  ClassProfile pd = pd_like_profile();
  ClassProfile hc = hc_like_profile();
  std::uint64_t master_seed = 1;
  int sample_rate_hz = kAnalysisRateHz;

  void validate() const {
    if (n_pd < 0 || n_hc < 0 || n_pd + n_hc == 0) {
      throw Error(ErrorCode::kInvalidArgument, "class counts must be non-negative and not both zero");
    }
    if (sample_rate_hz < kMinSampleRateHz) throw Error(ErrorCode::kInvalidArgument, "sample rate below 8000 Hz");
    pd.validate();
    hc.validate();
  }
};

/// One recording plan drawn from `profile`.
inline RecordingPlan draw_plan(const ClassProfile& profile, std::uint64_t seed, int sample_rate_hz = kAnalysisRateHz) {
  profile.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::normal_distribution<double> normal(0.0, 1.0);

  const int vowels = profile.vowels_min + static_cast<int>(unit(rng) * (profile.vowels_max - profile.vowels_min + 1));
  const double speaker_f0 = uniform(profile.speaker_f0_min_hz, profile.speaker_f0_max_hz);
  const double tract = uniform(0.95, 1.05);
  const double snr = uniform(profile.snr_min_db, profile.snr_max_db);

  RecordingPlan plan;
  plan.sample_rate_hz = sample_rate_hz;
  for (int v = 0; v < vowels; ++v) {
    PlanSegment seg;
    seg.duration_s = uniform(profile.vowel_min_s, profile.vowel_max_s);
    seg.f0_hz = std::clamp(speaker_f0 * std::exp2(profile.f0_spread_semitones * normal(rng) / 12.0), kMinSynthF0Hz,
                           kMaxSynthF0Hz / std::exp2(profile.vibrato_semitones / 12.0));
    seg.f0_vibrato_semitones = profile.vibrato_semitones;
    const auto& q = kVowelTable[static_cast<std::size_t>(unit(rng) * kVowelTable.size()) % kVowelTable.size()];
    for (std::size_t k = 0; k < 3; ++k) seg.formants[k] = {q[k] * tract, kVowelBandwidths[k]};
    seg.noise_snr_db = snr;
    plan.segments.push_back(seg);

    if (v + 1 == vowels) break;
    if (unit(rng) < profile.pause_probability) {
      PlanSegment pause;
      pause.kind = PlanKind::kPause;
      pause.duration_s = std::max(profile.pause_min_s, profile.pause_mean_s + profile.pause_sd_s * normal(rng));
      plan.segments.push_back(pause);
    } else if (unit(rng) < profile.break_probability) {
      PlanSegment br = seg;
      br.noise_snr_db = kNoiseOnly;
      br.duration_s = uniform(profile.break_min_s, profile.break_max_s);
      plan.segments.push_back(br);
    }
  }
  return plan;
}

struct CorpusEntry {
  std::string id;
  Label label = Label::kHC;
  RecordingPlan plan;
  std::uint64_t synth_seed = 0;
};

/// Every recording's id, label, plan and synthesis seed; PD rows first.
inline std::vector<CorpusEntry> plan_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<CorpusEntry> out;
  for (Label label : {Label::kPD, Label::kHC}) {
    const int n = label == Label::kPD ? spec.n_pd : spec.n_hc;
    const ClassProfile& profile = label == Label::kPD ? spec.pd : spec.hc;
    const auto c = static_cast<std::uint64_t>(label);
    for (int i = 0; i < n; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "%s_%03d", to_string(label).c_str(), i);
      const auto ui = static_cast<std::uint64_t>(i);
      out.push_back({id, label, draw_plan(profile, derive_seed(spec.master_seed, {c, ui, 0}), spec.sample_rate_hz),
                     derive_seed(spec.master_seed, {c, ui, 1})});
    }
  }
  return out;
}

inline nlohmann::json plan_to_json(const RecordingPlan& plan) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : plan.segments) {
    nlohmann::json j;
    j["kind"] = s.kind == PlanKind::kPause ? "pause" : "vowel";
    j["duration_s"] = s.duration_s;
    if (s.kind == PlanKind::kVowel) {
      j["f0_hz"] = s.f0_hz;
      j["f0_vibrato_semitones"] = s.f0_vibrato_semitones;
      j["formants"] = nlohmann::json::array();
      for (const auto& f : s.formants) j["formants"].push_back({f.freq_hz, f.bw_hz});
      // JSON has no infinity; null marks a noise-only segment
      j["noise_snr_db"] = s.noise_snr_db == kNoiseOnly ? nlohmann::json(nullptr) : nlohmann::json(s.noise_snr_db);
    }
    segs.push_back(std::move(j));
  }
  return {{"sample_rate_hz", plan.sample_rate_hz}, {"segments", std::move(segs)}};
}

inline RecordingPlan plan_from_json(const nlohmann::json& j) {
  try {
    RecordingPlan plan;
    plan.sample_rate_hz = j.at("sample_rate_hz").get<int>();
    for (const auto& s : j.at("segments")) {
      PlanSegment seg;
      seg.duration_s = s.at("duration_s").get<double>();
      if (s.at("kind").get<std::string>() == "pause") {
        seg.kind = PlanKind::kPause;
      } else {
        seg.f0_hz = s.at("f0_hz").get<double>();
        seg.f0_vibrato_semitones = s.at("f0_vibrato_semitones").get<double>();
        for (std::size_t k = 0; k < 3; ++k) {
          seg.formants[k] = {s.at("formants").at(k).at(0).get<double>(), s.at("formants").at(k).at(1).get<double>()};
        }
        seg.noise_snr_db = s.at("noise_snr_db").is_null() ? kNoiseOnly : s.at("noise_snr_db").get<double>();
      }
      plan.segments.push_back(seg);
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("recording plan: ") + e.what());
  }
}

inline nlohmann::json truth_to_json(const GroundTruth& t) {
  nlohmann::json pauses = nlohmann::json::array();
  for (const auto& [a, b] : t.pauses) pauses.push_back({a, b});
  return {{"pauses", std::move(pauses)},
          {"total_pause_s", t.total_pause_s},
          {"voice_breaks", t.voice_breaks},
          {"duration_s", t.duration_s}};
}

struct CorpusSummary {
  std::filesystem::path manifest_path;
  std::filesystem::path ground_truth_path;
  std::size_t n_pd = 0;
  std::size_t n_hc = 0;
};

/// Writes <id>.wav per recording plus manifest.csv and ground_truth.json into
/// `out_dir` (created if absent). Output bytes depend only on `spec`.
inline CorpusSummary generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
  const auto entries = plan_corpus(spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + out_dir.string());
  }
  CorpusSummary summary;
  std::vector<ManifestRow> manifest;
  nlohmann::json recordings = nlohmann::json::object();
  for (const auto& e : entries) {
    const AssembledRecording rec = assemble_recording(e.plan, e.synth_seed);
    const std::string file = e.id + ".wav";
    write_wav(out_dir / file, rec.signal);
    manifest.push_back({e.id, file, e.label});
    recordings[e.id] = {{"label", to_string(e.label)},
                        {"path", file},
                        {"synth_seed", e.synth_seed},
                        {"plan", plan_to_json(e.plan)},
                        {"truth", truth_to_json(rec.truth)}};
    (e.label == Label::kPD ? summary.n_pd : summary.n_hc) += 1;
  }
  summary.manifest_path = out_dir / "manifest.csv";
  summary.ground_truth_path = out_dir / "ground_truth.json";
  write_manifest(summary.manifest_path, manifest);
  const nlohmann::json doc = {{"schema_version", 1},
                              {"master_seed", spec.master_seed},
                              {"sample_rate_hz", spec.sample_rate_hz},
                              {"recordings", std::move(recordings)}};
  detail::write_text(summary.ground_truth_path, doc.dump(2) + "\n");
  return summary;
}

}  // namespace hdspeech
