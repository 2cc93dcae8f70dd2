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

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace hdspeech;
using namespace hdspeech::testing;
using Catch::Approx;

namespace {

constexpr int kRate = 16000;
const FrameGrid kRect = FrameGrid{}.with_window(WindowKind::kRectangular);

std::vector<double> tone(double seconds) {
  return sine(180.0, 0.5, static_cast<std::size_t>(seconds * kRate), kRate);
}

SegmentList segment(const std::vector<double>& x) {
  const AudioSignal s(x, kRate);
  const PitchTrack p = estimate_f0(frame_signal(s, kRect));
  return detect_pauses(s, kRect, p.voicing);
}

void check_tiling(const SegmentList& l) {
  REQUIRE_FALSE(l.segments.empty());
  CHECK(l.segments.front().start_s == 0.0);
  CHECK(l.segments.back().end_s == Approx(l.total_duration_s).margin(1e-12));
  double sum = 0.0;
  for (std::size_t i = 0; i < l.segments.size(); ++i) {
    const Segment& s = l.segments[i];
    CHECK(s.end_s > s.start_s);
    sum += s.duration_s();
    if (i > 0) {
      CHECK(s.start_s == l.segments[i - 1].end_s);
      CHECK(s.kind != l.segments[i - 1].kind);
    }
  }
  CHECK(std::abs(sum - l.total_duration_s) <= 1e-9);
}

SegmentList pauses_of(std::initializer_list<double> durations, double gap, double total) {
  std::vector<std::pair<double, double>> p;
  double t = gap;
  for (double d : durations) {
    p.emplace_back(t, t + d);
    t += d + gap;
  }
  return segments_from_pauses(p, total);
}

VoicingMask mask(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> unvoiced) {
  VoicingMask m{std::vector<bool>(n, true)};
  for (auto [a, b] : unvoiced) {
    for (std::size_t i = a; i < b; ++i) m.voiced[i] = false;
  }
  return m;
}

RecordingPlan vowel_plan(std::initializer_list<std::pair<PlanKind, double>> segs) {
  RecordingPlan plan;
  double f0 = 120.0;
  for (auto [kind, d] : segs) {
    PlanSegment s;
    s.kind = kind;
    s.duration_s = d;
    s.f0_hz = f0;
    s.noise_snr_db = 35.0;
    f0 += 7.0;
    plan.segments.push_back(s);
  }
  return plan;
}

}  // namespace

TEST_CASE("detect_pauses", "[segmental]") {
  SECTION("tone, 0.3 s silence, tone") {
    const SegmentList l = segment(concat({tone(1.0), silence(4800), tone(1.0)}));
    check_tiling(l);
    CHECK(l.pause_count() == 1);
    CHECK(total_pause_time(l, 0.0) == Approx(0.30).margin(0.02));
  }
  SECTION("continuous tone") {
    const SegmentList l = segment(tone(1.5));
    REQUIRE(l.segments.size() == 1);
    CHECK(l.segments[0].kind == SegmentKind::kSpeech);
    CHECK(total_pause_time(l, 0.0) == 0.0);
  }
  SECTION("15 ms gap is below the floor") {
    const SegmentList l = segment(concat({tone(1.0), silence(240), tone(1.0)}));
    CHECK(l.pause_count() == 0);
  }
  SECTION("several gaps") {
    const SegmentList l =
        segment(concat({tone(0.5), silence(1600), tone(0.4), silence(8000), tone(0.3), silence(3200), tone(0.5)}));
    check_tiling(l);
    CHECK(l.pause_count() == 3);
    CHECK(total_pause_time(l, 0.0) == Approx(0.1 + 0.5 + 0.2).margin(0.03));
  }
}

TEST_CASE("total_pause_time", "[segmental]") {
  const SegmentList l = pauses_of({0.100, 0.040, 0.200}, 0.5, 3.0);
  check_tiling(l);
  CHECK(total_pause_time(l, 0.0) == Approx(0.340).margin(1e-12));
  CHECK(total_pause_time(l, 50.0) == Approx(0.300).margin(1e-12));
  CHECK(total_pause_time(segments_from_pauses({}, 2.0), 0.0) == 0.0);
}

TEST_CASE("TPT is monotone in the threshold", "[segmental][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.01, 0.4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> p;
    double t = 0.2;
    for (int k = 0; k < 6; ++k) {
      const double len = d(rng);
      p.emplace_back(t, t + len);
      t += len + 0.3;
    }
    const SegmentList l = segments_from_pauses(p, t);
    check_tiling(l);
    double prev = total_pause_time(l, 0.0);
    for (double ms = 10.0; ms <= 500.0; ms += 10.0) {
      const double cur = total_pause_time(l, ms);
      CHECK(cur <= prev);
      prev = cur;
    }
    CHECK(total_pause_time(l, 0.0) >= total_pause_time(l, 50.0));
  }
}

TEST_CASE("voice_breaks", "[segmental]") {
  const std::size_t frames = frame_count(2 * kRate, 400, 160);
  const SegmentList speech = segments_from_pauses({}, 2.0);
  SECTION("fully voiced") {
    const VoiceBreaks b = voice_breaks(mask(frames, {}), speech, kRect);
    CHECK(b.count == 0.0);
    CHECK(b.degree_percent == 0.0);
  }
  SECTION("one 120 ms gap in 2 s") {
    const VoiceBreaks b = voice_breaks(mask(frames, {{80, 92}}), speech, kRect);
    CHECK(b.count == 1.0);
    CHECK(b.degree_percent == Approx(6.0).margin(1e-9));
  }
  SECTION("80 ms gap is too short") {
    CHECK(voice_breaks(mask(frames, {{80, 88}}), speech, kRect).count == 0.0);
  }
  SECTION("edge runs are not bounded") {
    const VoiceBreaks b = voice_breaks(mask(frames, {{0, 30}, {frames - 20, frames}}), speech, kRect);
    CHECK(b.count == 0.0);
    CHECK(b.degree_percent == 0.0);
  }
  SECTION("runs inside pauses do not count") {
    const SegmentList l = segments_from_pauses({{0.8, 1.0}}, 2.0);
    CHECK(voice_breaks(mask(frames, {{79, 99}}), l, kRect).count == 0.0);
  }
  SECTION("zero speech duration") {
    const SegmentList l = segments_from_pauses({{0.0, 2.0}}, 2.0);
    CHECK_THROWS_AS(voice_breaks(mask(frames, {}), l, kRect), Error);
  }
}

TEST_CASE("articulation_rate", "[segmental]") {
  SECTION("four vowel bursts in 2 s of phonation") {
    const auto rec = assemble_recording(vowel_plan({{PlanKind::kVowel, 0.5},
                                                    {PlanKind::kPause, 0.3},
                                                    {PlanKind::kVowel, 0.5},
                                                    {PlanKind::kPause, 0.3},
                                                    {PlanKind::kVowel, 0.5},
                                                    {PlanKind::kPause, 0.3},
                                                    {PlanKind::kVowel, 0.5}}),
                                        1);
    const PitchTrack p = estimate_f0(frame_signal(rec.signal, kRect));
    const SegmentList l = detect_pauses(rec.signal, kRect, p.voicing);
    CHECK(articulation_rate(rec.signal, kRect, p.voicing, l) == Approx(2.0).margin(0.5));
  }
  SECTION("one continuous vowel") {
    const AudioSignal v = synth_vowel(130.0, {{{700.0, 60.0}, {1220.0, 80.0}, {2600.0, 120.0}}}, 1.0, kRate, 35.0, 2);
    const PitchTrack p = estimate_f0(frame_signal(v, kRect));
    const SegmentList l = detect_pauses(v, kRect, p.voicing);
    CHECK(articulation_rate(v, kRect, p.voicing, l) == Approx(1.0).margin(0.5));
  }
  SECTION("silence only") {
    const AudioSignal s(silence(kRate), kRate);
    const PitchTrack p = estimate_f0(frame_signal(s, kRect));
    const SegmentList l = detect_pauses(s, kRect, p.voicing);
    CHECK_THROWS_AS(articulation_rate(s, kRect, p.voicing, l), Error);
  }
}

TEST_CASE("spir", "[segmental]") {
  CHECK(spir(pauses_of({0.2, 0.3, 0.06}, 1.0, 60.0)) == Approx(3.0));
  CHECK(spir(segments_from_pauses({}, 60.0)) == 0.0);
  CHECK(spir(pauses_of({0.04}, 1.0, 30.0)) == 0.0);
  CHECK_THROWS_AS(spir(SegmentList{}), Error);
}

TEST_CASE("inserting a 200 ms gap", "[segmental][property]") {
  std::mt19937_64 rng(21);
  int tested = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const RecordingPlan plan = draw_plan(trial % 2 ? pd_like_profile() : hc_like_profile(), rng());
    // find adjacent voiced vowels and split them with a new silence
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < plan.segments.size(); ++i) {
      const auto& a = plan.segments[i];
      const auto& b = plan.segments[i + 1];
      if (a.kind == PlanKind::kVowel && b.kind == PlanKind::kVowel && !a.is_unvoiced() && !b.is_unvoiced()) {
        at = i + 1;
        break;
      }
    }
    if (at == 0) continue;
    ++tested;
    RecordingPlan more = plan;
    PlanSegment gap;
    gap.kind = PlanKind::kPause;
    gap.duration_s = 0.2;
    more.segments.insert(more.segments.begin() + static_cast<long>(at), gap);

    const std::uint64_t seed = 99;
    const RecordingAnalysis a = analyze_recording(assemble_recording(plan, seed).signal);
    const RecordingAnalysis b = analyze_recording(assemble_recording(more, seed).signal);
    INFO("trial " << trial);
    CHECK(*b.scalars.at("TPT") - *a.scalars.at("TPT") == Approx(0.2).margin(0.03));
    CHECK(*b.scalars.at("NVB") + static_cast<double>(b.segments.pause_count()) ==
          *a.scalars.at("NVB") + static_cast<double>(a.segments.pause_count()) + 1.0);
  }
  CHECK(tested >= 3);
}

TEST_CASE("fluency scalars under amplitude scaling", "[segmental][property]") {
  const RecordingPlan plan = draw_plan(pd_like_profile(), 5);
  const AudioSignal base = assemble_recording(plan, 6).signal;
  const RecordingAnalysis a = analyze_recording(base);
  for (double k : {0.1, 2.0}) {
    std::vector<double> x(base.samples().begin(), base.samples().end());
    for (double& v : x) v *= k;
    const RecordingAnalysis b = analyze_recording(AudioSignal(x, base.sample_rate_hz()));
    for (const char* name : {"NVB", "DVB", "TPT", "TPT50", "AR", "SPIR"}) {
      INFO(name << " at scale " << k);
      REQUIRE(a.scalars.at(name).has_value());
      REQUIRE(b.scalars.at(name).has_value());
      CHECK(*b.scalars.at(name) == Approx(*a.scalars.at(name)).epsilon(1e-9).margin(1e-12));
    }
  }
}

TEST_CASE("fluency scalar ranges on synthetic recordings", "[segmental][property]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const RecordingPlan plan = draw_plan(seed % 2 ? pd_like_profile() : hc_like_profile(), seed);
    const RecordingAnalysis a = analyze_recording(assemble_recording(plan, seed).signal);
    check_tiling(a.segments);
    const double nvb = *a.scalars.at("NVB"), dvb = *a.scalars.at("DVB");
    const double tpt = *a.scalars.at("TPT"), tpt50 = *a.scalars.at("TPT50");
    CHECK(nvb >= 0.0);
    CHECK(dvb >= 0.0);
    CHECK(dvb <= 100.0);
    CHECK(tpt50 >= 0.0);
    CHECK(tpt50 <= tpt);
    CHECK(tpt <= a.duration_s);
    CHECK(*a.scalars.at("AR") >= 0.0);
    CHECK(*a.scalars.at("SPIR") >= 0.0);
  }
}
