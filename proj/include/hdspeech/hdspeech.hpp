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

// Umbrella header for the whole library.
#pragma once

#include "hdspeech/audio_io.hpp"
#include "hdspeech/contour.hpp"
#include "hdspeech/corpus.hpp"
#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"
#include "hdspeech/forest.hpp"
#include "hdspeech/formants.hpp"
#include "hdspeech/frame_features.hpp"
#include "hdspeech/functionals.hpp"
#include "hdspeech/io.hpp"
#include "hdspeech/metrics.hpp"
#include "hdspeech/parallel.hpp"
#include "hdspeech/pitch.hpp"
#include "hdspeech/report.hpp"
#include "hdspeech/seeding.hpp"
#include "hdspeech/segmental.hpp"
#include "hdspeech/sffs.hpp"
#include "hdspeech/spectrum.hpp"
#include "hdspeech/statcorr.hpp"
#include "hdspeech/synth.hpp"
#include "hdspeech/validation.hpp"
