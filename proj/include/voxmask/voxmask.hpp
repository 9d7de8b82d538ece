// Copyright 2026 The Voxmask Authors. All Rights Reserved.
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

#ifndef VOXMASK_VOXMASK_HPP_
#define VOXMASK_VOXMASK_HPP_

#include "voxmask/audio.hpp"
#include "voxmask/corpus.hpp"
#include "voxmask/csv.hpp"
#include "voxmask/error.hpp"
#include "voxmask/features.hpp"
#include "voxmask/fft.hpp"
#include "voxmask/model_store.hpp"
#include "voxmask/mos.hpp"
#include "voxmask/phase_vocoder.hpp"
#include "voxmask/report.hpp"
#include "voxmask/schedule.hpp"
#include "voxmask/speaker_id.hpp"
#include "voxmask/stft.hpp"
#include "voxmask/sweep.hpp"
#include "voxmask/vtln.hpp"
#include "voxmask/wav.hpp"

#endif  // VOXMASK_VOXMASK_HPP_
