// Copyright 2026 The loopbs Authors
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

#pragma once

#include "loopbs/analysis.hpp"
#include "loopbs/compiler.hpp"
#include "loopbs/error.hpp"
#include "loopbs/io.hpp"
#include "loopbs/loop_model.hpp"
#include "loopbs/matrix.hpp"
#include "loopbs/permanent.hpp"
#include "loopbs/rng.hpp"
#include "loopbs/sampler.hpp"
