// Copyright 2026 The qbias Authors
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

/// @file qbias.hpp
/// Umbrella header.

#pragma once

#include "qbias/ansatz.hpp"
#include "qbias/boolfn.hpp"
#include "qbias/encode.hpp"
#include "qbias/error.hpp"
#include "qbias/express.hpp"
#include "qbias/gen.hpp"
#include "qbias/kernel.hpp"
#include "qbias/model.hpp"
#include "qbias/parallel.hpp"
#include "qbias/prior.hpp"
#include "qbias/qsim.hpp"
#include "qbias/rational_lp.hpp"
#include "qbias/rng.hpp"
#include "qbias/spsa.hpp"
#include "qbias/stats.hpp"
#include "qbias/table.hpp"
