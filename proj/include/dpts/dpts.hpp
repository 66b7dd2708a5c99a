// Copyright 2026 The dpts Authors
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

#ifndef DPTS_DPTS_HPP_
#define DPTS_DPTS_HPP_

#include "dpts/bounds.hpp"
#include "dpts/core.hpp"
#include "dpts/estimators.hpp"
#include "dpts/intervals.hpp"
#include "dpts/mechanism.hpp"
#include "dpts/normal.hpp"
#include "dpts/rng.hpp"
#include "dpts/sim.hpp"

#endif  // DPTS_DPTS_HPP_
