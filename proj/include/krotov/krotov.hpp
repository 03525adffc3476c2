// Copyright 2026 The krotov-lq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "krotov/builtin.hpp"
#include "krotov/csv.hpp"
#include "krotov/error.hpp"
#include "krotov/iterative.hpp"
#include "krotov/krotov_core.hpp"
#include "krotov/linalg.hpp"
#include "krotov/model.hpp"
#include "krotov/ode.hpp"
#include "krotov/path.hpp"
#include "krotov/quadrature.hpp"
#include "krotov/scenario.hpp"
#include "krotov/sim.hpp"
#include "krotov/solvers.hpp"
#include "krotov/tracking.hpp"
#include "krotov/trajectory.hpp"
