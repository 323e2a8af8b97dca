// Copyright 2026 The mpsim Authors
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

#include "mpsim/bench.hpp"
#include "mpsim/canonical.hpp"
#include "mpsim/circuit.hpp"
#include "mpsim/errors.hpp"
#include "mpsim/gate.hpp"
#include "mpsim/linalg.hpp"
#include "mpsim/mps.hpp"
#include "mpsim/qasm.hpp"
#include "mpsim/rng.hpp"
#include "mpsim/simple_update.hpp"
#include "mpsim/statevector.hpp"
#include "mpsim/tensor.hpp"
