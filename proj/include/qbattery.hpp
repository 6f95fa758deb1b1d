// Copyright 2026 The qbattery Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qbattery/analytic.hpp"
#include "qbattery/config.hpp"
#include "qbattery/csv.hpp"
#include "qbattery/device.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/hamiltonian.hpp"
#include "qbattery/integrator.hpp"
#include "qbattery/observables.hpp"
#include "qbattery/plot.hpp"
#include "qbattery/pulses.hpp"
#include "qbattery/readout.hpp"
#include "qbattery/rng.hpp"
#include "qbattery/state.hpp"
