// Copyright 2026 The vbem Authors
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


#ifndef VBEM_VBEM_HPP
#define VBEM_VBEM_HPP

#include "vbem/angle.hpp"
#include "vbem/estimate/bound.hpp"
#include "vbem/estimate/minimize.hpp"
#include "vbem/manifest.hpp"
#include "vbem/mitigate/analysis.hpp"
#include "vbem/mitigate/calibrate.hpp"
#include "vbem/mitigate/protocol.hpp"
#include "vbem/mitigate/report.hpp"
#include "vbem/mitigate/schedule.hpp"
#include "vbem/noise/calibrated.hpp"
#include "vbem/noise/schedule.hpp"
#include "vbem/pattern/cnot15.hpp"
#include "vbem/pattern/compile.hpp"
#include "vbem/pattern/graph.hpp"
#include "vbem/pattern/pattern.hpp"
#include "vbem/rng.hpp"
#include "vbem/rounds/executor.hpp"
#include "vbem/rounds/oracle.hpp"
#include "vbem/rounds/rounds.hpp"
#include "vbem/rounds/transcript_io.hpp"
#include "vbem/sim/noise_model.hpp"
#include "vbem/sim/statevector.hpp"

#endif
