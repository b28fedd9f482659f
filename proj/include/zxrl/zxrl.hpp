// Copyright 2026 The zxrl Authors
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

#pragma once

#include "zxrl/bench.hpp"
#include "zxrl/checkpoint.hpp"
#include "zxrl/circuit.hpp"
#include "zxrl/config.hpp"
#include "zxrl/convert.hpp"
#include "zxrl/diagram.hpp"
#include "zxrl/diagram_io.hpp"
#include "zxrl/env.hpp"
#include "zxrl/error.hpp"
#include "zxrl/extract.hpp"
#include "zxrl/nn.hpp"
#include "zxrl/peephole.hpp"
#include "zxrl/phase.hpp"
#include "zxrl/ppo.hpp"
#include "zxrl/rewrite.hpp"
#include "zxrl/simplify.hpp"
#include "zxrl/tensor.hpp"
#include "zxrl/verify.hpp"
