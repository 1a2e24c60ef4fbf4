//------------------------------------------------------------------------------
//
//   Copyright 2026 The csg Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#pragma once

#include "csg/baselines.hpp"
#include "csg/cdp.hpp"
#include "csg/core.hpp"
#include "csg/dips.hpp"
#include "csg/distributions.hpp"
#include "csg/grad.hpp"
#include "csg/io.hpp"
#include "csg/offline.hpp"
#include "csg/partition_graph.hpp"
#include "csg/search_state.hpp"
#include "csg/smart.hpp"
