// Copyright 2026 The BSPGC Authors
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

#include "bspgc/copula.hpp"
#include "bspgc/dirichlet_process.hpp"
#include "bspgc/energy.hpp"
#include "bspgc/errors.hpp"
#include "bspgc/linalg.hpp"
#include "bspgc/mvn_test.hpp"
#include "bspgc/rbr.hpp"
#include "bspgc/rng.hpp"
#include "bspgc/samplers.hpp"
#include "bspgc/special_functions.hpp"
