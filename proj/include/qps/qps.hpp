// Copyright 2026 The qps Authors.
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

#include "qps/bitset.hpp"
#include "qps/census.hpp"
#include "qps/collineation.hpp"
#include "qps/error.hpp"
#include "qps/forms.hpp"
#include "qps/gf.hpp"
#include "qps/io.hpp"
#include "qps/linalg.hpp"
#include "qps/parallel.hpp"
#include "qps/pg.hpp"
#include "qps/report.hpp"
#include "qps/spectra.hpp"
#include "qps/surgery.hpp"
