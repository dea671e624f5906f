// Copyright 2026 The permcount Authors.
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

#ifndef PERMCOUNT_PERMCOUNT_HPP
#define PERMCOUNT_PERMCOUNT_HPP

#include "permcount/cards.hpp"
#include "permcount/estimate.hpp"
#include "permcount/exact.hpp"
#include "permcount/graph.hpp"
#include "permcount/latin.hpp"
#include "permcount/matching.hpp"
#include "permcount/parallel.hpp"
#include "permcount/rng.hpp"
#include "permcount/sbm.hpp"
#include "permcount/scaling.hpp"
#include "permcount/sis.hpp"

#endif  // PERMCOUNT_PERMCOUNT_HPP
